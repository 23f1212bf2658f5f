// Shared random-configuration generator for property sweeps.
#pragma once

#include <random>

#include "dudnet/model.hpp"

namespace testcfg {

// Random valid configuration: alpha_m in [2.5, 4], alpha_s in [2, 4],
// downlink/uplink power offsets in [0, 30] dB with the Q/P ordering
// invariant honored by construction, density ratio log-uniform in
// [0.1, 100].
inline dudnet::model::NetworkConfig random_config(std::mt19937& gen) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  dudnet::model::NetworkConfig cfg;
  cfg.g_m_dbi = 0.0;
  cfg.g_s_dbi = 0.0;
  cfg.alpha_m = 2.5 + 1.5 * unif(gen);
  cfg.alpha_s = 2.0 + 2.0 * unif(gen);
  cfg.p_m_dbm = 40.0;
  const double off_p = 30.0 * unif(gen);
  cfg.p_s_dbm = cfg.p_m_dbm - std::max(off_p, 0.1);
  cfg.q_m_dbm = 20.0;
  cfg.q_s_dbm = cfg.q_m_dbm - std::max(off_p, 0.1) * unif(gen);
  cfg.lambda_m = 1e-6;
  cfg.lambda_s = cfg.lambda_m * std::pow(10.0, -1.0 + 3.0 * unif(gen));
  return cfg;
}

}  // namespace testcfg
