#include "dudnet/model.hpp"

#include <cmath>

#include "dudnet/errors.hpp"

namespace dudnet::model {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

NetworkConfig NetworkConfig::nlos_default() { return NetworkConfig{}; }

NetworkConfig NetworkConfig::los_default() {
  NetworkConfig cfg;
  cfg.alpha_s = 2.0;
  return cfg;
}

double NetworkConfig::mu_effective() const {
  if (mu > 0.0) return mu;
  return 10.0 / std::sqrt(kPi * lambda_m);
}

void NetworkConfig::validate() const {
  if (!(lambda_m > 0.0) || !(lambda_s > 0.0))
    throw ConfigError("NetworkConfig: densities must be positive");
  if (lambda_iu_effective() < 0.0)
    throw ConfigError("NetworkConfig: lambda_iu must be non-negative");
  if (!(alpha_m > 2.0))
    throw ConfigError("NetworkConfig: alpha_m must exceed 2");
  if (!(alpha_s >= 2.0))
    throw ConfigError("NetworkConfig: alpha_s must be at least 2");
  if (!(p_bar_m() > p_bar_s()))
    throw ConfigError("NetworkConfig: requires P_M G_M > P_S G_S");
  if (q_bar_s() / q_bar_m() < p_bar_s() / p_bar_m())
    throw ConfigError(
        "NetworkConfig: requires Q_S G_S / Q_M G_M >= P_S G_S / P_M G_M");
  if (!(w_m > 0.0) || !(w_s > 0.0))
    throw ConfigError("NetworkConfig: bandwidths must be positive");
  if (shadow_sigma_db < 0.0)
    throw ConfigError("NetworkConfig: shadowing std must be non-negative");
}

double DerivedParams::xi5(double g_value, double lambda_int) const {
  return std::sqrt(kPi * (lambda_m + lambda_int * g_value));
}

DerivedParams derive(const NetworkConfig& cfg) {
  cfg.validate();
  DerivedParams d;
  const double am = cfg.alpha_m, as = cfg.alpha_s;
  const double sq_lm = std::sqrt(kPi * cfg.lambda_m);
  const double sq_ls = std::sqrt(kPi * cfg.lambda_s);

  d.beta1 = 1.0 / am;
  d.beta2 = as / (2.0 * am);
  d.beta3 = 0.5;
  d.beta4 = 1.0 / as;
  d.beta5 = am / (2.0 * as);
  d.beta6 = d.beta3;

  d.xi1 = std::pow(sq_lm, am / as) * std::pow(cfg.q_bar_m() / cfg.q_bar_s(), 1.0 / as);
  d.xi2 = sq_ls;
  d.xi3 = std::pow(sq_lm, am / as) * std::pow(cfg.p_bar_m() / cfg.p_bar_s(), 1.0 / as);
  d.xi4 = std::pow(sq_ls, as / am) * std::pow(cfg.p_bar_s() / cfg.p_bar_m(), 1.0 / am);
  d.xi6 = std::pow(sq_ls, as / am) * std::pow(cfg.q_bar_s() / cfg.q_bar_m(), 1.0 / am);

  d.z1 = d.xi1 / d.xi2;
  d.z2 = d.xi3 / d.xi2;
  d.lambda_m = cfg.lambda_m;
  return d;
}

}  // namespace dudnet::model
