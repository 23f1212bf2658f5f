#pragma once

#include <array>

#include "dudnet/model.hpp"

namespace dudnet::rates {

enum class RateMode { case1, case2, case4, coupled_mcell, coupled_scell };

struct RateQuery {
  RateMode mode = RateMode::case1;
  model::LinkDirection direction = model::LinkDirection::uplink;
};

// Interference exponent G(t) of the Mcell SINR Laplace functional, built
// from 2F1; requires alpha_m > 2.
double big_g(const model::NetworkConfig& cfg, double t);

// Same quantity by direct quadrature of its integral representation
// (test oracle; exposed for the dual-form identity checks).
double big_g_quadrature(const model::NetworkConfig& cfg, double t,
                        double rel_tol = 1e-10);

// exp(-pi * lambda_int(direction) * x^2 * G(t)); lambda_int is lambda_iu for
// the uplink and lambda_m for the downlink.
double interference_guard(const model::NetworkConfig& cfg,
                          model::LinkDirection dir, double x, double t);

// Average user rate (nats/s for unit bandwidth) via the bivariate-H closed
// form: the outer t-integral of H-hat terms.
double avg_rate_closed(const model::NetworkConfig& cfg, const RateQuery& q,
                       double rel_tol = 1e-6);

// The same rate as a 2D integral of elementary exponentials; independent of
// the H machinery and THE oracle for avg_rate_closed.
double avg_rate_quadrature(const model::NetworkConfig& cfg, const RateQuery& q,
                           double rel_tol = 1e-6);

struct SpectralEfficiencyReport {
  double se_ul_decoupled = 0.0;
  double se_dl_decoupled = 0.0;
  double se_ul_coupled = 0.0;
  double se_dl_coupled = 0.0;
  // Per-case components: indices {0,1,2} = Cases {1,2,4}.
  std::array<double, 3> prob_case{};
  std::array<double, 3> se_ul_case{};  // tau_UL / W of the serving tier
  std::array<double, 3> se_dl_case{};
  double prob_mcell = 0.0;
  double se_ul_coupled_mcell = 0.0;
  double se_dl_coupled_mcell = 0.0;
};

SpectralEfficiencyReport spectral_efficiency(const model::NetworkConfig& cfg,
                                             double rel_tol = 1e-6);

}  // namespace dudnet::rates
