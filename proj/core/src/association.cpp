#include "dudnet/association.hpp"

#include <cmath>
#include <string>

#include "dudnet/errors.hpp"
#include "dudnet/quadrature.hpp"
#include "dudnet/specfun.hpp"

namespace dudnet::association {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kClamp = 1e-9;

// Clamp numerical dust at the [0,1] boundary; anything larger is a bug.
double clamp_probability(double p) {
  if (p >= 0.0 && p <= 1.0) return p;
  if (p > -kClamp && p < 0.0) return 0.0;
  if (p > 1.0 && p < 1.0 + kClamp) return 1.0;
  throw ProbabilityRangeError("association probability outside [0,1]: " +
                              std::to_string(p));
}

double assoc_h(const model::DerivedParams& d, double z) {
  return specfun::fox_h(specfun::FoxHParams::assoc_kernel(d.beta5), z);
}

// 2*pi*lambda_S * int x exp(-k x^{2 aS/aM}) exp(-pi lambda_S x^2) dx, the
// Appendix-style single integral over the Scell nearest distance.
double scell_average(const model::NetworkConfig& cfg, double k,
                     double rel_tol) {
  const double expo = 2.0 * cfg.alpha_s / cfg.alpha_m;
  const double ls = cfg.lambda_s;
  auto f = [&](double x) {
    return 2.0 * kPi * ls * x * std::exp(-k * std::pow(x, expo)) *
           std::exp(-kPi * ls * x * x);
  };
  const auto r = quadrature::integrate_semi_infinite(f, 0.0, rel_tol);
  if (!r.converged)
    throw NonConvergence("association quadrature did not converge");
  return r.value;
}

}  // namespace

double prob_case_closed(const model::NetworkConfig& cfg,
                        model::AssociationCase c) {
  cfg.validate();
  if (c == model::AssociationCase::case3) return 0.0;
  const model::DerivedParams d = model::derive(cfg);
  switch (c) {
    case model::AssociationCase::case1:
      return clamp_probability(1.0 - d.beta5 * assoc_h(d, d.z1));
    case model::AssociationCase::case2:
      return clamp_probability(d.beta5 * (assoc_h(d, d.z1) - assoc_h(d, d.z2)));
    default:
      return clamp_probability(d.beta5 * assoc_h(d, d.z2));
  }
}

double prob_case_quadrature(const model::NetworkConfig& cfg,
                            model::AssociationCase c, double rel_tol) {
  cfg.validate();
  if (c == model::AssociationCase::case3) return 0.0;
  const double am = cfg.alpha_m;
  const double k_q = kPi * cfg.lambda_m *
                     std::pow(cfg.q_bar_m() / cfg.q_bar_s(), 2.0 / am);
  const double k_p = kPi * cfg.lambda_m *
                     std::pow(cfg.p_bar_m() / cfg.p_bar_s(), 2.0 / am);
  switch (c) {
    case model::AssociationCase::case1:
      return clamp_probability(1.0 - scell_average(cfg, k_q, rel_tol));
    case model::AssociationCase::case2:
      return clamp_probability(scell_average(cfg, k_q, rel_tol) -
                               scell_average(cfg, k_p, rel_tol));
    default:
      return clamp_probability(scell_average(cfg, k_p, rel_tol));
  }
}

double prob_mcell_coupled(const model::NetworkConfig& cfg) {
  cfg.validate();
  const model::DerivedParams d = model::derive(cfg);
  return clamp_probability(1.0 - d.beta5 * assoc_h(d, d.z2));
}

double prob_scell_coupled(const model::NetworkConfig& cfg) {
  return prob_case_closed(cfg, model::AssociationCase::case4);
}

}  // namespace dudnet::association
