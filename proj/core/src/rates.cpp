#include "dudnet/rates.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "dudnet/association.hpp"
#include "dudnet/errors.hpp"
#include "dudnet/quadrature.hpp"
#include "dudnet/specfun.hpp"

namespace dudnet::rates {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kMinProb = 1e-15;

using model::LinkDirection;

double big_g_impl(double alpha_m, double t) {
  if (t <= 0.0) return 0.0;
  const double d = 2.0 / alpha_m;
  const double v = std::expm1(t);
  if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
  return d / (1.0 - d) * v * specfun::gauss_2f1(1.0, 1.0 - d, 2.0 - d, -v);
}

struct TauSpec {
  double prefactor = 0.0;      // W * 2 pi lambda_srv * beta triple / Pr
  double w_serving = 0.0;      // serving-tier bandwidth
  double pbar_serving = 0.0;   // Q-bar or P-bar of the serving tier
  double alpha_serving = 0.0;
  double lambda_serving = 0.0;
  bool serving_mcell = false;
  double lambda_int = 0.0;     // interferer density (Mcell-serving only)
  double prob = 0.0;
  // H-hat terms: sign and the constant first-argument scale; the second
  // scale is xi2 (Scell serving) or xi5(t) (Mcell serving).
  std::vector<std::pair<double, double>> terms;
  specfun::BivariateHParams biv;
  model::DerivedParams d;
};

TauSpec make_spec(const model::NetworkConfig& cfg, const RateQuery& q) {
  cfg.validate();
  TauSpec s;
  s.d = model::derive(cfg);
  const bool ul = q.direction == LinkDirection::uplink;

  RateMode mode = q.mode;
  if (mode == RateMode::coupled_scell) mode = RateMode::case4;  // Corollary: identical

  switch (mode) {
    case RateMode::case1:
      s.serving_mcell = true;
      s.prob = association::prob_case_closed(cfg, model::AssociationCase::case1);
      s.terms = {{+1.0, s.d.xi6}};
      break;
    case RateMode::case2:
      s.prob = association::prob_case_closed(cfg, model::AssociationCase::case2);
      if (ul) {
        s.serving_mcell = false;
        s.terms = {{+1.0, s.d.xi1}, {-1.0, s.d.xi3}};
      } else {
        s.serving_mcell = true;
        s.terms = {{+1.0, s.d.xi4}, {-1.0, s.d.xi6}};
      }
      break;
    case RateMode::case4:
      s.serving_mcell = false;
      s.prob = association::prob_case_closed(cfg, model::AssociationCase::case4);
      s.terms = {{+1.0, s.d.xi3}};
      break;
    default:  // coupled_mcell
      s.serving_mcell = true;
      s.prob = association::prob_mcell_coupled(cfg);
      s.terms = {{+1.0, s.d.xi4}};
      break;
  }
  if (s.prob < kMinProb)
    throw ZeroProbabilityCase("rate requested for a case of zero probability");

  if (s.serving_mcell) {
    s.w_serving = cfg.w_m;
    s.pbar_serving = ul ? cfg.q_bar_m() : cfg.p_bar_m();
    s.alpha_serving = cfg.alpha_m;
    s.lambda_serving = cfg.lambda_m;
    s.lambda_int = ul ? cfg.lambda_iu_effective() : cfg.lambda_m;
    s.biv = specfun::BivariateHParams::from_exponents(1, cfg.alpha_m, cfg.alpha_s);
    s.prefactor = s.w_serving * 2.0 * kPi * s.lambda_serving * s.d.beta1 *
                  s.d.beta2 * s.d.beta3 / s.prob;
  } else {
    s.w_serving = cfg.w_s;
    s.pbar_serving = ul ? cfg.q_bar_s() : cfg.p_bar_s();
    s.alpha_serving = cfg.alpha_s;
    s.lambda_serving = cfg.lambda_s;
    s.biv = specfun::BivariateHParams::from_exponents(4, cfg.alpha_m, cfg.alpha_s);
    s.prefactor = s.w_serving * 2.0 * kPi * s.lambda_serving * s.d.beta4 *
                  s.d.beta5 * s.d.beta6 / s.prob;
  }
  return s;
}

double xi_serving(const TauSpec& s, double t) {
  return std::pow(std::expm1(t) / s.pbar_serving, 1.0 / s.alpha_serving);
}

}  // namespace

double big_g(const model::NetworkConfig& cfg, double t) {
  if (!(cfg.alpha_m > 2.0))
    throw InvalidInput("big_g: requires alpha_m > 2");
  if (t < 0.0) throw InvalidInput("big_g: requires t >= 0");
  return big_g_impl(cfg.alpha_m, t);
}

double big_g_quadrature(const model::NetworkConfig& cfg, double t,
                        double rel_tol) {
  if (!(cfg.alpha_m > 2.0))
    throw InvalidInput("big_g: requires alpha_m > 2");
  if (t < 0.0) throw InvalidInput("big_g: requires t >= 0");
  if (t == 0.0) return 0.0;
  const double d = 2.0 / cfg.alpha_m;
  const double v = std::expm1(t);
  auto f = [&](double u) { return std::pow(u, d - 1.0) / (1.0 + u); };
  const auto r = quadrature::integrate_semi_infinite(f, 1.0 / v, rel_tol);
  if (!r.converged)
    throw NonConvergence("big_g_quadrature did not converge");
  return std::pow(v, d) * d * r.value;
}

double interference_guard(const model::NetworkConfig& cfg, LinkDirection dir,
                          double x, double t) {
  if (x < 0.0) throw InvalidInput("interference_guard: x must be >= 0");
  const double lambda_int = (dir == LinkDirection::uplink)
                                ? cfg.lambda_iu_effective()
                                : cfg.lambda_m;
  if (lambda_int == 0.0 || x == 0.0) return 1.0;
  return std::exp(-kPi * lambda_int * x * x * big_g(cfg, t));
}

double avg_rate_closed(const model::NetworkConfig& cfg, const RateQuery& q,
                       double rel_tol) {
  const TauSpec s = make_spec(cfg, q);
  const double biv_tol = std::clamp(rel_tol * 0.1, 1e-9, 1e-6);

  auto integrand = [&](double t) -> double {
    const double xis = xi_serving(s, t);
    if (!(xis > 0.0) || !std::isfinite(xis)) return 0.0;
    double b;
    if (s.serving_mcell) {
      const double g = big_g_impl(cfg.alpha_m, t);
      if (!std::isfinite(g)) return 0.0;
      b = s.d.xi5(g, s.lambda_int);
    } else {
      b = s.d.xi2;
    }
    const double yb = b / xis;
    if (!(yb > 0.0) || !std::isfinite(yb)) return 0.0;
    double sum = 0.0;
    for (const auto& [sign, a] : s.terms) {
      const double xa = a / xis;
      if (!(xa > 0.0) || !std::isfinite(xa)) return 0.0;
      sum += sign * specfun::fox_h_bivariate(s.biv, xa, yb, biv_tol);
    }
    return sum / (xis * xis);
  };

  const auto r = quadrature::integrate_semi_infinite(integrand, 0.0, rel_tol);
  if (!r.converged)
    throw NonConvergence("avg_rate_closed: outer t-integral did not converge");
  return s.prefactor * r.value;
}

double avg_rate_quadrature(const model::NetworkConfig& cfg, const RateQuery& q,
                           double rel_tol) {
  const TauSpec s = make_spec(cfg, q);
  const double guard_expo = s.serving_mcell ? 2.0 * cfg.alpha_m / cfg.alpha_s
                                            : 2.0 * cfg.alpha_s / cfg.alpha_m;

  auto f = [&](double t, double x) -> double {
    const double xis = xi_serving(s, t);
    if (!(xis > 0.0) || !std::isfinite(xis)) return 0.0;
    double v = std::exp(-std::pow(xis * x, s.alpha_serving));
    double bracket = 0.0;
    for (const auto& [sign, a] : s.terms)
      bracket += sign * std::exp(-std::pow(a * x, guard_expo));
    v *= bracket;
    if (s.serving_mcell && s.lambda_int > 0.0) {
      const double g = big_g_impl(cfg.alpha_m, t);
      if (!std::isfinite(g)) return 0.0;
      v *= std::exp(-kPi * s.lambda_int * g * x * x);
    }
    return v * 2.0 * kPi * s.lambda_serving * x *
           std::exp(-kPi * s.lambda_serving * x * x);
  };

  const auto r = quadrature::integrate_2d(f, rel_tol);
  if (!r.converged)
    throw NonConvergence("avg_rate_quadrature did not converge");
  return s.w_serving * r.value / s.prob;
}

SpectralEfficiencyReport spectral_efficiency(const model::NetworkConfig& cfg,
                                             double rel_tol) {
  cfg.validate();
  SpectralEfficiencyReport rep;
  rep.prob_case[0] = association::prob_case_closed(cfg, model::AssociationCase::case1);
  rep.prob_case[1] = association::prob_case_closed(cfg, model::AssociationCase::case2);
  rep.prob_case[2] = association::prob_case_closed(cfg, model::AssociationCase::case4);
  rep.prob_mcell = association::prob_mcell_coupled(cfg);

  const RateMode modes[3] = {RateMode::case1, RateMode::case2, RateMode::case4};
  // Serving-tier bandwidth per (case, direction).
  const double w_ul[3] = {cfg.w_m, cfg.w_s, cfg.w_s};
  const double w_dl[3] = {cfg.w_m, cfg.w_m, cfg.w_s};

  for (int i = 0; i < 3; ++i) {
    if (rep.prob_case[i] <= 1e-12) continue;  // vanishing contribution
    rep.se_ul_case[i] =
        avg_rate_closed(cfg, {modes[i], LinkDirection::uplink}, rel_tol) / w_ul[i];
    rep.se_dl_case[i] =
        avg_rate_closed(cfg, {modes[i], LinkDirection::downlink}, rel_tol) / w_dl[i];
    rep.se_ul_decoupled += rep.se_ul_case[i] * rep.prob_case[i];
    rep.se_dl_decoupled += rep.se_dl_case[i] * rep.prob_case[i];
  }

  if (rep.prob_mcell > 1e-12) {
    rep.se_ul_coupled_mcell =
        avg_rate_closed(cfg, {RateMode::coupled_mcell, LinkDirection::uplink},
                        rel_tol) / cfg.w_m;
    rep.se_dl_coupled_mcell =
        avg_rate_closed(cfg, {RateMode::coupled_mcell, LinkDirection::downlink},
                        rel_tol) / cfg.w_m;
  }
  rep.se_ul_coupled = rep.se_ul_coupled_mcell * rep.prob_mcell +
                      rep.se_ul_case[2] * rep.prob_case[2];
  rep.se_dl_coupled = rep.se_dl_coupled_mcell * rep.prob_mcell +
                      rep.se_dl_case[2] * rep.prob_case[2];
  return rep;
}

}  // namespace dudnet::rates
