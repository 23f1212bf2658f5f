#include "dudnet/distances.hpp"

#include <algorithm>
#include <cmath>

#include "dudnet/association.hpp"
#include "dudnet/errors.hpp"
#include "dudnet/quadrature.hpp"

namespace dudnet::distances {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct Law {
  // numerator guard factors and the serving tier's nearest-distance law
  double lambda_serving = 0.0;     // tier of the serving distance
  double lambda_other = 0.0;       // tier in the exponential guard
  double expo = 0.0;               // guard distance exponent 2 a_srv / a_oth
  double k_lo = 0.0, k_hi = 0.0;   // guard coefficients (k_hi = 0: single)
  double prob = 0.0;               // Pr(case), the normalization
};

// Guard coefficients pi*lambda_other*(power ratio)^{2/alpha_other} follow the
// complementary-CDF construction of the joint law; the difference form keeps
// the smaller coefficient first so the bracket stays non-negative.
Law make_law(const model::NetworkConfig& cfg, model::AssociationCase c,
             model::Tier tier) {
  if (!pair_supported(c, tier))
    throw UnsupportedPair("no conditional distance law for this (case, tier)");
  const double am = cfg.alpha_m, as = cfg.alpha_s;
  Law law;
  const bool serving_m = tier == model::Tier::mcell;
  law.lambda_serving = serving_m ? cfg.lambda_m : cfg.lambda_s;
  law.lambda_other = serving_m ? cfg.lambda_s : cfg.lambda_m;
  law.expo = serving_m ? 2.0 * am / as : 2.0 * as / am;
  const double a_oth = serving_m ? as : am;
  const double qr = serving_m ? cfg.q_bar_s() / cfg.q_bar_m()
                              : cfg.q_bar_m() / cfg.q_bar_s();
  const double pr = serving_m ? cfg.p_bar_s() / cfg.p_bar_m()
                              : cfg.p_bar_m() / cfg.p_bar_s();
  const double kq = kPi * law.lambda_other * std::pow(qr, 2.0 / a_oth);
  const double kp = kPi * law.lambda_other * std::pow(pr, 2.0 / a_oth);
  switch (c) {
    case model::AssociationCase::case1:
      law.k_lo = kq;
      break;
    case model::AssociationCase::case2:
      law.k_lo = std::min(kp, kq);
      law.k_hi = std::max(kp, kq);
      break;
    default:  // case4
      law.k_lo = kp;
      break;
  }
  law.prob = association::prob_case_closed(cfg, c);
  if (!(law.prob > 0.0))
    throw ZeroProbabilityCase("conditional distance law of a zero-probability case");
  return law;
}

double guard(const Law& law, double x) {
  const double xe = std::pow(x, law.expo);
  const double g = std::exp(-law.k_lo * xe);
  if (law.k_hi == 0.0) return g;
  return g - std::exp(-law.k_hi * xe);
}

double pdf_impl(const Law& law, double x) {
  if (x < 0.0) return 0.0;
  const double f_near =
      2.0 * kPi * law.lambda_serving * x * std::exp(-kPi * law.lambda_serving * x * x);
  return guard(law, x) * f_near / law.prob;
}

// Upper support bound: unconditional-tail mass below 1e-13 under the
// dominating nearest-distance law.
double support_bound(const Law& law) {
  return std::sqrt(std::log(1e13) / (kPi * law.lambda_serving));
}

}  // namespace

bool pair_supported(model::AssociationCase c, model::Tier tier) {
  using model::AssociationCase;
  using model::Tier;
  return (c == AssociationCase::case1 && tier == Tier::mcell) ||
         (c == AssociationCase::case2) ||
         (c == AssociationCase::case4 && tier == Tier::scell);
}

double pdf(const model::NetworkConfig& cfg, model::AssociationCase c,
           model::Tier tier, double x) {
  cfg.validate();
  if (x < 0.0) throw InvalidInput("pdf: x must be non-negative");
  return pdf_impl(make_law(cfg, c, tier), x);
}

double cdf(const model::NetworkConfig& cfg, model::AssociationCase c,
           model::Tier tier, double x, double rel_tol) {
  cfg.validate();
  if (x < 0.0) throw InvalidInput("cdf: x must be non-negative");
  if (x == 0.0) return 0.0;
  const Law law = make_law(cfg, c, tier);
  auto f = [&](double t) { return pdf_impl(law, t); };
  const double scale = 1.0 / std::sqrt(kPi * law.lambda_serving);
  if (x <= 4.0 * scale) {
    const auto r = quadrature::integrate_finite(f, 0.0, x, rel_tol);
    return std::clamp(r.value, 0.0, 1.0);
  }
  const auto tail = quadrature::integrate_semi_infinite(f, x, rel_tol);
  return std::clamp(1.0 - tail.value, 0.0, 1.0);
}

DistanceSampler::DistanceSampler(const model::NetworkConfig& cfg,
                                 model::AssociationCase c, model::Tier tier) {
  cfg.validate();
  const Law law = make_law(cfg, c, tier);
  const int cells = 4096;
  const double xmax = support_bound(law);
  x_.resize(cells + 1);
  cum_.resize(cells + 1);
  const double dx = xmax / cells;
  x_[0] = 0.0;
  cum_[0] = 0.0;
  double prev_f = pdf_impl(law, 0.0);
  for (int i = 1; i <= cells; ++i) {
    const double xl = (i - 1) * dx, xr = i * dx;
    const double fm = pdf_impl(law, 0.5 * (xl + xr));
    const double fr = pdf_impl(law, xr);
    x_[i] = xr;
    cum_[i] = cum_[i - 1] + dx / 6.0 * (prev_f + 4.0 * fm + fr);
    prev_f = fr;
  }
  // Normalize away the leftover quadrature/truncation dust so quantile(1-)
  // stays inside the table.
  const double total = cum_[cells];
  if (!(total > 0.0)) throw NonConvergence("DistanceSampler: empty law");
  for (auto& v : cum_) v /= total;
}

double DistanceSampler::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidInput("quantile: p must lie in (0, 1)");
  auto it = std::lower_bound(cum_.begin(), cum_.end(), p);
  if (it == cum_.begin()) return 0.0;
  if (it == cum_.end()) return x_.back();
  const auto i = static_cast<std::size_t>(it - cum_.begin());
  const double c0 = cum_[i - 1], c1 = cum_[i];
  const double w = (c1 > c0) ? (p - c0) / (c1 - c0) : 0.5;
  return x_[i - 1] + w * (x_[i] - x_[i - 1]);
}

}  // namespace dudnet::distances
