#include "dudnet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dudnet/errors.hpp"

namespace dudnet::quadrature {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kAbsFloor = 1e-300;
constexpr double kTermCutoff = 1e-18;  // relative to the level's peak term

double tol_floor(double rel_tol, double magnitude) {
  return std::max(rel_tol * magnitude, kAbsFloor);
}

void check_rel_tol(double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw InvalidInput("rel_tol must lie in (0, 1)");
}

// Kahan-compensated accumulator.
struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

struct KahanC {
  Kahan re, im;
  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.sum, im.sum}; }
};

// One exp-sinh level: h * sum over k of f(x(k h)) x'(k h).
// x(u) = lower + scale * exp(kHalfPi * sinh u).
double exp_sinh_level(const std::function<double(double)>& f, double lower,
                      double scale, double h, std::int64_t& evaluations) {
  Kahan acc;
  for (int dir = 0; dir < 2; ++dir) {
    double peak = 0.0;
    int tiny_run = 0;
    for (int k = (dir == 0) ? 0 : -1;; k += (dir == 0) ? 1 : -1) {
      const double u = k * h;
      const double e = kHalfPi * std::sinh(u);
      if (e > 708.0) break;  // offset overflows; integrand must be dead here
      const double offset = scale * std::exp(e);
      if (offset == 0.0 || offset == std::numeric_limits<double>::infinity())
        break;
      const double x = lower + offset;
      const double w = offset * kHalfPi * std::cosh(u);
      if (!std::isfinite(w)) break;
      const double fx = f(x);
      ++evaluations;
      const double term = std::isfinite(fx) ? fx * w : 0.0;
      acc.add(term);
      const double mag = std::abs(term);
      peak = std::max(peak, mag);
      if (std::abs(u) >= 2.0) {
        if (mag <= peak * kTermCutoff)
          ++tiny_run;
        else
          tiny_run = 0;
        if (tiny_run >= 3 || std::abs(u) > 6.9) break;
      }
      if (std::abs(k) > 200000) break;
    }
  }
  return h * acc.sum;
}

double tanh_sinh_level(const std::function<double(double)>& f, double center,
                       double halfwidth, double h, std::int64_t& evaluations) {
  Kahan acc;
  for (int dir = 0; dir < 2; ++dir) {
    double peak = 0.0;
    int tiny_run = 0;
    for (int k = (dir == 0) ? 0 : -1;; k += (dir == 0) ? 1 : -1) {
      const double u = k * h;
      const double e = kHalfPi * std::sinh(u);
      if (std::abs(e) > 350.0) break;  // weight underflows
      const double ch = std::cosh(e);
      const double w = halfwidth * kHalfPi * std::cosh(u) / (ch * ch);
      if (!(w > 0.0) || !std::isfinite(w)) break;
      const double x = center + halfwidth * std::tanh(e);
      const double fx = f(x);
      ++evaluations;
      const double term = std::isfinite(fx) ? fx * w : 0.0;
      acc.add(term);
      const double mag = std::abs(term);
      peak = std::max(peak, mag);
      if (std::abs(u) >= 2.0) {
        if (mag <= peak * kTermCutoff)
          ++tiny_run;
        else
          tiny_run = 0;
        if (tiny_run >= 3 || std::abs(u) > 6.9) break;
      }
      if (std::abs(k) > 200000) break;
    }
  }
  return h * acc.sum;
}

// Shared level-refinement driver.
template <class LevelFn>
QuadResult refine_levels(const LevelFn& level, double rel_tol) {
  QuadResult out;
  double h = 1.0;
  double prev = level(h, out.evaluations);
  for (int l = 0; l < 8; ++l) {
    h *= 0.5;
    const double cur = level(h, out.evaluations);
    const double err = std::abs(cur - prev);
    out.value = cur;
    out.abs_error_estimate = err;
    if (err <= tol_floor(rel_tol, std::abs(cur))) {
      out.converged = true;
      return out;
    }
    prev = cur;
    if (out.evaluations > 4'000'000) break;
  }
  return out;
}

}  // namespace

QuadResult integrate_semi_infinite(const std::function<double(double)>& f,
                                   double lower, double rel_tol) {
  check_rel_tol(rel_tol);
  if (!std::isfinite(lower)) throw InvalidInput("lower must be finite");

  // Probe for the characteristic scale of |f|: the exp-sinh grid is centered
  // where x*|f(x)| peaks.
  double scale = 1.0, best = -1.0;
  std::int64_t probe_evals = 0;
  for (int k = -40; k <= 44; ++k) {
    const double x = std::ldexp(1.0, k);
    const double v = std::abs(f(lower + x)) * x;
    ++probe_evals;
    if (std::isfinite(v) && v > best) {
      best = v;
      scale = x;
    }
  }
  if (best <= 0.0) scale = 1.0;

  QuadResult r = refine_levels(
      [&](double h, std::int64_t& evals) {
        return exp_sinh_level(f, lower, scale, h, evals);
      },
      rel_tol);
  r.evaluations += probe_evals;
  return r;
}

QuadResult integrate_finite(const std::function<double(double)>& f, double a,
                            double b, double rel_tol) {
  check_rel_tol(rel_tol);
  if (!std::isfinite(a) || !std::isfinite(b))
    throw InvalidInput("finite integration endpoints required");
  if (a == b) {
    QuadResult r;
    r.converged = true;
    r.evaluations = 1;
    return r;
  }
  const double sign = (b > a) ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double center = 0.5 * (lo + hi), halfwidth = 0.5 * (hi - lo);
  QuadResult r = refine_levels(
      [&](double h, std::int64_t& evals) {
        return tanh_sinh_level(f, center, halfwidth, h, evals);
      },
      rel_tol);
  r.value *= sign;
  return r;
}

QuadResult integrate_2d(const std::function<double(double, double)>& f,
                        double rel_tol) {
  check_rel_tol(rel_tol);
  const double inner_tol = std::max(rel_tol * 0.1, 1e-14);
  std::int64_t inner_evals = 0;
  bool inner_ok = true;
  auto outer = [&](double t) {
    QuadResult inner = integrate_semi_infinite(
        [&](double x) { return f(t, x); }, 0.0, inner_tol);
    inner_evals += inner.evaluations;
    inner_ok = inner_ok && inner.converged;
    return inner.value;
  };
  QuadResult r = integrate_semi_infinite(outer, 0.0, rel_tol);
  r.evaluations += inner_evals;
  r.converged = r.converged && inner_ok;
  return r;
}

namespace {

struct LineLevel {
  std::complex<double> integral;
  double tail = 0.0;  // contribution magnitude of the outer 20% of the range
};

LineLevel line_level(
    const std::function<std::complex<double>(std::complex<double>)>& g,
    double c, double H, double h, std::int64_t& evaluations) {
  const auto K = static_cast<std::int64_t>(std::floor(H / h + 0.5));
  KahanC acc;
  Kahan tail;
  for (std::int64_t k = -K; k <= K; ++k) {
    const double y = static_cast<double>(k) * h;
    const std::complex<double> v = g({c, y});
    ++evaluations;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) continue;
    acc.add(v);
    if (std::abs(y) >= 0.8 * H) tail.add(std::abs(v));
  }
  LineLevel lv;
  lv.integral = acc.value() * (h / kTwoPi);
  lv.tail = tail.sum * h / kTwoPi;
  return lv;
}

}  // namespace

ComplexQuadResult integrate_vertical_line(
    const std::function<std::complex<double>(std::complex<double>)>& g,
    double real_part, double half_height, double rel_tol,
    double initial_step) {
  check_rel_tol(rel_tol);
  if (!(half_height > 0.0)) throw InvalidInput("half_height must be positive");
  double h = (initial_step > 0.0) ? initial_step : half_height / 256.0;
  double H = half_height;
  int doublings = 0;

  ComplexQuadResult out;
  auto needs_tail = [&](const LineLevel& lv) {
    return lv.tail > 0.25 * tol_floor(rel_tol, std::abs(lv.integral));
  };

  LineLevel lv = line_level(g, real_part, H, h, out.evaluations);
  while (needs_tail(lv) && doublings < 4) {
    H *= 2.0;
    ++doublings;
    lv = line_level(g, real_part, H, h, out.evaluations);
  }

  std::complex<double> prev = lv.integral;
  for (int level = 0; level < 14; ++level) {
    h *= 0.5;
    lv = line_level(g, real_part, H, h, out.evaluations);
    while (needs_tail(lv) && doublings < 4) {
      H *= 2.0;
      ++doublings;
      lv = line_level(g, real_part, H, h, out.evaluations);
    }
    const double err = std::abs(lv.integral - prev);
    out.value = lv.integral;
    out.abs_error_estimate = err;
    if (err <= tol_floor(rel_tol, std::abs(lv.integral))) {
      out.converged = !needs_tail(lv);
      return out;
    }
    prev = lv.integral;
    if (out.evaluations > 8'000'000) break;
  }
  out.value = lv.integral;
  return out;
}

}  // namespace dudnet::quadrature
