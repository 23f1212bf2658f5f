#pragma once

#include <complex>
#include <cstdint>
#include <functional>

namespace dudnet::quadrature {

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
};

struct ComplexQuadResult {
  std::complex<double> value{0.0, 0.0};
  double abs_error_estimate = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
};

// integral of f over [lower, inf). Double-exponential (exp-sinh) nodes with
// an automatically detected characteristic scale; levels are refined until
// two successive estimates agree to max(rel_tol*|I|, 1e-300). On failure the
// best estimate is returned with converged=false.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f,
                                   double lower, double rel_tol);

// integral of f over [a, b] (tanh-sinh nodes). Same convergence contract.
QuadResult integrate_finite(const std::function<double(double)>& f, double a,
                            double b, double rel_tol);

// iint f(t, x) dx dt over (0,inf)^2, nested semi-infinite rules with the
// inner tolerance tightened by one order of magnitude.
QuadResult integrate_2d(const std::function<double(double, double)>& f,
                        double rel_tol);

// (1/2*pi*i) * integral of g along Re(s) = real_part, |Im(s)| <= H. H starts
// at half_height and doubles (up to four times) while the tail still
// contributes; the trapezoid step starts at initial_step (default
// half_height/256) and halves until convergence.
ComplexQuadResult integrate_vertical_line(
    const std::function<std::complex<double>(std::complex<double>)>& g,
    double real_part, double half_height, double rel_tol,
    double initial_step = 0.0);

}  // namespace dudnet::quadrature
