#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace dudnet::specfun {

// Principal-branch log-gamma. Throws PoleError at non-positive integers.
std::complex<double> ln_gamma_complex(std::complex<double> z);

// ln|Gamma(x)| for real non-pole x; *sign receives the sign of Gamma(x).
double ln_gamma_real_signed(double x, int* sign);

// 1/Gamma(x) for real x (zero at the poles).
double reciprocal_gamma_real(double x);

// Digamma for x > 0 (used for contour placement).
double digamma_real(double x);

// Gauss hypergeometric 2F1(a, b; c; x) on the left half-line x <= 0.
// Series for moderate arguments, Pfaff transform toward x = -1, and the
// 1/x inversion below it. Requires a - b non-integer when x < -1.
double gauss_2f1(double a, double b, double c, double x);

// Parameters of a univariate Fox H-function H^{m,n}_{p,q}.
struct FoxHParams {
  int m = 0;
  int n = 0;
  std::vector<std::pair<double, double>> upper;  // (a_i, A_i), size p
  std::vector<std::pair<double, double>> lower;  // (b_j, B_j), size q

  void validate() const;

  // Rightmost pole of the Gamma(b_j + B_j s), j <= m family.
  double contour_lower_bound() const;
  // Leftmost pole of the Gamma(1 - a_i - A_i s), i <= n family (+inf if n=0).
  double contour_upper_bound() const;

  // H^{1,0}_{0,1}[z | -; (0, c)] = (1/c) exp(-z^{1/c}).
  static FoxHParams exp_kernel(double c);
  // H^{1,1}_{1,1}[z | (0, 1/2); (0, beta)], the association kernel.
  static FoxHParams assoc_kernel(double beta);
};

// Mellin-Barnes evaluation of H(z) for z > 0 along a vertical contour.
double fox_h(const FoxHParams& params, double z, double rel_tol = 1e-10);

// Parameter triple of the bivariate H-hat(k; x, y). k_index selects
// (beta1, beta2, beta3) or (beta4, beta5, beta6).
struct BivariateHParams {
  int k_index = 1;  // 1 or 4
  double beta_k = 0.0;
  double beta_k1 = 0.0;
  double beta_k2 = 0.0;

  void validate() const;
  static BivariateHParams from_exponents(int k_index, double alpha_m,
                                         double alpha_s);
};

// Double Mellin-Barnes evaluation of
//   H-hat(k; x, y) = (1/2*pi*i)^2 iint Gamma(beta_k (2 - s - w))
//                    Gamma(beta_{k+1} s) Gamma(beta_{k+2} w) x^-s y^-w ds dw,
// normalized so that for positive scales,
//   int_0^inf v exp(-(c v)^{1/beta_k}) exp(-(a v)^{1/beta_{k+1}})
//            exp(-(b v)^{1/beta_{k+2}}) dv
//     = beta_k beta_{k+1} beta_{k+2} c^-2 H-hat(k; a/c, b/c).
double fox_h_bivariate(const BivariateHParams& params, double x, double y,
                       double rel_tol = 1e-7);

}  // namespace dudnet::specfun
