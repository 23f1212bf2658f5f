#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "dudnet/errors.hpp"
#include "dudnet/quadrature.hpp"
#include "dudnet/specfun.hpp"
#include "support/oracles.hpp"

using namespace dudnet;
using specfun::BivariateHParams;
using specfun::FoxHParams;
using specfun::fox_h;
using specfun::fox_h_bivariate;
using specfun::gauss_2f1;
using specfun::ln_gamma_complex;

namespace {

using cplx = std::complex<double>;

// Reference values computed with 30-digit arithmetic (mpmath) at test-writing
// time.
struct LnGammaRef {
  cplx z;
  cplx value;
};
const LnGammaRef kLnGammaRefs[] = {
    {{0.5, 0.0}, {0.57236494292470008707, 0.0}},
    {{0.25, 0.75}, {-0.16972508567707298578, -1.3396434429923602547}},
    {{2.0, 3.0}, {-2.0928517530927333496, 2.3023965434668676262}},
    {{0.1, -7.0}, {-10.854877044420902528, -5.9875701533014402983}},
    {{10.0, 50.0}, {-40.400262350482971022, 159.62737280472833495}},
    {{150.0, 10.0}, {599.6752725902034371, 50.080429537793392387}},
    {{-4.5, 2.0}, {-8.014299703267403955, -12.435275982207051368}},
};

double rel_with_floor(double got, double want, double floor = 1e-300) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

}  // namespace

TEST_CASE("ln_gamma: trivial anchors") {
  CHECK(std::abs(ln_gamma_complex({1.0, 0.0})) < 1e-15);
  CHECK(ln_gamma_complex({0.5, 0.0}).real() ==
        doctest::Approx(std::log(std::sqrt(3.14159265358979323846)))
            .epsilon(1e-14));
  CHECK(std::abs(ln_gamma_complex({5.0, 0.0}).real() - std::log(24.0)) <
        1e-13);
}

TEST_CASE("ln_gamma: poles throw") {
  CHECK_THROWS_AS(ln_gamma_complex({0.0, 0.0}), PoleError);
  CHECK_THROWS_AS(ln_gamma_complex({-3.0, 0.0}), PoleError);
}

TEST_CASE("ln_gamma: recurrence self-check at 2+3i and random points") {
  auto recurrence_gap = [](cplx z) {
    return std::abs(ln_gamma_complex(z + 1.0) - ln_gamma_complex(z) -
                    std::log(z));
  };
  CHECK(recurrence_gap({2.0, 3.0}) < 1e-12);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> re(-20.0, 20.0), im(0.1, 30.0);
  for (int i = 0; i < 50; ++i) {
    const cplx z{re(gen), im(gen)};
    CHECK(recurrence_gap(z) < 1e-12);
  }
}

TEST_CASE("ln_gamma: exp-relative accuracy against frozen references") {
  for (const auto& ref : kLnGammaRefs) {
    const cplx got = ln_gamma_complex(ref.z);
    // |exp(got)-Gamma|/|Gamma| = |exp(got-true)-1| ~ |got-true|; allow the
    // double quantization of the reference itself on top of the 1e-13
    // contract.
    const double allowance =
        1e-13 + 2.0 * 2.220446049250313e-16 * std::abs(ref.value);
    CHECK_MESSAGE(std::abs(got - ref.value) < allowance,
                  "z=(", ref.z.real(), ",", ref.z.imag(), ") got (",
                  got.real(), ",", got.imag(), ")");
  }
}

TEST_CASE("ln_gamma: conjugate symmetry") {
  const cplx z{3.7, 2.2};
  const cplx a = ln_gamma_complex(z);
  const cplx b = std::conj(ln_gamma_complex(std::conj(z)));
  CHECK(std::abs(a - b) < 1e-14 * (1.0 + std::abs(a)));
}

TEST_CASE("2F1: trivial and input validation") {
  CHECK(gauss_2f1(1.0, 0.5, 1.5, 0.0) == 1.0);
  CHECK_THROWS_AS(gauss_2f1(1.0, 0.5, 1.5, 0.5), InvalidInput);
  CHECK_THROWS_AS(gauss_2f1(1.0, 0.5, 0.0, -1.0), InvalidInput);
  CHECK_THROWS_AS(gauss_2f1(1.0, 0.5, -2.0, -1.0), InvalidInput);
}

TEST_CASE("2F1: frozen references across the left half-line") {
  CHECK(rel_with_floor(gauss_2f1(1.0, 1.0 / 3.0, 4.0 / 3.0, -1.0),
                       0.83564884826472105334) < 1e-13);
  CHECK(rel_with_floor(gauss_2f1(1.0, 1.0 / 3.0, 4.0 / 3.0, -0.5),
                       0.90164425852750967181) < 1e-13);
  CHECK(rel_with_floor(gauss_2f1(1.0, 0.2, 1.8, -123.456),
                       0.45734867708984046017) < 1e-12);
  const double big = -22025.465794806716517;  // -(e^10 - 1)
  CHECK(rel_with_floor(gauss_2f1(1.0, 1.0 / 3.0, 4.0 / 3.0, big),
                       0.043114929877056868231) < 1e-12);
  CHECK(rel_with_floor(gauss_2f1(1.0, 0.5, 1.5, big),
                       0.01053878135568902416) < 1e-12);
  // alpha_m = 4 family has the closed form atan(sqrt(v))/sqrt(v).
  const double v = std::sqrt(-big);
  CHECK(rel_with_floor(gauss_2f1(1.0, 0.5, 1.5, big), std::atan(v) / v) <
        1e-12);
}

TEST_CASE("2F1: integral-representation oracle") {
  // 2F1(1, 1-d; 2-d; -V) = (1-d) V^(d-1) * int_{1/V}^inf u^{d-1}/(1+u) du
  // for d in (0,1), from the Euler integral after u -> 1/(V y).
  for (double alpha_m : {2.5, 3.0, 4.0}) {
    const double d = 2.0 / alpha_m;
    for (double V : {0.3, 1.0, 20.0}) {
      auto f = [&](double u) { return std::pow(u, d - 1.0) / (1.0 + u); };
      const auto integral =
          quadrature::integrate_semi_infinite(f, 1.0 / V, 1e-11);
      REQUIRE(integral.converged);
      const double expect =
          (1.0 - d) * std::pow(V, d - 1.0) * integral.value;
      CHECK(rel_with_floor(gauss_2f1(1.0, 1.0 - d, 2.0 - d, -V), expect) <
            1e-8);
    }
  }
}

TEST_CASE("2F1: truncated-series oracle at x=-0.5") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  for (int i = 0; i < 10; ++i) {
    const double b = unif(gen);
    const double c = 1.0 + unif(gen);
    const double ref = oracle::hyp2f1_series(1.0, b, c, -0.5, 200);
    CHECK(rel_with_floor(gauss_2f1(1.0, b, c, -0.5), ref) < 1e-12);
  }
}

TEST_CASE("fox_h: exponential kernel identities") {
  // H^{1,0}_{0,1}[z | -; (0,c)] = (1/c) exp(-z^{1/c})
  CHECK(rel_with_floor(fox_h(FoxHParams::exp_kernel(1.0), 1.0),
                       std::exp(-1.0)) < 1e-9);
  CHECK(rel_with_floor(fox_h(FoxHParams::exp_kernel(0.5), 2.0),
                       2.0 * std::exp(-4.0)) < 1e-9);
  for (double c : {1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0}) {
    for (double z : {1e-3, 1e-2, 0.1, 1.0, 3.0, 10.0, 100.0, 1e3}) {
      const double expect = std::exp(-std::pow(z, 1.0 / c)) / c;
      const double got = fox_h(FoxHParams::exp_kernel(c), z);
      CHECK_MESSAGE(rel_with_floor(got, expect) < 1e-8, "c=", c, " z=", z,
                    " got=", got, " expect=", expect);
    }
  }
}

TEST_CASE("fox_h: association kernel values and equal-exponent closed form") {
  // H^{1,1}_{1,1}[z | (0,1/2); (0,1/2)] = 2/(1+z^2)
  for (double z : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    CHECK(rel_with_floor(fox_h(FoxHParams::assoc_kernel(0.5), z),
                         2.0 / (1.0 + z * z)) < 1e-9);
  }
  // Frozen 20-digit references for the beta = 3/8 kernel (Table NLOS).
  CHECK(rel_with_floor(fox_h(FoxHParams::assoc_kernel(0.375),
                             0.54683495246499499879),
                       2.1861954756530883869) < 1e-9);
  CHECK(rel_with_floor(fox_h(FoxHParams::assoc_kernel(0.375),
                             2.4426220088076513008),
                       0.36583471272693871375) < 1e-9);
  CHECK(rel_with_floor(fox_h(FoxHParams::assoc_kernel(0.375), 0.245),
                       2.594869383578396069) < 1e-9);
  CHECK(rel_with_floor(fox_h(FoxHParams::assoc_kernel(0.375), 10.0),
                       0.024332215037308001954) < 1e-9);
  CHECK(rel_with_floor(fox_h(FoxHParams::assoc_kernel(0.75), 0.01),
                       1.3307438054986950781) < 1e-9);
}

TEST_CASE("fox_h: association kernel monotone decreasing and bounded") {
  for (double beta : {0.3, 0.375, 0.5, 0.75, 1.0}) {
    const auto prm = FoxHParams::assoc_kernel(beta);
    double prev = 1.0 / beta + 1e-9;  // H(0+) = 1/beta
    for (double z = 1e-3; z < 1e3; z *= 2.5) {
      const double h = fox_h(prm, z);
      CHECK(h > 0.0);
      CHECK(h < prev);
      prev = h;
    }
  }
}

TEST_CASE("fox_h: contour validation") {
  FoxHParams bad;
  bad.m = 1;
  bad.n = 1;
  bad.upper = {{1.5, 1.0}};  // poles start at Re(s) = -0.5
  bad.lower = {{0.0, 1.0}};  // poles end at Re(s) = 0
  CHECK_THROWS_AS(fox_h(bad, 1.0), ContourError);
  CHECK_THROWS_AS(fox_h(FoxHParams::exp_kernel(1.0), -1.0), InvalidInput);
  FoxHParams empty;
  CHECK_THROWS_AS(fox_h(empty, 1.0), InvalidInput);
}

namespace {

// Defining product integral of the bivariate H, by library quadrature (a
// code path independent of the double Mellin-Barnes evaluation).
double bivariate_oracle(const BivariateHParams& p, double x, double y) {
  auto f = [&](double v) {
    return v * std::exp(-std::pow(v, 1.0 / p.beta_k)) *
           std::exp(-std::pow(x * v, 1.0 / p.beta_k1)) *
           std::exp(-std::pow(y * v, 1.0 / p.beta_k2));
  };
  const auto r = quadrature::integrate_semi_infinite(f, 0.0, 1e-10);
  REQUIRE(r.converged);
  return r.value / (p.beta_k * p.beta_k1 * p.beta_k2);
}

}  // namespace

TEST_CASE("fox_h_bivariate: defining-integral oracle at the spec points") {
  const auto p4 = BivariateHParams::from_exponents(4, 3.0, 4.0);
  const double got = fox_h_bivariate(p4, 0.7, 0.3);
  CHECK(rel_with_floor(got, bivariate_oracle(p4, 0.7, 0.3)) < 1e-6);
  // 20-digit frozen reference for the same point.
  CHECK(rel_with_floor(got, 7.5223396345891907372) < 1e-6);

  const auto p1 = BivariateHParams::from_exponents(1, 3.0, 4.0);
  CHECK(rel_with_floor(fox_h_bivariate(p1, 0.5, 2.0),
                       0.88714825813248057437) < 1e-6);
}

TEST_CASE("fox_h_bivariate: oracle grid both k, LOS and NLOS exponents") {
  for (double alpha_s : {2.0, 4.0}) {
    for (int k : {1, 4}) {
      const auto p = BivariateHParams::from_exponents(k, 3.0, alpha_s);
      for (double x : {0.1, 1.0, 10.0}) {
        for (double y : {0.3, 3.0}) {
          const double got = fox_h_bivariate(p, x, y, 1e-7);
          const double want = bivariate_oracle(p, x, y);
          CHECK_MESSAGE(rel_with_floor(got, want) < 1e-5, "k=", k,
                        " alpha_s=", alpha_s, " x=", x, " y=", y);
        }
      }
    }
  }
}

TEST_CASE("fox_h_bivariate: degenerate first argument, two-factor limit") {
  const auto p1 = BivariateHParams::from_exponents(1, 3.0, 4.0);
  const double y = 0.8;
  auto two_factor = [&](double v) {
    return v * std::exp(-std::pow(v, 1.0 / p1.beta_k)) *
           std::exp(-std::pow(y * v, 1.0 / p1.beta_k2));
  };
  const auto r = quadrature::integrate_semi_infinite(two_factor, 0.0, 1e-10);
  REQUIRE(r.converged);
  const double limit = r.value / (p1.beta_k * p1.beta_k1 * p1.beta_k2);
  CHECK(rel_with_floor(fox_h_bivariate(p1, 1e-7, y), limit) < 1e-4);
}

TEST_CASE("fox_h_bivariate: argument/beta swap symmetry") {
  BivariateHParams p = BivariateHParams::from_exponents(4, 3.0, 4.0);
  BivariateHParams swapped = p;
  std::swap(swapped.beta_k1, swapped.beta_k2);
  const double a = fox_h_bivariate(p, 0.6, 1.7);
  const double b = fox_h_bivariate(swapped, 1.7, 0.6);
  CHECK(rel_with_floor(a, b) < 1e-7);
}

TEST_CASE("fox_h_bivariate: input validation") {
  const auto p = BivariateHParams::from_exponents(1, 3.0, 4.0);
  CHECK_THROWS_AS(fox_h_bivariate(p, -1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(fox_h_bivariate(p, 1.0, 0.0), InvalidInput);
  BivariateHParams bad = p;
  bad.k_index = 2;
  CHECK_THROWS_AS(fox_h_bivariate(bad, 1.0, 1.0), InvalidInput);
}
