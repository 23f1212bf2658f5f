#include <doctest.h>

#include <cmath>

#include "dudnet/errors.hpp"
#include "dudnet/quadrature.hpp"
#include "dudnet/rates.hpp"
#include "support/oracles.hpp"

using namespace dudnet;
using model::LinkDirection;
using model::NetworkConfig;
using rates::RateMode;
using rates::RateQuery;

TEST_CASE("big_g: zero threshold, validation and monotonicity") {
  NetworkConfig cfg;
  CHECK(rates::big_g(cfg, 0.0) == 0.0);
  CHECK_THROWS_AS(rates::big_g(cfg, -1.0), InvalidInput);
  NetworkConfig bad;
  bad.alpha_m = 2.0;
  CHECK_THROWS_AS(rates::big_g(bad, 1.0), InvalidInput);
  double prev = 0.0;
  for (double t = 0.05; t < 8.0; t += 0.35) {
    const double g = rates::big_g(cfg, t);
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("big_g: 2F1 form vs u-integral form") {
  for (double alpha_m : {2.5, 3.0, 4.0}) {
    NetworkConfig cfg;
    cfg.alpha_m = alpha_m;
    for (double t : {0.01, 0.2, 1.0, 4.0, 10.0}) {
      const double a = rates::big_g(cfg, t);
      const double b = rates::big_g_quadrature(cfg, t);
      CHECK_MESSAGE(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b)),
                    "alpha_m=", alpha_m, " t=", t, " a=", a, " b=", b);
    }
  }
}

TEST_CASE("interference_guard: limits and monotonicity") {
  NetworkConfig cfg;
  CHECK(rates::interference_guard(cfg, LinkDirection::downlink, 0.0, 1.0) ==
        1.0);
  NetworkConfig no_iu;
  no_iu.lambda_iu = 0.0;
  CHECK(rates::interference_guard(no_iu, LinkDirection::uplink, 50.0, 1.0) ==
        1.0);
  double prev = 1.1;
  for (double x : {0.0, 10.0, 50.0, 200.0}) {
    const double v = rates::interference_guard(cfg, LinkDirection::uplink, x, 1.0);
    CHECK(v <= prev);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
  prev = 1.1;
  for (double t : {0.1, 0.5, 2.0, 5.0}) {
    const double v =
        rates::interference_guard(cfg, LinkDirection::uplink, 50.0, t);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("closed form vs 2D quadrature, Table NLOS ratio 10") {
  NetworkConfig cfg;
  const RateQuery queries[] = {
      {RateMode::case2, LinkDirection::uplink},
      {RateMode::case1, LinkDirection::downlink},
      {RateMode::coupled_mcell, LinkDirection::uplink},
  };
  for (const auto& q : queries) {
    const double closed = rates::avg_rate_closed(cfg, q, 1e-6);
    const double quad = rates::avg_rate_quadrature(cfg, q, 1e-7);
    CHECK_MESSAGE(std::abs(closed - quad) <= 1e-4 * std::abs(quad),
                  "mode=", static_cast<int>(q.mode),
                  " dir=", static_cast<int>(q.direction), " closed=", closed,
                  " quad=", quad);
  }
}

TEST_CASE("frozen 30-digit references, Table NLOS ratio 10") {
  NetworkConfig cfg;
  CHECK(rates::avg_rate_closed(cfg, {RateMode::case1, LinkDirection::downlink}) ==
        doctest::Approx(0.054752305).epsilon(2e-5));
  CHECK(rates::avg_rate_closed(cfg, {RateMode::case2, LinkDirection::downlink}) ==
        doctest::Approx(0.0018175197).epsilon(2e-5));
  CHECK(rates::avg_rate_closed(cfg, {RateMode::case2, LinkDirection::uplink}) ==
        doctest::Approx(0.00012962005).epsilon(2e-5));
}

TEST_CASE("coupled Scell takes the Case-4 code path exactly") {
  NetworkConfig cfg;
  for (auto dir : {LinkDirection::uplink, LinkDirection::downlink}) {
    CHECK(rates::avg_rate_closed(cfg, {RateMode::coupled_scell, dir}) ==
          rates::avg_rate_closed(cfg, {RateMode::case4, dir}));
  }
}

TEST_CASE("rates decrease monotonically in the noise power") {
  double prev = 1e9;
  for (double noise : {-10.0, 0.0, 10.0, 20.0}) {
    NetworkConfig cfg;
    cfg.noise_s_dbm = noise;
    const double tau =
        rates::avg_rate_closed(cfg, {RateMode::case4, LinkDirection::uplink});
    CHECK(tau >= 0.0);
    CHECK(tau < prev);
    prev = tau;
  }
}

TEST_CASE("zero-probability case is reported") {
  NetworkConfig cfg;
  cfg.q_m_dbm = 46.0;  // boundary: z1 = z2, Pr(Case2) = 0
  cfg.q_s_dbm = 20.0;
  CHECK_THROWS_AS(
      rates::avg_rate_closed(cfg, {RateMode::case2, LinkDirection::uplink}),
      ZeroProbabilityCase);
}

TEST_CASE("degenerate limit: single-tier noise-limited uplink") {
  // lambda_IU = 0 and lambda_S -> 0 reduce Case-1 UL to the textbook
  // nearest-BS expectation E[e^{y} E1(y)], y = noise x^alpha / Q-bar.
  NetworkConfig cfg;
  cfg.lambda_iu = 0.0;
  cfg.lambda_s = 1e-30;
  const double quad =
      rates::avg_rate_quadrature(cfg, {RateMode::case1, LinkDirection::uplink});
  const double closed =
      rates::avg_rate_closed(cfg, {RateMode::case1, LinkDirection::uplink});
  const double pi = 3.14159265358979323846;
  auto f = [&](double x) {
    const double y = cfg.noise_m() * std::pow(x, cfg.alpha_m) / cfg.q_bar_m();
    return 2.0 * pi * cfg.lambda_m * x * std::exp(-pi * cfg.lambda_m * x * x) *
           oracle::exp_e1(std::max(y, 1e-300));
  };
  const double scale = 1.0 / std::sqrt(pi * cfg.lambda_m);
  const double ref =
      oracle::integrate_semi_infinite_mapped_scaled(f, 0.0, scale, 1e-11);
  CHECK(std::abs(quad - ref) < 2e-4 * ref);
  CHECK(std::abs(closed - ref) < 2e-4 * ref);
}

TEST_CASE("any rate query is non-negative") {
  NetworkConfig cfg;
  for (auto mode : {RateMode::case1, RateMode::case2, RateMode::case4,
                    RateMode::coupled_mcell}) {
    for (auto dir : {LinkDirection::uplink, LinkDirection::downlink}) {
      CHECK(rates::avg_rate_quadrature(cfg, {mode, dir}) >= 0.0);
    }
  }
}

TEST_CASE("spectral efficiency report identities") {
  NetworkConfig cfg;
  const auto rep = rates::spectral_efficiency(cfg, 1e-6);
  CHECK(rep.se_ul_decoupled >= 0.0);
  // Downlink association is identical in both modes.
  CHECK(std::abs(rep.se_dl_decoupled - rep.se_dl_coupled) <=
        1e-5 * std::max(rep.se_dl_decoupled, 1e-30));
  // Decoupling gain is non-negative, strictly positive away from the
  // boundary.
  CHECK(rep.se_ul_decoupled >=
        rep.se_ul_coupled - 1e-6 * std::abs(rep.se_ul_coupled));
  CHECK(rep.se_ul_decoupled > rep.se_ul_coupled);

  SUBCASE("boundary z1 = z2 collapses the decoupling gain") {
    NetworkConfig b;
    b.q_m_dbm = 46.0;
    b.q_s_dbm = 20.0;
    const auto rb = rates::spectral_efficiency(b, 1e-6);
    CHECK(std::abs(rb.se_ul_decoupled - rb.se_ul_coupled) <=
          1e-6 * std::max(rb.se_ul_coupled, 1e-30));
  }
}
