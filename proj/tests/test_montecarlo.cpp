#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dudnet/association.hpp"
#include "dudnet/distances.hpp"
#include "dudnet/errors.hpp"
#include "dudnet/montecarlo.hpp"
#include "dudnet/rates.hpp"
#include "support/oracles.hpp"

using namespace dudnet;
using model::AssociationCase;
using model::LinkDirection;
using model::NetworkConfig;
using model::Tier;
using montecarlo::McResult;
using montecarlo::SimOptions;
using montecarlo::simulate;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("sample_ppp: Poisson count moment and uniform-area law") {
  rng::Xoshiro256pp r(101);
  const double density = 1e-4, radius = 564.1895835477563;  // mean ~ 100
  const double mean = density * kPi * radius * radius;
  const int draws = 10000;
  double count_sum = 0.0;
  std::int64_t inner = 0, total = 0;
  for (int i = 0; i < draws; ++i) {
    const auto pts = montecarlo::sample_ppp(density, radius, r);
    count_sum += static_cast<double>(pts.size());
    total += static_cast<std::int64_t>(pts.size());
    for (const auto& p : pts)
      if (p.norm() <= 0.5 * radius) ++inner;
  }
  const double mean_hat = count_sum / draws;
  const double se = std::sqrt(mean / draws);
  CHECK(std::abs(mean_hat - mean) < 3.0 * se);
  const double frac = static_cast<double>(inner) / static_cast<double>(total);
  const double frac_se = std::sqrt(0.25 * 0.75 / static_cast<double>(total));
  CHECK(std::abs(frac - 0.25) < 4.0 * frac_se);
}

TEST_CASE("sample_ppp: fixed seed reproduces the point set") {
  rng::Xoshiro256pp r1(7), r2(7);
  const auto a = montecarlo::sample_ppp(1e-5, 1000.0, r1);
  const auto b = montecarlo::sample_ppp(1e-5, 1000.0, r2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
}

TEST_CASE("associate: dominance and the no-shadowing Case-3 exclusion") {
  NetworkConfig cfg;
  CHECK(montecarlo::associate(cfg, 10.0, 1e5, 1.0, 1.0) ==
        AssociationCase::case1);
  CHECK(montecarlo::associate(cfg, 1e5, 10.0, 1.0, 1.0) ==
        AssociationCase::case4);
  rng::Xoshiro256pp r(5);
  for (int i = 0; i < 20000; ++i) {
    const double xm = 1.0 + 2000.0 * r.uniform();
    const double xs = 1.0 + 2000.0 * r.uniform();
    CHECK(montecarlo::associate(cfg, xm, xs) != AssociationCase::case3);
  }
}

TEST_CASE("simulate: deterministic across thread counts") {
  NetworkConfig cfg;
  SimOptions one, four;
  one.threads = 1;
  one.collect_distances = true;
  four.threads = 4;
  four.collect_distances = true;
  const auto a = simulate(cfg, 5000, 99, one);
  const auto b = simulate(cfg, 5000, 99, four);
  CHECK(a.case_counts == b.case_counts);
  CHECK(a.ul_rate[0].sum.value() == b.ul_rate[0].sum.value());
  CHECK(a.dl_rate[1].sum.value() == b.dl_rate[1].sum.value());
  CHECK(a.coupled_ul[0].sum.value() == b.coupled_ul[0].sum.value());
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 2; ++t) {
      REQUIRE(a.distances[s][t].size() == b.distances[s][t].size());
      for (std::size_t i = 0; i < a.distances[s][t].size(); ++i)
        CHECK(a.distances[s][t][i] == b.distances[s][t][i]);
    }
}

TEST_CASE("merge is exact summation") {
  NetworkConfig cfg;
  SimOptions opts;
  opts.threads = 2;
  auto a = simulate(cfg, 3000, 1, opts);
  const auto b = simulate(cfg, 2000, 2, opts);
  const auto na = a.n, nb = b.n;
  const auto c1 = a.case_counts[0] + b.case_counts[0];
  const auto qsum = a.ul_rate[0].sum.q + b.ul_rate[0].sum.q;
  a.merge(b);
  CHECK(a.n == na + nb);
  CHECK(a.case_counts[0] == c1);
  CHECK(a.ul_rate[0].sum.q == qsum);
}

TEST_CASE("case frequencies match the closed form within 3 sigma") {
  NetworkConfig cfg;  // Table NLOS, ratio 10
  SimOptions opts;
  const auto mc = simulate(cfg, 30000, 12345, opts);
  CHECK(mc.case_counts[2] == 0);  // Case 3 never occurs
  for (auto c : {AssociationCase::case1, AssociationCase::case2,
                 AssociationCase::case4}) {
    const double p = association::prob_case_closed(cfg, c);
    const double sigma = std::sqrt(p * (1.0 - p) / 30000.0);
    CHECK_MESSAGE(std::abs(mc.case_frequency(c) - p) < 3.0 * sigma,
                  "case ", case_number(c), " freq ", mc.case_frequency(c),
                  " analytic ", p);
  }
}

TEST_CASE("conditional distance samples agree with the analytic law (KS)") {
  NetworkConfig cfg;
  SimOptions opts;
  opts.collect_distances = true;
  const auto mc = simulate(cfg, 20000, 777, opts);
  const auto& sample = mc.distances[2][1];  // Case 4, Scell
  REQUIRE(sample.size() > 1500);
  const double d = oracle::ks_distance(
      sample, [&](double x) {
        return distances::cdf(cfg, AssociationCase::case4, Tier::scell, x);
      });
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(sample.size())));
}

TEST_CASE("empirical rates match the closed forms within 3 SE") {
  NetworkConfig cfg;
  const auto mc = simulate(cfg, 40000, 4242, {});
  struct Probe {
    AssociationCase c;
    LinkDirection d;
    rates::RateMode mode;
  };
  const Probe probes[] = {
      {AssociationCase::case2, LinkDirection::uplink, rates::RateMode::case2},
      {AssociationCase::case4, LinkDirection::downlink, rates::RateMode::case4},
      {AssociationCase::case1, LinkDirection::downlink, rates::RateMode::case1},
  };
  for (const auto& p : probes) {
    const double tau = rates::avg_rate_closed(cfg, {p.mode, p.d});
    const double got = mc.mean_rate(p.c, p.d);
    const double se = mc.mean_rate_se(p.c, p.d);
    CHECK_MESSAGE(std::abs(got - tau) < 3.0 * se, "case ", case_number(p.c),
                  " mc=", got, " analytic=", tau, " se=", se);
  }
}

TEST_CASE("paired decoupled/coupled uplink dominance") {
  for (double ratio : {2.0, 10.0, 50.0}) {
    NetworkConfig cfg;
    cfg.lambda_s = ratio * cfg.lambda_m;
    const auto mc = simulate(cfg, 20000, 31, {});
    CHECK(mc.se_decoupled(cfg, LinkDirection::uplink) >=
          mc.se_coupled(cfg, LinkDirection::uplink));
    // Downlink association is shared, so the estimates coincide exactly
    // (same realizations, same draws).
    CHECK(mc.se_decoupled(cfg, LinkDirection::downlink) ==
          doctest::Approx(mc.se_coupled(cfg, LinkDirection::downlink))
              .epsilon(1e-12));
  }
}

TEST_CASE("shadowing shifts association frequencies by less than 2 points") {
  NetworkConfig cfg;
  NetworkConfig shadow_cfg = cfg;
  shadow_cfg.shadow_sigma_db = 4.0;
  SimOptions plain, shadowed;
  shadowed.shadowing = true;
  const auto a = simulate(cfg, 30000, 222, plain);
  const auto b = simulate(shadow_cfg, 30000, 222, shadowed);
  for (auto c : {AssociationCase::case1, AssociationCase::case2,
                 AssociationCase::case4}) {
    CHECK(std::abs(a.case_frequency(c) - b.case_frequency(c)) < 0.02);
  }
}

TEST_CASE("uplink interference Laplace functional matches the PGFL") {
  // E[exp(-s I)] with I summed over a PPP outside the serving distance x,
  // each term Q-bar h y^-alpha and s = x^alpha (e^t - 1) / Q-bar, against
  // exp(-pi lambda x^2 G(t)).
  NetworkConfig cfg;
  const double x = 50.0, t = 1.0;
  const double lambda = cfg.lambda_iu_effective();
  const double mu = cfg.mu_effective();
  const double s = std::pow(x, cfg.alpha_m) * std::expm1(t);
  rng::Xoshiro256pp r(909);
  const int n = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto nn = rng::poisson(r, lambda * kPi * mu * mu);
    double I = 0.0;
    for (std::int64_t k = 0; k < nn; ++k) {
      const double y = mu * std::sqrt(r.uniform());
      if (y > x) I += r.exponential() * std::pow(y, -cfg.alpha_m);
    }
    const double v = std::exp(-s * I);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  const double expect = std::exp(-kPi * lambda * x * x * rates::big_g(cfg, t));
  CHECK(std::abs(mean - expect) < 3.0 * se);
}

TEST_CASE("empty-tier realizations are resampled and counted") {
  NetworkConfig cfg;
  cfg.mu = 0.3 / std::sqrt(kPi * cfg.lambda_m);  // mean counts well below 1
  cfg.lambda_s = cfg.lambda_m;
  const auto mc = simulate(cfg, 500, 3, {});
  CHECK(mc.n == 500);
  CHECK(mc.resampled_empty_tiers > 0);
  CHECK(mc.case_counts[0] + mc.case_counts[1] + mc.case_counts[3] == 500);
}

TEST_CASE("simulate input validation") {
  NetworkConfig cfg;
  CHECK_THROWS_AS(simulate(cfg, 0, 1, {}), InvalidInput);
}
