#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dudnet/model.hpp"
#include "dudnet/random.hpp"

namespace dudnet::montecarlo {

struct Point {
  double x = 0.0;
  double y = 0.0;
  double norm() const;
};

// Homogeneous PPP on a disk of the given radius centered at the origin:
// Poisson(density*pi*radius^2) points, i.i.d. uniform.
std::vector<Point> sample_ppp(double density, double radius,
                              rng::Xoshiro256pp& rng);

// Power-based joint association from the nearest-per-tier distances.
// Shadow factors are linear per-tier multipliers (1 = no shadowing); the tie
// breaks toward the Mcell.
model::AssociationCase associate(const model::NetworkConfig& cfg, double xm,
                                 double xs, double shadow_m = 1.0,
                                 double shadow_s = 1.0);

struct SimOptions {
  bool shadowing = false;
  bool collect_distances = false;
  int threads = 0;  // 0: hardware concurrency
};

// Rate sums are accumulated in 2^-40 fixed point (128-bit) so that merging
// partial results is exact and independent of thread count.
struct FixedSum {
  __int128 q = 0;
  void add(double v);
  double value() const;
  void merge(const FixedSum& o) { q += o.q; }
};

struct RateAccum {
  std::int64_t count = 0;
  FixedSum sum, sum_sq;
  void add(double v);
  void merge(const RateAccum& o);
  double mean() const;
  double std_error() const;
};

struct McResult {
  std::int64_t n = 0;
  std::int64_t resampled_empty_tiers = 0;
  std::array<std::int64_t, 4> case_counts{};          // Cases 1..4
  std::array<RateAccum, 4> ul_rate;                   // decoupled, by case
  std::array<RateAccum, 4> dl_rate;
  std::array<RateAccum, 2> coupled_ul;                // by coupled tier {M, S}
  std::array<RateAccum, 2> coupled_dl;
  std::array<std::int64_t, 2> coupled_tier_counts{};
  RateAccum interference_ul;                          // empirical I means
  RateAccum interference_dl;
  // distance samples, indexed [case 1|2|4 -> 0|1|2][tier M|S]
  std::array<std::array<std::vector<double>, 2>, 3> distances;

  void merge(const McResult& o);

  double case_frequency(model::AssociationCase c) const;
  // Binomial standard error of the case frequency.
  double case_frequency_sigma(model::AssociationCase c) const;
  double mean_rate(model::AssociationCase c, model::LinkDirection d) const;
  double mean_rate_se(model::AssociationCase c, model::LinkDirection d) const;
  double coupled_mean_rate(model::Tier tier, model::LinkDirection d) const;
  double coupled_mean_rate_se(model::Tier tier, model::LinkDirection d) const;

  // Empirical spectral efficiencies (per-case means weighted by frequency,
  // divided by the serving-tier bandwidth) and their standard errors.
  double se_decoupled(const model::NetworkConfig& cfg,
                      model::LinkDirection d) const;
  double se_coupled(const model::NetworkConfig& cfg,
                    model::LinkDirection d) const;
  double se_decoupled_se(const model::NetworkConfig& cfg,
                         model::LinkDirection d) const;
  double se_coupled_se(const model::NetworkConfig& cfg,
                       model::LinkDirection d) const;
};

McResult simulate(const model::NetworkConfig& cfg, std::int64_t n,
                  std::uint64_t seed, const SimOptions& options = {});

}  // namespace dudnet::montecarlo
