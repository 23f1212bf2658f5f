#pragma once

#include <vector>

#include "dudnet/model.hpp"

namespace dudnet::distances {

// Supported (case, tier) pairs: (1, M), (2, M), (2, S), (4, S).
bool pair_supported(model::AssociationCase c, model::Tier tier);

// Conditional serving-distance density f_{X|Case}(x), per meter.
double pdf(const model::NetworkConfig& cfg, model::AssociationCase c,
           model::Tier tier, double x);

// P(X <= x | Case), by numerical integration of the pdf.
double cdf(const model::NetworkConfig& cfg, model::AssociationCase c,
           model::Tier tier, double x, double rel_tol = 1e-8);

// Inverse-CDF sampler over a cached monotone cumulative table.
class DistanceSampler {
 public:
  DistanceSampler(const model::NetworkConfig& cfg, model::AssociationCase c,
                  model::Tier tier);

  // Quantile by monotone bisection on the table, p in (0, 1).
  double quantile(double p) const;

  template <class Rng>
  double sample(Rng& rng) const {
    return quantile(rng.uniform_pos());
  }

  double x_max() const { return x_[x_.size() - 1]; }

 private:
  std::vector<double> x_;
  std::vector<double> cum_;
};

// One draw from f_{X|Case} (builds a sampler internally; prefer
// DistanceSampler for bulk sampling).
template <class Rng>
double sample(const model::NetworkConfig& cfg, model::AssociationCase c,
              model::Tier tier, Rng& rng) {
  return DistanceSampler(cfg, c, tier).sample(rng);
}

}  // namespace dudnet::distances
