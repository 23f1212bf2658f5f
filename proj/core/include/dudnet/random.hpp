#pragma once

#include <cmath>
#include <cstdint>

namespace dudnet::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna). One instance per worker; instances are
// never shared between threads.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1).
  double uniform_pos() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  // Unit-mean exponential.
  double exponential() { return -std::log1p(-uniform()); }

  // Standard normal (Box-Muller, second value cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Counter-based sub-stream: the generator for work item `index` of a run
// seeded with `seed`. Identical regardless of which worker executes the item.
inline Xoshiro256pp substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t st = seed;
  std::uint64_t a = splitmix64(st);
  st = a ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  std::uint64_t b = splitmix64(st);
  return Xoshiro256pp(b);
}

// Exact Poisson sampler (product-of-uniforms, chunked so exp(-mean) stays
// well inside double range for large means).
template <class Rng>
std::int64_t poisson(Rng& rng, double mean) {
  std::int64_t total = 0;
  while (mean > 16.0) {
    double chunk = 16.0;
    const double limit = std::exp(-chunk);
    std::int64_t k = 0;
    double prod = 1.0;
    do {
      prod *= rng.uniform_pos();
      ++k;
    } while (prod > limit);
    total += k - 1;
    mean -= chunk;
  }
  if (mean > 0.0) {
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double prod = 1.0;
    do {
      prod *= rng.uniform_pos();
      ++k;
    } while (prod > limit);
    total += k - 1;
  }
  return total;
}

}  // namespace dudnet::rng
