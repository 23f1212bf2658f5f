#include "dudnet/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "dudnet/errors.hpp"

namespace dudnet::montecarlo {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kFixedScale = 1099511627776.0;  // 2^40
constexpr std::int64_t kChunk = 1024;

// ln(1 + SINR) clamped away from inf/NaN (a PPP point can land arbitrarily
// close to the receiver).
double rate_nats(double numerator, double denominator) {
  const double sinr = numerator / denominator;
  return std::log1p(sinr < 1e300 ? sinr : 1e300);
}

int case_slot(model::AssociationCase c) {
  switch (c) {
    case model::AssociationCase::case1: return 0;
    case model::AssociationCase::case2: return 1;
    case model::AssociationCase::case3: return -1;
    default: return 2;
  }
}

struct Precomputed {
  double mu, mean_m, mean_s, mean_iu;
  double qbm, qbs, pbm, pbs;
  double noise_m, noise_s;
  double am, as;
  double shadow_db;
  double lambda_iu;
};

Precomputed precompute(const model::NetworkConfig& cfg) {
  Precomputed p;
  p.mu = cfg.mu_effective();
  const double area = kPi * p.mu * p.mu;
  p.mean_m = cfg.lambda_m * area;
  p.mean_s = cfg.lambda_s * area;
  p.lambda_iu = cfg.lambda_iu_effective();
  p.mean_iu = p.lambda_iu * area;
  p.qbm = cfg.q_bar_m();
  p.qbs = cfg.q_bar_s();
  p.pbm = cfg.p_bar_m();
  p.pbs = cfg.p_bar_s();
  p.noise_m = cfg.noise_m();
  p.noise_s = cfg.noise_s();
  p.am = cfg.alpha_m;
  p.as = cfg.alpha_s;
  p.shadow_db = cfg.shadow_sigma_db;
  return p;
}

struct Scratch {
  std::vector<double> m_radii;
};

void run_realization(const model::NetworkConfig& cfg, const Precomputed& p,
                     rng::Xoshiro256pp& rng, const SimOptions& opts,
                     Scratch& scratch, McResult& acc) {
  // Mcell tier: all radii are needed for downlink interference.
  std::int64_t nm;
  for (;;) {
    nm = rng::poisson(rng, p.mean_m);
    if (nm > 0) break;
    ++acc.resampled_empty_tiers;
  }
  scratch.m_radii.clear();
  double xm = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < nm; ++i) {
    const double r = p.mu * std::sqrt(rng.uniform());
    scratch.m_radii.push_back(r);
    xm = std::min(xm, r);
  }
  // Scell tier: only the nearest distance enters (noise-limited tier).
  std::int64_t ns;
  for (;;) {
    ns = rng::poisson(rng, p.mean_s);
    if (ns > 0) break;
    ++acc.resampled_empty_tiers;
  }
  double xs = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < ns; ++i)
    xs = std::min(xs, p.mu * std::sqrt(rng.uniform()));

  double shadow_m = 1.0, shadow_s = 1.0;
  if (opts.shadowing && p.shadow_db > 0.0) {
    shadow_m = model::db_to_linear(p.shadow_db * rng.normal());
    shadow_s = model::db_to_linear(p.shadow_db * rng.normal());
  }

  const model::AssociationCase c = associate(cfg, xm, xs, shadow_m, shadow_s);

  const double h_ul_m = rng.exponential();
  const double h_dl_m = rng.exponential();
  const double h_ul_s = rng.exponential();
  const double h_dl_s = rng.exponential();

  const double path_m = std::pow(xm, -p.am);
  const double path_s = std::pow(xs, -p.as);

  // Uplink interference at the serving Mcell BS: a fresh PPP of interfering
  // UEs transmitting Q-bar_M, those inside the serving distance excluded
  // (orthogonal in-cell resources).
  double i_ul = 0.0;
  const std::int64_t niu = rng::poisson(rng, p.mean_iu);
  for (std::int64_t i = 0; i < niu; ++i) {
    const double y = p.mu * std::sqrt(rng.uniform());
    if (y > xm) i_ul += p.qbm * rng.exponential() * std::pow(y, -p.am);
  }
  // Downlink interference at the UE: every non-serving Mcell BS.
  double i_dl = 0.0;
  bool skipped_serving = false;
  for (const double r : scratch.m_radii) {
    if (!skipped_serving && r == xm) {
      skipped_serving = true;
      continue;
    }
    i_dl += p.pbm * rng.exponential() * std::pow(r, -p.am);
  }

  const double rate_ul_m =
      rate_nats(p.qbm * shadow_m * h_ul_m * path_m, p.noise_m + i_ul);
  const double rate_dl_m =
      rate_nats(p.pbm * shadow_m * h_dl_m * path_m, p.noise_m + i_dl);
  const double rate_ul_s = rate_nats(p.qbs * shadow_s * h_ul_s * path_s, p.noise_s);
  const double rate_dl_s = rate_nats(p.pbs * shadow_s * h_dl_s * path_s, p.noise_s);

  acc.n += 1;
  acc.case_counts[case_number(c) - 1] += 1;
  acc.interference_ul.add(i_ul);
  acc.interference_dl.add(i_dl);

  const bool ul_m = c == model::AssociationCase::case1 ||
                    c == model::AssociationCase::case3;
  const bool dl_m = c == model::AssociationCase::case1 ||
                    c == model::AssociationCase::case2;
  const int ci = case_number(c) - 1;
  acc.ul_rate[ci].add(ul_m ? rate_ul_m : rate_ul_s);
  acc.dl_rate[ci].add(dl_m ? rate_dl_m : rate_dl_s);

  // Coupled access follows the downlink (received-power) choice for both
  // directions, on the same realization.
  const int ct = dl_m ? 0 : 1;
  acc.coupled_tier_counts[ct] += 1;
  acc.coupled_ul[ct].add(dl_m ? rate_ul_m : rate_ul_s);
  acc.coupled_dl[ct].add(dl_m ? rate_dl_m : rate_dl_s);

  if (opts.collect_distances) {
    const int slot = case_slot(c);
    if (slot >= 0) {
      if (c != model::AssociationCase::case4)
        acc.distances[slot][0].push_back(xm);
      if (c != model::AssociationCase::case1)
        acc.distances[slot][1].push_back(xs);
    }
  }
}

}  // namespace

double Point::norm() const { return std::hypot(x, y); }

std::vector<Point> sample_ppp(double density, double radius,
                              rng::Xoshiro256pp& rng) {
  if (!(density > 0.0) || !(radius > 0.0))
    throw InvalidInput("sample_ppp: density and radius must be positive");
  const std::int64_t n = rng::poisson(rng, density * kPi * radius * radius);
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (auto& pt : pts) {
    const double r = radius * std::sqrt(rng.uniform());
    const double a = 2.0 * kPi * rng.uniform();
    pt.x = r * std::cos(a);
    pt.y = r * std::sin(a);
  }
  return pts;
}

model::AssociationCase associate(const model::NetworkConfig& cfg, double xm,
                                 double xs, double shadow_m, double shadow_s) {
  if (!(xm > 0.0) || !(xs > 0.0))
    throw InvalidInput("associate: distances must be positive");
  const double rx_m = shadow_m * std::pow(xm, -cfg.alpha_m);
  const double rx_s = shadow_s * std::pow(xs, -cfg.alpha_s);
  const bool ul_m = cfg.q_bar_m() * rx_m >= cfg.q_bar_s() * rx_s;
  const bool dl_m = cfg.p_bar_m() * rx_m >= cfg.p_bar_s() * rx_s;
  if (ul_m && dl_m) return model::AssociationCase::case1;
  if (!ul_m && dl_m) return model::AssociationCase::case2;
  if (ul_m && !dl_m) return model::AssociationCase::case3;
  return model::AssociationCase::case4;
}

void FixedSum::add(double v) {
  q += static_cast<__int128>(std::llround(v * kFixedScale));
}

double FixedSum::value() const {
  return static_cast<double>(q) / kFixedScale;
}

void RateAccum::add(double v) {
  ++count;
  sum.add(v);
  sum_sq.add(v * v);
}

void RateAccum::merge(const RateAccum& o) {
  count += o.count;
  sum.merge(o.sum);
  sum_sq.merge(o.sum_sq);
}

double RateAccum::mean() const {
  return count > 0 ? sum.value() / static_cast<double>(count) : 0.0;
}

double RateAccum::std_error() const {
  if (count < 2) return 0.0;
  const double m = mean();
  const double var =
      std::max(sum_sq.value() / static_cast<double>(count) - m * m, 0.0);
  return std::sqrt(var / static_cast<double>(count));
}

void McResult::merge(const McResult& o) {
  n += o.n;
  resampled_empty_tiers += o.resampled_empty_tiers;
  for (int i = 0; i < 4; ++i) {
    case_counts[i] += o.case_counts[i];
    ul_rate[i].merge(o.ul_rate[i]);
    dl_rate[i].merge(o.dl_rate[i]);
  }
  for (int i = 0; i < 2; ++i) {
    coupled_tier_counts[i] += o.coupled_tier_counts[i];
    coupled_ul[i].merge(o.coupled_ul[i]);
    coupled_dl[i].merge(o.coupled_dl[i]);
  }
  interference_ul.merge(o.interference_ul);
  interference_dl.merge(o.interference_dl);
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 2; ++t) {
      auto& dst = distances[s][t];
      const auto& src = o.distances[s][t];
      dst.insert(dst.end(), src.begin(), src.end());
    }
}

double McResult::case_frequency(model::AssociationCase c) const {
  return n > 0 ? static_cast<double>(case_counts[case_number(c) - 1]) /
                     static_cast<double>(n)
               : 0.0;
}

double McResult::case_frequency_sigma(model::AssociationCase c) const {
  if (n == 0) return 0.0;
  const double p = case_frequency(c);
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

double McResult::mean_rate(model::AssociationCase c,
                           model::LinkDirection d) const {
  const auto& a = (d == model::LinkDirection::uplink)
                      ? ul_rate[case_number(c) - 1]
                      : dl_rate[case_number(c) - 1];
  return a.mean();
}

double McResult::mean_rate_se(model::AssociationCase c,
                              model::LinkDirection d) const {
  const auto& a = (d == model::LinkDirection::uplink)
                      ? ul_rate[case_number(c) - 1]
                      : dl_rate[case_number(c) - 1];
  return a.std_error();
}

double McResult::coupled_mean_rate(model::Tier tier,
                                   model::LinkDirection d) const {
  const int i = tier == model::Tier::mcell ? 0 : 1;
  return (d == model::LinkDirection::uplink ? coupled_ul[i] : coupled_dl[i]).mean();
}

double McResult::coupled_mean_rate_se(model::Tier tier,
                                      model::LinkDirection d) const {
  const int i = tier == model::Tier::mcell ? 0 : 1;
  return (d == model::LinkDirection::uplink ? coupled_ul[i] : coupled_dl[i])
      .std_error();
}

double McResult::se_decoupled(const model::NetworkConfig& cfg,
                              model::LinkDirection d) const {
  if (n == 0) return 0.0;
  const bool ul = d == model::LinkDirection::uplink;
  // serving-tier bandwidth by case: case1 (M,M), case2 (S up, M down),
  // case4 (S,S); case3 never occurs without direction-split shadowing.
  const double w_by_case[4] = {cfg.w_m, ul ? cfg.w_s : cfg.w_m,
                               ul ? cfg.w_m : cfg.w_s, cfg.w_s};
  double se = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& a = ul ? ul_rate[i] : dl_rate[i];
    se += a.sum.value() / (static_cast<double>(n) * w_by_case[i]);
  }
  return se;
}

double McResult::se_coupled(const model::NetworkConfig& cfg,
                            model::LinkDirection d) const {
  if (n == 0) return 0.0;
  const bool ul = d == model::LinkDirection::uplink;
  const auto& m = ul ? coupled_ul[0] : coupled_dl[0];
  const auto& s = ul ? coupled_ul[1] : coupled_dl[1];
  return m.sum.value() / (static_cast<double>(n) * cfg.w_m) +
         s.sum.value() / (static_cast<double>(n) * cfg.w_s);
}

double McResult::se_decoupled_se(const model::NetworkConfig& cfg,
                                 model::LinkDirection d) const {
  if (n < 2) return 0.0;
  const bool ul = d == model::LinkDirection::uplink;
  const double w_by_case[4] = {cfg.w_m, ul ? cfg.w_s : cfg.w_m,
                               ul ? cfg.w_m : cfg.w_s, cfg.w_s};
  // The estimator is the mean of one rate/W value per realization.
  double second = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& a = ul ? ul_rate[i] : dl_rate[i];
    second += a.sum_sq.value() / (w_by_case[i] * w_by_case[i]);
  }
  const double mean = se_decoupled(cfg, d);
  const double var =
      std::max(second / static_cast<double>(n) - mean * mean, 0.0);
  return std::sqrt(var / static_cast<double>(n));
}

double McResult::se_coupled_se(const model::NetworkConfig& cfg,
                               model::LinkDirection d) const {
  if (n < 2) return 0.0;
  const bool ul = d == model::LinkDirection::uplink;
  const auto& m = ul ? coupled_ul[0] : coupled_dl[0];
  const auto& s = ul ? coupled_ul[1] : coupled_dl[1];
  const double second = m.sum_sq.value() / (cfg.w_m * cfg.w_m) +
                        s.sum_sq.value() / (cfg.w_s * cfg.w_s);
  const double mean = se_coupled(cfg, d);
  const double var =
      std::max(second / static_cast<double>(n) - mean * mean, 0.0);
  return std::sqrt(var / static_cast<double>(n));
}

McResult simulate(const model::NetworkConfig& cfg, std::int64_t n,
                  std::uint64_t seed, const SimOptions& options) {
  cfg.validate();
  if (n < 1) throw InvalidInput("simulate: n must be at least 1");
  const Precomputed pre = precompute(cfg);

  const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<McResult> partials(static_cast<std::size_t>(nchunks));
  std::atomic<std::int64_t> next{0};

  auto worker = [&]() {
    Scratch scratch;
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= nchunks) break;
      McResult local;
      const std::int64_t begin = c * kChunk;
      const std::int64_t end = std::min(n, begin + kChunk);
      for (std::int64_t i = begin; i < end; ++i) {
        auto stream = rng::substream(seed, static_cast<std::uint64_t>(i));
        run_realization(cfg, pre, stream, options, scratch, local);
      }
      partials[static_cast<std::size_t>(c)] = std::move(local);
    }
  };

  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(nchunks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  McResult out;
  for (const auto& part : partials) out.merge(part);
  return out;
}

}  // namespace dudnet::montecarlo
