#include "dudnet/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dudnet/association.hpp"
#include "dudnet/distances.hpp"
#include "dudnet/errors.hpp"
#include "dudnet/montecarlo.hpp"
#include "dudnet/random.hpp"
#include "dudnet/rates.hpp"

namespace dudnet::scenario {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

model::NetworkConfig config_from_json(const json& j) {
  model::NetworkConfig cfg;
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  get("p_m_dbm", cfg.p_m_dbm);
  get("p_s_dbm", cfg.p_s_dbm);
  get("q_m_dbm", cfg.q_m_dbm);
  get("q_s_dbm", cfg.q_s_dbm);
  get("g_m_dbi", cfg.g_m_dbi);
  get("g_s_dbi", cfg.g_s_dbi);
  get("alpha_m", cfg.alpha_m);
  get("alpha_s", cfg.alpha_s);
  get("lambda_m", cfg.lambda_m);
  get("lambda_s", cfg.lambda_s);
  get("lambda_iu", cfg.lambda_iu);
  get("noise_m_dbm", cfg.noise_m_dbm);
  get("noise_s_dbm", cfg.noise_s_dbm);
  get("w_m", cfg.w_m);
  get("w_s", cfg.w_s);
  get("mu", cfg.mu);
  get("shadow_sigma_db", cfg.shadow_sigma_db);
  if (j.contains("lambda_u")) cfg.lambda_u = j.at("lambda_u").get<double>();
  return cfg;
}

json config_to_json(const model::NetworkConfig& cfg) {
  json j{{"p_m_dbm", cfg.p_m_dbm},
         {"p_s_dbm", cfg.p_s_dbm},
         {"q_m_dbm", cfg.q_m_dbm},
         {"q_s_dbm", cfg.q_s_dbm},
         {"g_m_dbi", cfg.g_m_dbi},
         {"g_s_dbi", cfg.g_s_dbi},
         {"alpha_m", cfg.alpha_m},
         {"alpha_s", cfg.alpha_s},
         {"lambda_m", cfg.lambda_m},
         {"lambda_s", cfg.lambda_s},
         {"lambda_iu", cfg.lambda_iu_effective()},
         {"noise_m_dbm", cfg.noise_m_dbm},
         {"noise_s_dbm", cfg.noise_s_dbm},
         {"w_m", cfg.w_m},
         {"w_s", cfg.w_s},
         {"mu", cfg.mu_effective()},
         {"shadow_sigma_db", cfg.shadow_sigma_db}};
  if (cfg.lambda_u) j["lambda_u"] = *cfg.lambda_u;
  return j;
}

OutputKind output_from_string(const std::string& s) {
  if (s == "assoc_probs") return OutputKind::assoc_probs;
  if (s == "distance_pdf") return OutputKind::distance_pdf;
  if (s == "spectral_efficiency") return OutputKind::spectral_efficiency;
  throw ConfigParseError("unknown output kind: " + s);
}

const char* output_to_string(OutputKind k) {
  switch (k) {
    case OutputKind::assoc_probs: return "assoc_probs";
    case OutputKind::distance_pdf: return "distance_pdf";
    default: return "spectral_efficiency";
  }
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t st = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  return rng::splitmix64(st);
}

struct SweepPoint {
  double ratio = 0.0;
  model::NetworkConfig cfg;
};

std::vector<SweepPoint> expand_sweep(const Scenario& sc) {
  std::vector<SweepPoint> pts;
  if (sc.sweep == SweepKind::none) {
    pts.push_back({sc.base.lambda_s / sc.base.lambda_m, sc.base});
    return pts;
  }
  for (double v : sc.sweep_values) {
    SweepPoint p;
    p.cfg = sc.base;
    if (sc.sweep == SweepKind::density_ratio) {
      p.cfg.lambda_s = v * sc.base.lambda_m;
      p.ratio = v;
    } else {
      p.cfg.alpha_s = v;
      p.ratio = sc.base.lambda_s / sc.base.lambda_m;
    }
    pts.push_back(p);
  }
  return pts;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw IoError("write failure on CSV output");
  }

 private:
  std::ofstream out_;
};

struct Runner {
  Scenario sc;
  std::filesystem::path out;
  int threads;
  json manifest;
  std::vector<std::string> warnings;
  std::vector<std::string> written;

  // One Monte Carlo run per sweep point, shared by all outputs.
  std::vector<std::optional<montecarlo::McResult>> mc_runs;
  bool mc_collect_distances = false;

  const montecarlo::McResult& mc_for_point(const std::vector<SweepPoint>& pts,
                                           std::size_t i) {
    if (!mc_runs[i]) {
      montecarlo::SimOptions opts;
      opts.threads = threads;
      opts.collect_distances = mc_collect_distances;
      opts.shadowing = sc.base.shadow_sigma_db > 0.0;
      mc_runs[i] = montecarlo::simulate(pts[i].cfg, sc.mc.n,
                                        point_seed(sc.mc.seed, i), opts);
      if (mc_runs[i]->resampled_empty_tiers > 0)
        warnings.push_back("empty-tier realizations resampled at sweep point " +
                           std::to_string(i) + ": " +
                           std::to_string(mc_runs[i]->resampled_empty_tiers));
    }
    return *mc_runs[i];
  }

  void write_assoc_probs(const std::vector<SweepPoint>& pts) {
    std::vector<std::string> header = {"ratio", "alpha_s", "case1", "case2",
                                       "case4"};
    if (sc.mc.enabled)
      for (const char* c : {"case1", "case2", "case4"}) {
        header.push_back(std::string(c) + "_mc");
        header.push_back(std::string(c) + "_ci");
      }
    CsvWriter csv(out / "assoc_probs.csv", header);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& cfg = pts[i].cfg;
      std::vector<std::string> row = {
          fmt(pts[i].ratio), fmt(cfg.alpha_s),
          fmt(association::prob_case_closed(cfg, model::AssociationCase::case1)),
          fmt(association::prob_case_closed(cfg, model::AssociationCase::case2)),
          fmt(association::prob_case_closed(cfg, model::AssociationCase::case4))};
      if (sc.mc.enabled) {
        const auto& mc = mc_for_point(pts, i);
        for (auto c : {model::AssociationCase::case1,
                       model::AssociationCase::case2,
                       model::AssociationCase::case4}) {
          row.push_back(fmt(mc.case_frequency(c)));
          row.push_back(fmt(1.96 * mc.case_frequency_sigma(c)));
        }
      }
      csv.row(row);
    }
    csv.close();
    written.push_back("assoc_probs.csv");
  }

  void write_distance_pdf(const std::vector<SweepPoint>& pts) {
    // Base configuration only; the schema carries no sweep column.
    const auto& cfg = sc.base;
    const montecarlo::McResult* mc = nullptr;
    if (sc.mc.enabled) {
      // Use (or create) the run of the point matching the base config, which
      // is point 0 for sweep "none"; otherwise run a dedicated one.
      mc = &mc_for_base(pts);
    }
    struct PairSpec {
      model::AssociationCase c;
      model::Tier tier;
      const char* case_label;
      const char* tier_label;
      int slot;
      int tier_idx;
    };
    const PairSpec pairs[] = {
        {model::AssociationCase::case1, model::Tier::mcell, "1", "M", 0, 0},
        {model::AssociationCase::case2, model::Tier::mcell, "2", "M", 1, 0},
        {model::AssociationCase::case2, model::Tier::scell, "2", "S", 1, 1},
        {model::AssociationCase::case4, model::Tier::scell, "4", "S", 2, 1},
    };
    CsvWriter csv(out / "distance_pdf.csv",
                  {"case", "tier", "x_m", "pdf", "mc_density"});
    const int cells = 200;
    for (const auto& pr : pairs) {
      distances::DistanceSampler sampler(cfg, pr.c, pr.tier);
      const double x_hi = sampler.quantile(0.999);
      const double dx = x_hi / cells;
      std::vector<std::int64_t> hist(cells, 0);
      std::int64_t n_case = 0;
      if (mc) {
        const auto& samples = mc->distances[pr.slot][pr.tier_idx];
        n_case = static_cast<std::int64_t>(samples.size());
        for (double s : samples) {
          const auto b = static_cast<std::int64_t>(s / dx);
          if (b >= 0 && b < cells) ++hist[static_cast<std::size_t>(b)];
        }
      }
      for (int i = 0; i < cells; ++i) {
        const double xc = (i + 0.5) * dx;
        std::vector<std::string> row = {pr.case_label, pr.tier_label, fmt(xc),
                                        fmt(distances::pdf(cfg, pr.c, pr.tier, xc))};
        if (mc && n_case > 0)
          row.push_back(fmt(static_cast<double>(hist[static_cast<std::size_t>(i)]) /
                            (static_cast<double>(n_case) * dx)));
        else
          row.emplace_back();
        csv.row(row);
      }
    }
    csv.close();
    written.push_back("distance_pdf.csv");
  }

  const montecarlo::McResult& mc_for_base(const std::vector<SweepPoint>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].cfg.lambda_s == sc.base.lambda_s &&
          pts[i].cfg.alpha_s == sc.base.alpha_s)
        return mc_for_point(pts, i);
    }
    if (!base_run_) {
      montecarlo::SimOptions opts;
      opts.threads = threads;
      opts.collect_distances = true;
      opts.shadowing = sc.base.shadow_sigma_db > 0.0;
      base_run_ = montecarlo::simulate(sc.base, sc.mc.n,
                                       point_seed(sc.mc.seed, 1u << 20), opts);
    }
    return *base_run_;
  }

  void write_spectral_efficiency(const std::vector<SweepPoint>& pts) {
    std::vector<std::string> header = {"ratio", "se_ul_decoupled",
                                       "se_dl_decoupled", "se_ul_coupled",
                                       "se_dl_coupled"};
    if (sc.mc.enabled)
      for (const char* c : {"se_ul_decoupled", "se_dl_decoupled",
                            "se_ul_coupled", "se_dl_coupled"}) {
        header.push_back(std::string(c) + "_mc");
        header.push_back(std::string(c) + "_ci");
      }
    CsvWriter csv(out / "spectral_efficiency.csv", header);

    // The analytic reports are independent per point; evaluate them in a
    // bounded async pool and write in sweep order.
    std::vector<std::future<rates::SpectralEfficiencyReport>> fut(pts.size());
    std::vector<rates::SpectralEfficiencyReport> reports(pts.size());
    const std::size_t batch = static_cast<std::size_t>(std::max(threads, 1));
    for (std::size_t start = 0; start < pts.size(); start += batch) {
      const std::size_t stop = std::min(pts.size(), start + batch);
      for (std::size_t i = start; i < stop; ++i)
        fut[i] = std::async(std::launch::async, [this, &pts, i] {
          return rates::spectral_efficiency(pts[i].cfg, sc.tol.rate_rel_tol);
        });
      for (std::size_t i = start; i < stop; ++i) reports[i] = fut[i].get();
    }

    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& rep = reports[i];
      std::vector<std::string> row = {fmt(pts[i].ratio),
                                      fmt(rep.se_ul_decoupled),
                                      fmt(rep.se_dl_decoupled),
                                      fmt(rep.se_ul_coupled),
                                      fmt(rep.se_dl_coupled)};
      if (sc.mc.enabled) {
        const auto& mc = mc_for_point(pts, i);
        const auto& cfg = pts[i].cfg;
        using model::LinkDirection;
        const double vals[4] = {mc.se_decoupled(cfg, LinkDirection::uplink),
                                mc.se_decoupled(cfg, LinkDirection::downlink),
                                mc.se_coupled(cfg, LinkDirection::uplink),
                                mc.se_coupled(cfg, LinkDirection::downlink)};
        const double ses[4] = {mc.se_decoupled_se(cfg, LinkDirection::uplink),
                               mc.se_decoupled_se(cfg, LinkDirection::downlink),
                               mc.se_coupled_se(cfg, LinkDirection::uplink),
                               mc.se_coupled_se(cfg, LinkDirection::downlink)};
        for (int k = 0; k < 4; ++k) {
          row.push_back(fmt(vals[k]));
          row.push_back(fmt(1.96 * ses[k]));
        }
      }
      csv.row(row);
    }
    csv.close();
    written.push_back("spectral_efficiency.csv");
  }

 private:
  std::optional<montecarlo::McResult> base_run_;
};

}  // namespace

void Scenario::validate() const {
  base.validate();
  if (sweep != SweepKind::none) {
    if (sweep_values.empty())
      throw ConfigParseError("sweep values must be non-empty");
    for (std::size_t i = 1; i < sweep_values.size(); ++i)
      if (!(sweep_values[i] > sweep_values[i - 1]))
        throw ConfigParseError("sweep values must be strictly increasing");
  }
  if (outputs.empty())
    throw ConfigParseError("scenario requests no outputs");
  if (mc.enabled && mc.n < 1)
    throw ConfigParseError("mc.n must be positive");
  if (!(tol.prob_rel_tol > 0.0 && tol.prob_rel_tol < 1.0) ||
      !(tol.rate_rel_tol > 0.0 && tol.rate_rel_tol < 1.0))
    throw ConfigParseError("tolerances must lie in (0, 1)");
}

Scenario Scenario::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigParseError(std::string("scenario JSON parse error: ") + e.what());
  }
  Scenario sc;
  try {
    if (j.contains("base")) sc.base = config_from_json(j.at("base"));
    if (j.contains("sweep")) {
      const auto& sw = j.at("sweep");
      const std::string kind = sw.value("type", "none");
      if (kind == "none")
        sc.sweep = SweepKind::none;
      else if (kind == "density_ratio")
        sc.sweep = SweepKind::density_ratio;
      else if (kind == "alpha_s")
        sc.sweep = SweepKind::alpha_s;
      else
        throw ConfigParseError("unknown sweep type: " + kind);
      if (sw.contains("values"))
        sc.sweep_values = sw.at("values").get<std::vector<double>>();
    }
    for (const auto& o : j.value("outputs", json::array()))
      sc.outputs.push_back(output_from_string(o.get<std::string>()));
    if (j.contains("mc")) {
      const auto& m = j.at("mc");
      sc.mc.enabled = m.value("enabled", false);
      sc.mc.n = m.value("n", std::int64_t{100000});
      sc.mc.seed = m.value("seed", std::uint64_t{1});
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      sc.tol.prob_rel_tol = t.value("prob_rel_tol", sc.tol.prob_rel_tol);
      sc.tol.rate_rel_tol = t.value("rate_rel_tol", sc.tol.rate_rel_tol);
    }
  } catch (const ConfigParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigParseError(std::string("scenario field error: ") + e.what());
  }
  return sc;
}

Scenario Scenario::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

int run(const std::string& scenario_path, const std::string& out_dir,
        const RunOverrides& overrides) {
  const auto t0 = std::chrono::steady_clock::now();
  json manifest;
  manifest["scenario_file"] = scenario_path;
  manifest["out_dir"] = out_dir;
  manifest["version"] = "1.0.0";
  manifest["status"] = "error";

  auto finish = [&](int code) {
    const auto t1 = std::chrono::steady_clock::now();
    manifest["wall_time_s"] =
        std::chrono::duration<double>(t1 - t0).count();
    manifest["exit_code"] = code;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream mf(std::filesystem::path(out_dir) / "run_manifest.json",
                     std::ios::binary);
    if (mf) mf << manifest.dump(2) << '\n';
    return code;
  };

  Scenario sc;
  try {
    sc = Scenario::from_file(scenario_path);
    if (overrides.mc_n) sc.mc.n = *overrides.mc_n;
    if (overrides.seed) sc.mc.seed = *overrides.seed;
    if (overrides.alpha_s) sc.base.alpha_s = *overrides.alpha_s;
    sc.validate();
  } catch (const IoError& e) {
    manifest["error"] = e.what();
    return finish(kIo);
  } catch (const ConfigParseError& e) {
    manifest["error"] = e.what();
    return finish(kConfigParse);
  } catch (const ConfigError& e) {
    manifest["error"] = e.what();
    return finish(kConfigParse);
  }

  Runner runner;
  runner.sc = sc;
  runner.out = out_dir;
  runner.threads = overrides.threads.value_or(
      static_cast<int>(std::thread::hardware_concurrency()));
  if (runner.threads < 1) runner.threads = 1;

  manifest["seed"] = sc.mc.seed;
  manifest["mc_enabled"] = sc.mc.enabled;
  manifest["mc_n"] = sc.mc.n;
  manifest["threads"] = runner.threads;
  manifest["base"] = config_to_json(sc.base);
  {
    json sw;
    sw["type"] = sc.sweep == SweepKind::none ? "none"
                 : sc.sweep == SweepKind::density_ratio ? "density_ratio"
                                                        : "alpha_s";
    sw["values"] = sc.sweep_values;
    manifest["sweep"] = sw;
    json outs = json::array();
    for (auto o : sc.outputs) outs.push_back(output_to_string(o));
    manifest["outputs"] = outs;
  }

  try {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + ec.message());

    const std::vector<SweepPoint> pts = expand_sweep(sc);
    runner.mc_runs.resize(pts.size());
    runner.mc_collect_distances =
        std::find(sc.outputs.begin(), sc.outputs.end(),
                  OutputKind::distance_pdf) != sc.outputs.end();

    for (OutputKind k : sc.outputs) {
      switch (k) {
        case OutputKind::assoc_probs:
          runner.write_assoc_probs(pts);
          break;
        case OutputKind::distance_pdf:
          runner.write_distance_pdf(pts);
          break;
        case OutputKind::spectral_efficiency:
          runner.write_spectral_efficiency(pts);
          break;
      }
    }
  } catch (const IoError& e) {
    manifest["error"] = e.what();
    manifest["warnings"] = runner.warnings;
    return finish(kIo);
  } catch (const Error& e) {
    manifest["error"] = e.what();
    manifest["warnings"] = runner.warnings;
    return finish(kDomain);
  } catch (const std::exception& e) {
    manifest["error"] = e.what();
    manifest["warnings"] = runner.warnings;
    return finish(kInternal);
  }

  manifest["status"] = "ok";
  manifest["warnings"] = runner.warnings;
  manifest["outputs_written"] = runner.written;
  return finish(kOk);
}

}  // namespace dudnet::scenario
