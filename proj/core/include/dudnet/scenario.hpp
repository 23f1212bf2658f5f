#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dudnet/model.hpp"

namespace dudnet::scenario {

enum class SweepKind { none, density_ratio, alpha_s };
enum class OutputKind { assoc_probs, distance_pdf, spectral_efficiency };

struct McSettings {
  bool enabled = false;
  std::int64_t n = 100000;
  std::uint64_t seed = 1;
};

struct Tolerances {
  double prob_rel_tol = 1e-8;
  double rate_rel_tol = 1e-6;
};

struct Scenario {
  model::NetworkConfig base;
  SweepKind sweep = SweepKind::none;
  std::vector<double> sweep_values;
  std::vector<OutputKind> outputs;
  McSettings mc;
  Tolerances tol;

  void validate() const;
  static Scenario from_json_text(const std::string& text);
  static Scenario from_file(const std::string& path);
};

struct RunOverrides {
  std::optional<std::int64_t> mc_n;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> alpha_s;  // set by --los / --nlos
};

enum ExitCode : int {
  kOk = 0,
  kConfigParse = 2,
  kIo = 3,
  kDomain = 4,
  kInternal = 5,
};

// Executes a scenario: one CSV per requested output plus run_manifest.json
// (written even on failure, with the error recorded). Returns an ExitCode.
int run(const std::string& scenario_path, const std::string& out_dir,
        const RunOverrides& overrides = {});

}  // namespace dudnet::scenario
