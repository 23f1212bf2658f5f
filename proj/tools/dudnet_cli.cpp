// Scenario runner for the two-tier decoupled-access analysis library.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dudnet/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "dudnet - association probabilities, serving-distance distributions and\n"
      "spectral efficiencies of a two-tier (sub-6GHz + mmWave) network under\n"
      "decoupled and coupled uplink/downlink access.\n\n"
      "Exit codes: 0 success, 2 scenario parse/validation error, 3 I/O error,\n"
      "4 numerical/domain error, 5 internal error."};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Execute a scenario file");
  std::string scenario_path;
  std::string out_dir;
  std::optional<std::int64_t> mc_n;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool los = false, nlos = false;

  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--mc-n", mc_n, "Override Monte Carlo realization count");
  run->add_option("--seed", seed, "Override Monte Carlo seed");
  run->add_option("--threads", threads,
                  "Worker threads (fallback: HETNET_THREADS, then hardware)");
  auto* flag_los = run->add_flag("--los", los, "Force alpha_s = 2 (LOS mmWave)");
  auto* flag_nlos =
      run->add_flag("--nlos", nlos, "Force alpha_s = 4 (NLOS mmWave)");
  flag_los->excludes(flag_nlos);
  flag_nlos->excludes(flag_los);

  CLI11_PARSE(app, argc, argv);

  dudnet::scenario::RunOverrides ov;
  ov.mc_n = mc_n;
  ov.seed = seed;
  ov.threads = threads;
  if (!threads) {
    if (const char* env = std::getenv("HETNET_THREADS")) {
      try {
        ov.threads = std::stoi(env);
      } catch (const std::exception&) {
        std::cerr << "warning: ignoring non-numeric HETNET_THREADS\n";
      }
    }
  }
  if (los) ov.alpha_s = 2.0;
  if (nlos) ov.alpha_s = 4.0;

  const int code = dudnet::scenario::run(scenario_path, out_dir, ov);
  if (code != 0)
    std::cerr << "dudnet run failed (exit code " << code
              << "); see run_manifest.json for the recorded error\n";
  return code;
}
