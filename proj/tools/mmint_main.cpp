// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "mmint/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInternalError = 2;

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("MMINT_OUTPUT_DIR")) return env;
  return "mmint-out";
}

int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            std::optional<std::uint64_t> seed_override, bool verbose) {
  auto config = mmint::experiment::load_config_file(config_path);
  if (seed_override) config.seed = *seed_override;
  const auto diags = mmint::experiment::validate(config);
  if (!diags.empty()) {
    for (const auto& d : diags) std::cerr << "error: " << d << '\n';
    return kExitInputError;
  }
  const auto result = mmint::experiment::run_experiment(config);
  const auto written = mmint::experiment::write_artifacts(result, out_dir);
  if (verbose)
    for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
  std::cout << result.report.to_text();
  std::cout << "artifacts in " << out_dir.string() << " (" << written.size() << " files)\n";
  return kExitOk;
}

int cmd_validate(const std::filesystem::path& config_path) {
  const auto config = mmint::experiment::load_config_file(config_path);
  const auto diags = mmint::experiment::validate(config);
  if (diags.empty()) {
    std::cout << "OK\n";
    return kExitOk;
  }
  for (const auto& d : diags) std::cerr << "error: " << d << '\n';
  return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmint: multiqueue in-band telemetry simulator"};
  app.require_subcommand(1);

  std::filesystem::path config_path;
  std::filesystem::path topology_path;
  std::filesystem::path out_dir = default_out_dir();
  std::optional<std::uint64_t> seed_override;
  bool verbose = false;

  auto* run = app.add_subcommand("run", "run an experiment and write its artifacts");
  run->add_option("-c,--config", config_path, "experiment config (JSON)")->required();
  run->add_option("-o,--out", out_dir, "output directory (default $MMINT_OUTPUT_DIR or ./mmint-out)");
  run->add_option("-s,--seed", seed_override, "override the config seed");
  run->add_flag("-v,--verbose", verbose, "list written artifacts");

  auto* validate = app.add_subcommand("validate", "check a config and its topology");
  validate->add_option("-c,--config", config_path, "experiment config (JSON)")->required();

  auto* describe = app.add_subcommand("describe", "print topology, nodeIDs and forward routeID");
  describe->add_option("-t,--topology", topology_path, "topology file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed_override, verbose);
    if (validate->parsed()) return cmd_validate(config_path);
    if (describe->parsed()) {
      std::cout << mmint::experiment::describe_topology(topology_path);
      return kExitOk;
    }
  } catch (const mmint::net::TopologyError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << d << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
  return kExitInternalError;
}
