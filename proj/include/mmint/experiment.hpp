// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmint/strategies.hpp"

namespace mmint::experiment {

struct ExperimentConfig {
  std::filesystem::path topology_file;
  std::vector<sim::Strategy> strategies;
  std::uint64_t probe_period_us = 10'000;
  std::uint64_t probe_start_us = 0;
  std::uint32_t generations = 0;  // 0 = keep firing for the whole duration
  std::uint64_t duration_us = 1'000'000;
  std::uint64_t seed = 1;
  std::vector<sim::Flow> flows;
};

// Loads a config document; topology paths are resolved relative to the
// config file's directory.
ExperimentConfig load_config_file(const std::filesystem::path& path);
ExperimentConfig load_config(const std::string& json_text, const std::filesystem::path& base_dir);

// Read-only checks; returns diagnostics, empty when the config is runnable.
std::vector<std::string> validate(const ExperimentConfig& config);

struct StrategyRun {
  sim::Strategy strategy;
  std::size_t launches = 0;
  sim::SimulationTrace trace;
  telemetry::Collector collector;
};

struct ExperimentResult {
  net::TopologySpec spec;
  net::Tree tree;
  mpolka::NodeIdMap node_ids;
  std::vector<StrategyRun> runs;
  strategy::MetricsReport report;
};

// Runs every configured strategy against the same background traffic and
// seed.  The returned result owns all traces and collector state.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Writes metrics.csv, summary.txt, per-strategy trace logs and receipt CSVs,
// and per-switch occupancy series CSVs under out_dir.  Identical
// (config, seed) inputs produce byte-identical artifacts.
std::vector<std::filesystem::path> write_artifacts(const ExperimentResult& result,
                                                   const std::filesystem::path& out_dir);

// Switch/port/queue/nodeID table, leaf set, per-switch transmission states
// and the routeID of the forward tree.
std::string describe_topology(const std::filesystem::path& topology_file);

}  // namespace mmint::experiment
