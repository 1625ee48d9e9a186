// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmint::net {

// Defaults applied when a topology document omits a field.  Values are
// chosen so that queues visibly fill under the bundled functional workload.
inline constexpr int kDefaultQueuesPerPort = 2;
inline constexpr int kDefaultQueueCapacity = 64;
inline constexpr std::uint64_t kDefaultBandwidthBps = 10'000'000;
inline constexpr std::uint64_t kDefaultDelayUs = 50;
// BMv2-style ceiling; exceeding it is a validation warning, not an error.
inline constexpr int kQueuesPerPortWarnLimit = 8;

enum class HostRole { Generator, Collector, Traffic };

std::string_view to_string(HostRole role);

struct SwitchSpec {
  std::string name;
  int ports = 1;  // total port count including port 0 (host attachment)
  int nq = kDefaultQueuesPerPort;
  int queue_capacity = kDefaultQueueCapacity;
  std::vector<std::uint32_t> queue_weights;  // one entry per queue

  // Ports 1..ports-1 carry links and telemetry registers; port 0 is the
  // host/CPU attachment and is never monitored.
  int data_ports() const { return ports - 1; }
};

struct LinkSpec {
  std::string a;
  int a_port = 0;
  std::string b;
  int b_port = 0;
  std::uint64_t bandwidth_bps = kDefaultBandwidthBps;
  std::uint64_t delay_us = kDefaultDelayUs;
};

struct HostSpec {
  std::string name;
  std::string attached_switch;
  HostRole role = HostRole::Traffic;
};

class TopologyError : public std::runtime_error {
 public:
  explicit TopologyError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

struct TopologySpec {
  std::vector<SwitchSpec> switches;  // sorted by name
  std::vector<LinkSpec> links;
  std::vector<HostSpec> hosts;
  std::string root;

  int switch_index(std::string_view name) const;  // -1 when absent
  const SwitchSpec& switch_at(std::string_view name) const;
  bool has_collector(std::string_view switch_name) const;
};

// Parses and validates a topology document (JSON).  Link ports may be
// omitted, in which case ports are assigned per switch in ascending
// neighbor-name order starting at 1; port 0 is reserved for hosts.
// Throws TopologyError carrying the aggregated diagnostics on failure.
TopologySpec load_topology(const std::string& json_text);
TopologySpec load_topology_file(const std::filesystem::path& path);

// Re-validates an already built spec; returns diagnostics (empty when valid).
// Warnings (e.g. nq above the device ceiling) go to `warnings` when given.
std::vector<std::string> validate(const TopologySpec& spec,
                                  std::vector<std::string>* warnings = nullptr);

struct Tree {
  std::string root;
  std::map<std::string, std::string> parent;                 // absent for root
  std::map<std::string, std::vector<std::string>> children;  // ascending name order
  std::vector<std::string> leaves;                           // ascending; {root} when alone
  std::map<std::string, std::vector<int>> child_ports;       // ports toward children
  std::map<std::string, int> parent_port;                    // port toward parent

  std::size_t edge_count() const;
  // Unique tree path between two switches (inclusive of both endpoints).
  std::vector<std::string> path(const std::string& from, const std::string& to) const;
};

// BFS spanning tree with deterministic (ascending switch name) child order.
// Acts as the identity on topologies that are already trees.  Throws
// TopologyError listing unreachable switches when the graph is disconnected.
Tree to_tree(const TopologySpec& spec, const std::string& root);

}  // namespace mmint::net
