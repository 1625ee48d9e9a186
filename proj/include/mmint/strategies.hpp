// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmint/mpolka.hpp"
#include "mmint/netmodel.hpp"
#include "mmint/simcore.hpp"

namespace mmint::strategy {

// S1: traditional hop-by-hop probes.  One unicast probe per (leaf, queue) in
// each direction of the tree, lf*nq*2 launches in total.
sim::ProbePlan plan_s1(const net::Tree& tree, int nq);

// S2: one source-routed forward launch that fans out per (port, queue) in
// the pipeline, plus one reverse unicast launch per (leaf, queue) covering
// the upstream queues.
sim::ProbePlan plan_s2(const net::Tree& tree, int nq, const mpolka::NodeIdMap& ids);

// S3 (MM-INT): a single forward multicast launch per generation; the
// register dumps supply every queue, so there is no per-queue cloning and no
// reverse direction.
sim::ProbePlan plan_s3(const net::Tree& tree, const mpolka::NodeIdMap& ids);

struct LinkDirection {
  std::string from;
  std::string to;
  auto operator<=>(const LinkDirection&) const = default;
};

struct DuplicateStats {
  std::size_t total = 0;
  std::size_t forward = 0;
  std::size_t reverse = 0;
  std::map<LinkDirection, std::size_t> by_link;
};

// Traversal-set convention: a probe traversal of (link, direction) assigned
// to queue q is a duplicate when another probe of the same generation and
// queue assignment already crossed that (link, direction).
DuplicateStats count_duplicates(const sim::SimulationTrace& trace);

// Bytes on switch-to-switch links only (host attachments excluded): the sum
// of on-wire probe sizes over every link traversal.
std::uint64_t account_bytes(const sim::SimulationTrace& trace);

// Register memory per switch: MM-INT stores one 16-byte slot per monitored
// (data port, queue); S1/S2 keep no switch state.
std::map<std::string, std::size_t> account_memory(const net::TopologySpec& spec,
                                                  sim::Strategy strategy);
std::size_t register_memory_bytes(int data_ports, int nq);

struct SizeStats {
  int min = 0;
  int max = 0;
  double mean = 0.0;
  std::size_t samples = 0;
};

struct StrategyMetrics {
  sim::Strategy strategy = sim::Strategy::S3;
  std::uint32_t generations = 0;
  std::size_t launches = 0;
  std::size_t probes_received = 0;
  DuplicateStats duplicates;
  std::uint64_t total_probe_bytes = 0;
  SizeStats wire_sizes;  // over link traversals
  std::map<std::string, std::size_t> memory_per_switch;
  std::size_t memory_total = 0;
};

StrategyMetrics analyze(const sim::SimulationTrace& trace, const net::TopologySpec& spec,
                        std::size_t launches);

// Published reference results for the bundled 7-switch topology (nq = 2),
// printed alongside our measurements.  The reference duplicate totals use an
// unstated convention that differs from the traversal-set convention above.
struct ReferenceRow {
  const char* mechanism;
  const char* pkt_size;
  int probes;
  const char* memory;
  int duplicates;
  int total_bytes;
};
const std::vector<ReferenceRow>& reference_rows();

struct MetricsReport {
  std::vector<StrategyMetrics> rows;  // in run order

  const StrategyMetrics* find(sim::Strategy s) const;
  std::optional<double> receipt_ratio_vs_s1(sim::Strategy s) const;
  std::optional<double> bytes_ratio_vs_s1(sim::Strategy s) const;

  std::string to_csv() const;
  std::string to_text() const;  // human-readable comparison incl. reference block
};

}  // namespace mmint::strategy
