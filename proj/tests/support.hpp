// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mmint/netmodel.hpp"
#include "mmint/simcore.hpp"

namespace mmint::test {

inline std::filesystem::path source_dir() { return MMINT_SOURCE_DIR; }
inline std::filesystem::path data_file(const std::string& name) {
  return source_dir() / "data" / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Random connected topology whose edges form a tree plus up to `extra_edges`
// chords.  Every switch gets a host port 0, the root a generator+collector,
// and (so receipts are observable) every switch a collector.
inline net::TopologySpec random_topology(std::mt19937_64& rng, int num_switches, int nq,
                                         int extra_edges = 0) {
  net::TopologySpec spec;
  auto name = [](int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "R%02d", i);
    return std::string(buf);
  };

  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < num_switches; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    edges.push_back({pick(rng), i});
  }
  for (int e = 0; e < extra_edges && num_switches > 2; ++e) {
    std::uniform_int_distribution<int> pick(0, num_switches - 1);
    const int a = pick(rng);
    const int b = pick(rng);
    if (a == b) continue;
    bool dup = false;
    for (const auto& [x, y] : edges)
      dup = dup || (x == std::min(a, b) && y == std::max(a, b)) ||
            (x == std::max(a, b) && y == std::min(a, b));
    if (!dup) edges.push_back({a, b});
  }

  std::vector<int> degree(static_cast<std::size_t>(num_switches), 0);
  for (const auto& [a, b] : edges) {
    degree[static_cast<std::size_t>(a)]++;
    degree[static_cast<std::size_t>(b)]++;
  }
  for (int i = 0; i < num_switches; ++i) {
    net::SwitchSpec sw;
    sw.name = name(i);
    sw.ports = degree[static_cast<std::size_t>(i)] + 1;
    sw.nq = nq;
    sw.queue_capacity = 64;
    sw.queue_weights.assign(static_cast<std::size_t>(nq), 1);
    spec.switches.push_back(std::move(sw));
  }

  std::vector<int> next_port(static_cast<std::size_t>(num_switches), 1);
  for (const auto& [a, b] : edges) {
    net::LinkSpec l;
    l.a = name(a);
    l.a_port = next_port[static_cast<std::size_t>(a)]++;
    l.b = name(b);
    l.b_port = next_port[static_cast<std::size_t>(b)]++;
    spec.links.push_back(std::move(l));
  }

  spec.root = name(0);
  spec.hosts.push_back({"gen", spec.root, net::HostRole::Generator});
  for (int i = 0; i < num_switches; ++i)
    spec.hosts.push_back({"col" + std::to_string(i), name(i), net::HostRole::Collector});
  return spec;
}

// Replays the event stream per queue and checks that, at every step and at
// the end, enqueued == dequeued + dropped + resident and the final counters
// match the trace's.  Returns the first violated condition, empty when all
// hold.
inline std::string verify_conservation(const sim::SimulationTrace& trace) {
  std::map<std::tuple<int, int, int>, sim::QueueCounters> replay;
  for (const auto& ev : trace.events) {
    if (ev.sw < 0 || ev.port < 0 || ev.queue < 0) continue;
    auto& c = replay[{ev.sw, ev.port, ev.queue}];
    switch (ev.action) {
      case sim::Action::Enqueue:
        c.enqueued++;
        c.resident++;
        break;
      case sim::Action::DropQueueFull:
        c.enqueued++;
        c.dropped++;
        break;
      case sim::Action::Dequeue:
        if (c.resident == 0) return "dequeue from an empty queue in the event stream";
        c.dequeued++;
        c.resident--;
        break;
      default:
        break;
    }
    if (c.enqueued != c.dequeued + c.dropped + c.resident)
      return "enqueued != dequeued + dropped + resident during replay";
  }
  for (const auto& [key, counters] : trace.counters) {
    const auto it = replay.find(key);
    const sim::QueueCounters got = it == replay.end() ? sim::QueueCounters{} : it->second;
    if (counters.enqueued != got.enqueued || counters.dequeued != got.dequeued ||
        counters.dropped != got.dropped || counters.resident != got.resident)
      return "final counters disagree with the replayed event stream";
    if (counters.enqueued != counters.dequeued + counters.dropped + counters.resident)
      return "final counters break conservation";
  }
  return {};
}

}  // namespace mmint::test
