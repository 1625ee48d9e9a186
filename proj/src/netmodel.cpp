// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#include "mmint/netmodel.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mmint::net {

using nlohmann::json;

std::string_view to_string(HostRole role) {
  switch (role) {
    case HostRole::Generator: return "generator";
    case HostRole::Collector: return "collector";
    case HostRole::Traffic: return "traffic";
  }
  return "?";
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << "; ";
    os << parts[i];
  }
  return os.str();
}

std::optional<HostRole> parse_role(const std::string& s) {
  if (s == "generator") return HostRole::Generator;
  if (s == "collector") return HostRole::Collector;
  if (s == "traffic") return HostRole::Traffic;
  return std::nullopt;
}

}  // namespace

TopologyError::TopologyError(std::vector<std::string> diagnostics)
    : std::runtime_error("topology error: " + join(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

int TopologySpec::switch_index(std::string_view name) const {
  for (std::size_t i = 0; i < switches.size(); ++i)
    if (switches[i].name == name) return static_cast<int>(i);
  return -1;
}

const SwitchSpec& TopologySpec::switch_at(std::string_view name) const {
  const int i = switch_index(name);
  if (i < 0) throw std::out_of_range("unknown switch " + std::string(name));
  return switches[static_cast<std::size_t>(i)];
}

bool TopologySpec::has_collector(std::string_view switch_name) const {
  for (const auto& h : hosts)
    if (h.attached_switch == switch_name && h.role == HostRole::Collector) return true;
  return false;
}

std::vector<std::string> validate(const TopologySpec& spec, std::vector<std::string>* warnings) {
  std::vector<std::string> errors;
  std::set<std::string> names;
  for (std::size_t i = 0; i < spec.switches.size(); ++i) {
    const auto& sw = spec.switches[i];
    const std::string at = "switches[" + std::to_string(i) + "]";
    if (sw.name.empty()) errors.push_back(at + ".name: empty");
    if (!names.insert(sw.name).second) errors.push_back(at + ".name: duplicate switch " + sw.name);
    if (sw.ports < 1) errors.push_back(at + ".ports: must be >= 1, got " + std::to_string(sw.ports));
    if (sw.nq < 1) errors.push_back(at + ".nq: must be >= 1, got " + std::to_string(sw.nq));
    if (sw.nq > kQueuesPerPortWarnLimit && warnings)
      warnings->push_back(at + ".nq: " + std::to_string(sw.nq) + " exceeds the usual device ceiling of " +
                          std::to_string(kQueuesPerPortWarnLimit) + " logical queues per port");
    if (static_cast<int>(sw.queue_weights.size()) != sw.nq)
      errors.push_back(at + ".queue_weights: expected " + std::to_string(sw.nq) + " entries, got " +
                       std::to_string(sw.queue_weights.size()));
    for (std::size_t q = 0; q < sw.queue_weights.size(); ++q)
      if (sw.queue_weights[q] == 0)
        errors.push_back(at + ".queue_weights[" + std::to_string(q) + "]: must be positive");
    if (sw.queue_capacity < 1)
      errors.push_back(at + ".queue_capacity: must be >= 1, got " + std::to_string(sw.queue_capacity));
  }

  std::set<std::pair<std::string, int>> used_ports;
  for (std::size_t i = 0; i < spec.links.size(); ++i) {
    const auto& l = spec.links[i];
    const std::string at = "links[" + std::to_string(i) + "]";
    for (const auto& [name, port, field] :
         {std::tuple{l.a, l.a_port, std::string(".a")}, std::tuple{l.b, l.b_port, std::string(".b")}}) {
      const int si = spec.switch_index(name);
      if (si < 0) {
        errors.push_back(at + field + ": unknown switch " + name);
        continue;
      }
      const auto& sw = spec.switches[static_cast<std::size_t>(si)];
      if (port < 1 || port >= sw.ports)
        errors.push_back(at + field + "_port: port " + std::to_string(port) + " out of range for switch " +
                         name + " (ports 1.." + std::to_string(sw.ports - 1) + " usable; 0 is the host port)");
      else if (!used_ports.insert({name, port}).second)
        errors.push_back(at + field + "_port: port " + std::to_string(port) + " on switch " + name +
                         " used by more than one link");
    }
    if (l.a == l.b) errors.push_back(at + ": self-link on switch " + l.a);
    if (l.bandwidth_bps == 0) errors.push_back(at + ".bandwidth_bps: must be positive");
  }

  for (std::size_t i = 0; i < spec.hosts.size(); ++i) {
    const auto& h = spec.hosts[i];
    const std::string at = "hosts[" + std::to_string(i) + "]";
    if (spec.switch_index(h.attached_switch) < 0)
      errors.push_back(at + ".switch: unknown switch " + h.attached_switch);
  }

  if (spec.root.empty())
    errors.push_back("root: missing");
  else if (spec.switch_index(spec.root) < 0)
    errors.push_back("root: unknown switch " + spec.root);

  return errors;
}

namespace {

struct RawLink {
  std::string a, b;
  std::optional<int> a_port, b_port;
  std::uint64_t bandwidth_bps, delay_us;
};

// Assigns ports for links that omit them: per switch, neighbors in ascending
// name order take the lowest free port starting at 1.  Explicit ports are
// reserved first so mixed documents stay consistent.
void assign_link_ports(const TopologySpec& spec, std::vector<RawLink>& raw,
                       std::vector<LinkSpec>& out, std::vector<std::string>& errors) {
  std::map<std::string, std::set<int>> taken;
  for (const auto& l : raw) {
    if (l.a_port) taken[l.a].insert(*l.a_port);
    if (l.b_port) taken[l.b].insert(*l.b_port);
  }
  auto next_free = [&](const std::string& sw) {
    int p = 1;
    while (taken[sw].count(p)) ++p;
    taken[sw].insert(p);
    return p;
  };
  // Deterministic order: by (switch name, neighbor name) per endpoint.
  std::vector<std::pair<std::string, std::size_t>> pending;  // (sort key, raw index * 2 + side)
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i].a_port) pending.push_back({raw[i].a + "\x01" + raw[i].b, i * 2});
    if (!raw[i].b_port) pending.push_back({raw[i].b + "\x01" + raw[i].a, i * 2 + 1});
  }
  std::sort(pending.begin(), pending.end());
  for (const auto& [key, slot] : pending) {
    RawLink& l = raw[slot / 2];
    if (slot % 2 == 0)
      l.a_port = next_free(l.a);
    else
      l.b_port = next_free(l.b);
  }
  for (const auto& l : raw) {
    if (spec.switch_index(l.a) < 0) errors.push_back("links: unknown switch " + l.a);
    if (spec.switch_index(l.b) < 0) errors.push_back("links: unknown switch " + l.b);
    out.push_back({l.a, l.a_port.value_or(0), l.b, l.b_port.value_or(0), l.bandwidth_bps, l.delay_us});
  }
}

}  // namespace

TopologySpec load_topology(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw TopologyError({std::string("document is not valid JSON: ") + e.what()});
  }

  std::vector<std::string> errors;
  TopologySpec spec;

  const json defaults = doc.value("defaults", json::object());
  const int def_nq = defaults.value("nq", kDefaultQueuesPerPort);
  const int def_cap = defaults.value("queue_capacity", kDefaultQueueCapacity);
  const std::uint64_t def_bw = defaults.value("bandwidth_bps", kDefaultBandwidthBps);
  const std::uint64_t def_delay = defaults.value("delay_us", kDefaultDelayUs);

  if (!doc.contains("switches") || !doc["switches"].is_array() || doc["switches"].empty())
    errors.push_back("switches: missing or empty");
  else {
    for (std::size_t i = 0; i < doc["switches"].size(); ++i) {
      const json& js = doc["switches"][i];
      SwitchSpec sw;
      sw.name = js.value("name", std::string{});
      if (sw.name.empty()) errors.push_back("switches[" + std::to_string(i) + "].name: missing");
      sw.ports = js.value("ports", 0);  // 0 = derive from links below
      sw.nq = js.value("nq", def_nq);
      sw.queue_capacity = js.value("queue_capacity", def_cap);
      if (js.contains("queue_weights"))
        sw.queue_weights = js["queue_weights"].get<std::vector<std::uint32_t>>();
      else if (defaults.contains("queue_weights"))
        sw.queue_weights = defaults["queue_weights"].get<std::vector<std::uint32_t>>();
      if (sw.queue_weights.empty() && sw.nq >= 1)
        sw.queue_weights.assign(static_cast<std::size_t>(sw.nq), 1);
      spec.switches.push_back(std::move(sw));
    }
  }
  std::sort(spec.switches.begin(), spec.switches.end(),
            [](const SwitchSpec& x, const SwitchSpec& y) { return x.name < y.name; });

  std::vector<RawLink> raw;
  if (doc.contains("links")) {
    for (std::size_t i = 0; i < doc["links"].size(); ++i) {
      const json& jl = doc["links"][i];
      RawLink l;
      l.a = jl.value("a", std::string{});
      l.b = jl.value("b", std::string{});
      if (l.a.empty() || l.b.empty())
        errors.push_back("links[" + std::to_string(i) + "]: endpoints a and b are required");
      if (jl.contains("a_port")) l.a_port = jl["a_port"].get<int>();
      if (jl.contains("b_port")) l.b_port = jl["b_port"].get<int>();
      l.bandwidth_bps = jl.value("bandwidth_bps", def_bw);
      l.delay_us = jl.value("delay_us", def_delay);
      raw.push_back(std::move(l));
    }
  }
  if (errors.empty()) assign_link_ports(spec, raw, spec.links, errors);

  // Derive port counts where the document left them out.
  for (auto& sw : spec.switches) {
    int max_port = 0;
    for (const auto& l : spec.links) {
      if (l.a == sw.name) max_port = std::max(max_port, l.a_port);
      if (l.b == sw.name) max_port = std::max(max_port, l.b_port);
    }
    if (sw.ports <= 0) sw.ports = max_port + 1;
  }

  if (doc.contains("hosts")) {
    for (std::size_t i = 0; i < doc["hosts"].size(); ++i) {
      const json& jh = doc["hosts"][i];
      HostSpec h;
      h.name = jh.value("name", std::string{});
      h.attached_switch = jh.value("switch", std::string{});
      const std::string role = jh.value("role", std::string("traffic"));
      const auto parsed = parse_role(role);
      if (!parsed)
        errors.push_back("hosts[" + std::to_string(i) + "].role: unknown role '" + role +
                         "' (expected generator|collector|traffic)");
      else
        h.role = *parsed;
      spec.hosts.push_back(std::move(h));
    }
  }

  spec.root = doc.value("root", std::string{});

  auto more = validate(spec);
  errors.insert(errors.end(), more.begin(), more.end());
  if (!errors.empty()) throw TopologyError(std::move(errors));
  return spec;
}

TopologySpec load_topology_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError({"cannot open topology file " + path.string()});
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_topology(ss.str());
}

std::size_t Tree::edge_count() const {
  std::size_t n = 0;
  for (const auto& [sw, kids] : children) n += kids.size();
  return n;
}

std::vector<std::string> Tree::path(const std::string& from, const std::string& to) const {
  auto chain_to_root = [&](std::string sw) {
    std::vector<std::string> chain{sw};
    while (true) {
      const auto it = parent.find(sw);
      if (it == parent.end()) break;
      sw = it->second;
      chain.push_back(sw);
    }
    return chain;
  };
  const std::vector<std::string> up = chain_to_root(from);
  const std::vector<std::string> down = chain_to_root(to);
  std::set<std::string> up_set(up.begin(), up.end());
  // Lowest common ancestor = first entry of `down` that appears on `up`.
  std::size_t meet = 0;
  while (meet < down.size() && !up_set.count(down[meet])) ++meet;
  if (meet == down.size()) throw std::logic_error("switches are not in the same tree");
  std::vector<std::string> out;
  for (const auto& sw : up) {
    out.push_back(sw);
    if (sw == down[meet]) break;
  }
  for (std::size_t i = meet; i-- > 0;) out.push_back(down[i]);
  return out;
}

Tree to_tree(const TopologySpec& spec, const std::string& root) {
  if (spec.switch_index(root) < 0) throw TopologyError({"tree root: unknown switch " + root});

  // adjacency: switch -> sorted (neighbor, local port)
  std::map<std::string, std::map<std::string, int>> adj;
  for (const auto& sw : spec.switches) adj[sw.name];
  for (const auto& l : spec.links) {
    adj[l.a][l.b] = l.a_port;
    adj[l.b][l.a] = l.b_port;
  }

  Tree tree;
  tree.root = root;
  std::set<std::string> visited{root};
  std::deque<std::string> frontier{root};
  while (!frontier.empty()) {
    const std::string sw = frontier.front();
    frontier.pop_front();
    tree.children[sw];
    for (const auto& [nbr, port] : adj[sw]) {  // ascending neighbor name
      if (visited.count(nbr)) continue;
      visited.insert(nbr);
      tree.children[sw].push_back(nbr);
      tree.child_ports[sw].push_back(port);
      tree.parent[nbr] = sw;
      tree.parent_port[nbr] = adj[nbr][sw];
      frontier.push_back(nbr);
    }
  }

  if (visited.size() != spec.switches.size()) {
    std::vector<std::string> unreachable;
    for (const auto& sw : spec.switches)
      if (!visited.count(sw.name)) unreachable.push_back("unreachable from root " + root + ": " + sw.name);
    throw TopologyError(std::move(unreachable));
  }

  for (const auto& sw : spec.switches)
    if (tree.children[sw.name].empty()) tree.leaves.push_back(sw.name);
  return tree;
}

}  // namespace mmint::net
