// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#include "mmint/mpolka.hpp"

#include <algorithm>
#include <stdexcept>

namespace mmint::mpolka {

gf2::Poly TState::to_poly() const {
  gf2::Poly p;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) p.set_bit(static_cast<int>(i), true);
  return p;
}

TState TState::from_poly(const gf2::Poly& p, int width) {
  TState s;
  s.bits.resize(static_cast<std::size_t>(width), false);
  for (int i = 0; i < width; ++i) s.bits[static_cast<std::size_t>(i)] = p.bit(i);
  return s;
}

NodeIdMap assign_node_ids(const net::TopologySpec& spec) {
  NodeIdMap out;
  std::vector<gf2::Poly> used;
  // spec.switches is sorted by name, which fixes the assignment order.
  for (const auto& sw : spec.switches) {
    const int min_degree = std::max(sw.ports, 2);  // highest port index + 1, at least 2
    gf2::Poly pick;
    for (int degree = min_degree; pick.is_zero(); ++degree) {
      const std::size_t available = gf2::count_irreducibles(degree);
      const auto pool = gf2::enumerate_irreducibles(degree, available);
      for (const auto& cand : pool) {
        if (std::find(used.begin(), used.end(), cand) == used.end()) {
          pick = cand;
          break;
        }
      }
    }
    used.push_back(pick);
    out[sw.name] = NodeId{sw.name, pick};
  }
  return out;
}

std::vector<int> active_ports(const TState& state) {
  std::vector<int> out;
  for (std::size_t i = 1; i < state.bits.size(); ++i)
    if (state.bits[i]) out.push_back(static_cast<int>(i));
  return out;
}

std::map<std::string, TState> tree_t_states(const net::Tree& tree, const NodeIdMap& ids) {
  std::map<std::string, TState> out;
  for (const auto& [sw, kids] : tree.children) {
    const auto it = ids.find(sw);
    if (it == ids.end()) throw std::invalid_argument("no nodeID assigned to switch " + sw);
    TState s;
    s.bits.resize(static_cast<std::size_t>(it->second.width()), false);
    const auto pit = tree.child_ports.find(sw);
    if (pit != tree.child_ports.end()) {
      for (int port : pit->second) {
        if (port <= 0 || port >= it->second.width())
          throw std::invalid_argument("tree port " + std::to_string(port) + " does not fit nodeID of " + sw);
        s.bits[static_cast<std::size_t>(port)] = true;
      }
    }
    out[sw] = std::move(s);
  }
  return out;
}

RouteId encode_tree(const net::Tree& tree, const NodeIdMap& ids,
                    const std::map<std::string, TState>& states) {
  std::vector<std::pair<gf2::Poly, gf2::Poly>> systems;
  int total_degree = 0;
  for (const auto& [sw, state] : states) {
    const auto it = ids.find(sw);
    if (it == ids.end()) throw std::invalid_argument("no nodeID assigned to switch " + sw);
    if (static_cast<int>(state.bits.size()) != it->second.width())
      throw std::invalid_argument("t_state width mismatch for switch " + sw);
    systems.emplace_back(it->second.value, state.to_poly());
    total_degree += it->second.width();
  }
  if (total_degree > kRouteIdBits)
    throw std::invalid_argument(
        "routeID would need " + std::to_string(total_degree) + " bits but the wire field holds " +
        std::to_string(kRouteIdBits) + "; use fewer switches or lower-degree nodeIDs");
  (void)tree;
  RouteId route{gf2::crt_combine(systems)};
  return route;
}

TState compute_t_state(const RouteId& route, const NodeId& node) {
  return TState::from_poly(gf2::mod(route.value, node.value), node.width());
}

}  // namespace mmint::mpolka
