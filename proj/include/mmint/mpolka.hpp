// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "mmint/gf2poly.hpp"
#include "mmint/netmodel.hpp"

namespace mmint::mpolka {

// Wire width of a routeID; matches the 32-byte field in the probe header.
inline constexpr int kRouteIdBits = 256;

// Per-switch residue modulus.  Irreducible, with degree at least
// (highest port index) + 1 so every port bit fits in a remainder.
struct NodeId {
  std::string switch_name;
  gf2::Poly value;

  int width() const { return *value.degree(); }
  friend bool operator==(const NodeId&, const NodeId&) = default;
};

// Transmission state of a switch's output ports: bit p set means port p
// transmits.  Fixed length equal to the nodeID degree; bit 0 (the host/CPU
// port) is reserved and never set by tree encoding.
struct TState {
  std::vector<bool> bits;

  gf2::Poly to_poly() const;
  static TState from_poly(const gf2::Poly& p, int width);
  friend bool operator==(const TState&, const TState&) = default;
};

struct RouteId {
  gf2::Poly value;
  friend bool operator==(const RouteId&, const RouteId&) = default;
};

using NodeIdMap = std::map<std::string, NodeId>;

// Deterministic controller-side assignment: switches in ascending name order
// each take the smallest unused irreducible whose degree admits their highest
// port index (escalating to the next degree when a pool is exhausted, which
// keeps nodeIDs distinct and therefore pairwise coprime).
NodeIdMap assign_node_ids(const net::TopologySpec& spec);

// Ascending indices of transmitting ports; excludes the reserved port 0.
// The first element is the port that carries the telemetry metadata.
std::vector<int> active_ports(const TState& state);

// Builds the per-switch transmission states of a forwarding tree: exactly the
// tree-edge ports toward children are set; leaves get the all-zero state.
std::map<std::string, TState> tree_t_states(const net::Tree& tree, const NodeIdMap& ids);

// CRT construction of the routeID: the returned R satisfies
// R mod nodeID(s) = state(s) for every switch in `states`.  Throws when the
// result would not fit the 256-bit wire field.
RouteId encode_tree(const net::Tree& tree, const NodeIdMap& ids,
                    const std::map<std::string, TState>& states);

// Remainder of the routeID by the switch's nodeID, zero-padded to the
// nodeID degree.
TState compute_t_state(const RouteId& route, const NodeId& node);

}  // namespace mmint::mpolka
