// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mmint/mpolka.hpp"
#include "support.hpp"

using namespace mmint;
using gf2::Poly;

namespace {

net::TopologySpec single_switch_spec(int ports) {
  net::TopologySpec spec;
  net::SwitchSpec sw;
  sw.name = "S";
  sw.ports = ports;
  sw.nq = 2;
  sw.queue_weights = {1, 1};
  spec.switches.push_back(sw);
  spec.root = "S";
  return spec;
}

}  // namespace

TEST_CASE("a switch with ports 0..2 gets the degree-3 irreducible 1011") {
  const auto ids = mpolka::assign_node_ids(single_switch_spec(3));
  CHECK(ids.at("S").value == Poly(0b1011));
  CHECK(ids.at("S").width() == 3);
}

TEST_CASE("paper topology: 7 distinct pairwise-coprime nodeIDs, stable across runs") {
  const auto spec = net::load_topology_file(test::data_file("paper_topology.json"));
  const auto ids = mpolka::assign_node_ids(spec);
  REQUIRE(ids.size() == 7);

  CHECK(ids.at("SW1").value == Poly(0b1011));
  CHECK(ids.at("SW2").value == Poly(0b1101));
  CHECK(ids.at("SW3").value == Poly(0b111));
  CHECK(ids.at("SW4").value == Poly(0b10011));
  CHECK(ids.at("SW5").value == Poly(0b11001));
  CHECK(ids.at("SW6").value == Poly(0b11111));
  CHECK(ids.at("SW7").value == Poly(0b100101));

  for (auto it = ids.begin(); it != ids.end(); ++it)
    for (auto jt = std::next(it); jt != ids.end(); ++jt)
      CHECK(gcd(it->second.value, jt->second.value).is_one());

  CHECK(mpolka::assign_node_ids(spec) == ids);

  // Every nodeID admits the switch's highest port index in a remainder.
  for (const auto& sw : spec.switches) CHECK(ids.at(sw.name).width() >= sw.ports);
}

TEST_CASE("active_ports reads ascending bit positions, excluding port 0") {
  mpolka::TState s3 = mpolka::TState::from_poly(Poly::from_binary("00110100"), 8);
  CHECK(mpolka::active_ports(s3) == std::vector<int>{2, 4, 5});

  mpolka::TState s1 = mpolka::TState::from_poly(Poly::from_binary("110"), 3);
  CHECK(mpolka::active_ports(s1) == std::vector<int>{1, 2});

  mpolka::TState zero = mpolka::TState::from_poly(Poly{}, 4);
  CHECK(mpolka::active_ports(zero).empty());

  // Bit 0 is the reserved host port and never forwards.
  mpolka::TState host = mpolka::TState::from_poly(Poly(0b1), 3);
  CHECK(mpolka::active_ports(host).empty());
}

TEST_CASE("single-residue encoding reduces to the state itself") {
  const auto spec = single_switch_spec(3);
  const auto ids = mpolka::assign_node_ids(spec);
  const auto tree = net::to_tree(spec, "S");
  std::map<std::string, mpolka::TState> states;
  states["S"] = mpolka::TState::from_poly(Poly(0b010), ids.at("S").width());
  const auto route = mpolka::encode_tree(tree, ids, states);
  CHECK(route.value == Poly(0b010));
  CHECK(mpolka::compute_t_state(route, ids.at("S")) == states.at("S"));
}

TEST_CASE("route 0 decodes to the all-zero state everywhere") {
  const auto spec = net::load_topology_file(test::data_file("paper_topology.json"));
  const auto ids = mpolka::assign_node_ids(spec);
  for (const auto& [name, id] : ids) {
    const auto state = mpolka::compute_t_state(mpolka::RouteId{}, id);
    CHECK(mpolka::active_ports(state).empty());
    CHECK(static_cast<int>(state.bits.size()) == id.width());
  }
}

TEST_CASE("paper forward tree round-trips through the routeID at every switch") {
  const auto spec = net::load_topology_file(test::data_file("paper_topology.json"));
  const auto ids = mpolka::assign_node_ids(spec);
  const auto tree = net::to_tree(spec, "SW1");
  const auto states = mpolka::tree_t_states(tree, ids);

  CHECK(states.at("SW1").to_poly() == Poly(0b110));
  CHECK(states.at("SW2").to_poly() == Poly(0b100));
  CHECK(states.at("SW6").to_poly() == Poly(0b1100));
  CHECK(states.at("SW3").to_poly().is_zero());

  const auto route = mpolka::encode_tree(tree, ids, states);
  for (const auto& [name, state] : states)
    CHECK(mpolka::compute_t_state(route, ids.at(name)) == state);
}

TEST_CASE("remainder degree stays below the nodeID degree on random routes") {
  const auto spec = net::load_topology_file(test::data_file("paper_topology.json"));
  const auto ids = mpolka::assign_node_ids(spec);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    gf2::Poly route;
    for (int b = 0; b < 64; ++b)
      if (rng() & 1) route.set_bit(b, true);
    for (const auto& [name, id] : ids) {
      const auto state = mpolka::compute_t_state(mpolka::RouteId{route}, id);
      CHECK(static_cast<int>(state.bits.size()) == id.width());
      const auto rem = state.to_poly();
      if (!rem.is_zero()) CHECK(*rem.degree() < id.width());
    }
  }
}

TEST_CASE("different states produce different routeIDs; changes stay local") {
  const auto spec = net::load_topology_file(test::data_file("paper_topology.json"));
  const auto ids = mpolka::assign_node_ids(spec);
  const auto tree = net::to_tree(spec, "SW1");
  auto states = mpolka::tree_t_states(tree, ids);
  const auto route_a = mpolka::encode_tree(tree, ids, states);

  auto altered = states;
  altered.at("SW5").bits[1] = true;  // add a port at one switch only
  const auto route_b = mpolka::encode_tree(tree, ids, altered);
  CHECK(route_a != route_b);

  for (const auto& [name, id] : ids) {
    const auto a = mpolka::compute_t_state(route_a, id);
    const auto b = mpolka::compute_t_state(route_b, id);
    if (name == "SW5")
      CHECK(a != b);
    else
      CHECK(a == b);
  }
}

TEST_CASE("random topologies and trees round trip (sampled)") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 19);
    const auto spec = test::random_topology(rng, n, 2, static_cast<int>(rng() % 3));
    const auto tree = net::to_tree(spec, spec.root);
    const auto ids = mpolka::assign_node_ids(spec);
    const auto states = mpolka::tree_t_states(tree, ids);
    const auto route = mpolka::encode_tree(tree, ids, states);
    for (const auto& [name, state] : states)
      CHECK(mpolka::compute_t_state(route, ids.at(name)) == state);
  }
}

TEST_CASE("routeID wider than the wire field is rejected with advice") {
  net::TopologySpec spec;
  for (int i = 0; i < 30; ++i) {
    net::SwitchSpec sw;
    sw.name = "S" + std::string(1, char('A' + i / 10)) + std::string(1, char('0' + i % 10));
    sw.ports = 10;  // forces degree >= 10 nodeIDs; 30 of them exceed 256 bits
    sw.nq = 1;
    sw.queue_weights = {1};
    spec.switches.push_back(sw);
  }
  std::sort(spec.switches.begin(), spec.switches.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  spec.root = spec.switches.front().name;
  const auto ids = mpolka::assign_node_ids(spec);

  net::Tree tree;  // states alone drive the width check
  tree.root = spec.root;
  std::map<std::string, mpolka::TState> states;
  for (const auto& sw : spec.switches)
    states[sw.name] = mpolka::TState::from_poly(Poly{}, ids.at(sw.name).width());
  try {
    mpolka::encode_tree(tree, ids, states);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("lower-degree") != std::string::npos);
  }
}
