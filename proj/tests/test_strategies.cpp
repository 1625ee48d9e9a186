// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "mmint/strategies.hpp"
#include "support.hpp"

using namespace mmint;
using sim::PacketKind;
using sim::Strategy;

namespace {

struct PaperSetup {
  net::TopologySpec spec;
  net::Tree tree;
  mpolka::NodeIdMap ids;
};

PaperSetup paper_setup() {
  PaperSetup s;
  s.spec = net::load_topology_file(test::data_file("paper_topology.json"));
  s.tree = net::to_tree(s.spec, "SW1");
  s.ids = mpolka::assign_node_ids(s.spec);
  return s;
}

sim::SimulationTrace run_plan(const PaperSetup& s, sim::ProbePlan plan) {
  sim::Workload w;
  w.plan = std::move(plan);
  w.schedule = {1'000, 10'000, 1};
  return sim::run(s.spec, s.tree, s.ids, w, 1, 100'000);
}

}  // namespace

TEST_CASE("S1 plan: lf*nq*2 launches, half forward half reverse") {
  const auto s = paper_setup();
  const auto plan = strategy::plan_s1(s.tree, 2);
  CHECK(plan.launches.size() == 12);  // 3 leaves x 2 queues x 2 directions

  std::size_t forward = 0, reverse = 0;
  for (const auto& l : plan.launches) {
    CHECK(l.format == PacketKind::ProbeS1);
    (l.reverse ? reverse : forward)++;
    if (!l.reverse) CHECK(l.origin == "SW1");
  }
  CHECK(forward == 6);
  CHECK(reverse == 6);

  std::mt19937_64 rng(1);
  const auto chain = test::random_topology(rng, 2, 1);  // one leaf
  const auto tiny = strategy::plan_s1(net::to_tree(chain, chain.root), 1);
  CHECK(tiny.launches.size() == 2);
}

TEST_CASE("S1 launch count matches lf*nq*2 on random trees") {
  std::mt19937_64 rng(41);
  const int nqs[] = {1, 2, 4, 8};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 19);
    const int nq = nqs[rng() % 4];
    const auto spec = test::random_topology(rng, n, nq);
    const auto tree = net::to_tree(spec, spec.root);
    const auto plan = strategy::plan_s1(tree, nq);
    CHECK(plan.launches.size() == tree.leaves.size() * static_cast<std::size_t>(nq) * 2);
  }
}

TEST_CASE("S2 plan: one forward multicast launch plus per-leaf per-queue reverse") {
  const auto s = paper_setup();
  const auto plan = strategy::plan_s2(s.tree, 2, s.ids);
  REQUIRE(plan.launches.size() == 7);
  CHECK(plan.launches[0].format == PacketKind::ProbeS2);
  CHECK(!plan.launches[0].reverse);
  CHECK(plan.launches[0].origin == "SW1");
  for (std::size_t i = 1; i < plan.launches.size(); ++i) {
    CHECK(plan.launches[i].reverse);
    CHECK(plan.launches[i].format == PacketKind::ProbeS1);
  }
}

TEST_CASE("S3 plan: exactly one forward launch, no reverse, no queue pinning") {
  const auto s = paper_setup();
  const auto plan = strategy::plan_s3(s.tree, s.ids);
  REQUIRE(plan.launches.size() == 1);
  CHECK(plan.launches[0].format == PacketKind::ProbeS3);
  CHECK(!plan.launches[0].reverse);
  CHECK(plan.launches[0].target_queue == -1);
}

TEST_CASE("receipt counts on the bundled topology: 12 / 12 / 3") {
  const auto s = paper_setup();
  CHECK(run_plan(s, strategy::plan_s1(s.tree, 2)).receipts.size() == 12);
  CHECK(run_plan(s, strategy::plan_s2(s.tree, 2, s.ids)).receipts.size() == 12);
  CHECK(run_plan(s, strategy::plan_s3(s.tree, s.ids)).receipts.size() == 3);
}

TEST_CASE("receipt formulas hold on random trees") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 10);
    const int nq = 1 + static_cast<int>(rng() % 3);
    const auto spec = test::random_topology(rng, n, nq);
    const auto tree = net::to_tree(spec, spec.root);
    const auto ids = mpolka::assign_node_ids(spec);
    const auto lf = tree.leaves.size();

    sim::Workload w;
    w.schedule = {0, 10'000, 1};

    w.plan = strategy::plan_s1(tree, nq);
    auto t1 = sim::run(spec, tree, ids, w, 1, 300'000);
    CHECK(t1.receipts.size() == lf * static_cast<std::size_t>(nq) * 2);

    w.plan = strategy::plan_s2(tree, nq, ids);
    auto t2 = sim::run(spec, tree, ids, w, 1, 300'000);
    CHECK(t2.receipts.size() == lf * static_cast<std::size_t>(nq) * 2);

    // Forward receipts per leaf = nq.
    std::map<int, std::size_t> fwd_receipts;
    for (const auto& r : t2.receipts)
      if (r.format == PacketKind::ProbeS2) fwd_receipts[r.collector_switch]++;
    CHECK(fwd_receipts.size() == lf);
    for (const auto& [sw, count] : fwd_receipts) CHECK(count == static_cast<std::size_t>(nq));

    w.plan = strategy::plan_s3(tree, ids);
    auto t3 = sim::run(spec, tree, ids, w, 1, 300'000);
    CHECK(t3.receipts.size() == lf);
  }
}

TEST_CASE("duplicate counts on the bundled topology follow the traversal-set convention") {
  const auto s = paper_setup();

  const auto d1 = strategy::count_duplicates(run_plan(s, strategy::plan_s1(s.tree, 2)));
  CHECK(d1.total == 8);
  CHECK(d1.forward == 4);
  CHECK(d1.reverse == 4);
  CHECK(d1.by_link.at({"SW1", "SW2"}) == 2);
  CHECK(d1.by_link.at({"SW2", "SW6"}) == 2);
  CHECK(d1.by_link.count({"SW1", "SW5"}) == 0);

  const auto d2 = strategy::count_duplicates(run_plan(s, strategy::plan_s2(s.tree, 2, s.ids)));
  CHECK(d2.total == 4);
  CHECK(d2.forward == 0);
  CHECK(d2.reverse == 4);

  const auto d3 = strategy::count_duplicates(run_plan(s, strategy::plan_s3(s.tree, s.ids)));
  CHECK(d3.total == 0);
}

TEST_CASE("S3 never duplicates and S1 >= S2 >= S3 on random trees") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 12);
    const int nq = 1 + static_cast<int>(rng() % 2);
    const auto spec = test::random_topology(rng, n, nq);
    const auto tree = net::to_tree(spec, spec.root);
    const auto ids = mpolka::assign_node_ids(spec);

    sim::Workload w;
    w.schedule = {0, 10'000, 1};
    w.plan = strategy::plan_s1(tree, nq);
    const auto d1 = strategy::count_duplicates(sim::run(spec, tree, ids, w, 1, 400'000));
    w.plan = strategy::plan_s2(tree, nq, ids);
    const auto d2 = strategy::count_duplicates(sim::run(spec, tree, ids, w, 1, 400'000));
    w.plan = strategy::plan_s3(tree, ids);
    const auto d3 = strategy::count_duplicates(sim::run(spec, tree, ids, w, 1, 400'000));

    CHECK(d3.total == 0);
    CHECK(d1.total >= d2.total);
    CHECK(d2.total >= d3.total);
  }
}

TEST_CASE("byte totals on the bundled topology under the documented accounting") {
  const auto s = paper_setup();
  const auto b1 = strategy::account_bytes(run_plan(s, strategy::plan_s1(s.tree, 2)));
  const auto b2 = strategy::account_bytes(run_plan(s, strategy::plan_s2(s.tree, 2, s.ids)));
  const auto b3 = strategy::account_bytes(run_plan(s, strategy::plan_s3(s.tree, s.ids)));

  CHECK(b3 == 828);
  CHECK(b1 == 1888);
  CHECK(b2 == 1860);
  CHECK(b3 < b2);
  CHECK(b2 <= b1);
  CHECK(static_cast<double>(b1) / static_cast<double>(b3) >= 2.0);

  const auto empty = sim::run(s.spec, s.tree, s.ids, sim::Workload{}, 1, 10'000);
  CHECK(strategy::account_bytes(empty) == 0);
}

TEST_CASE("register memory accounting") {
  const auto s = paper_setup();
  const auto mem = strategy::account_memory(s.spec, Strategy::S3);
  CHECK(mem.at("SW1") == 64);  // 2 monitored ports x 2 queues x 16 bytes
  CHECK(mem.at("SW2") == 64);
  CHECK(mem.at("SW6") == 96);  // 3 monitored ports
  CHECK(mem.at("SW3") == 32);

  CHECK(strategy::register_memory_bytes(2, 2) == 64);
  CHECK(strategy::register_memory_bytes(3, 2) == 96);
  CHECK(strategy::register_memory_bytes(32, 128) == 65536);

  for (const auto s1 : {Strategy::S1, Strategy::S2})
    for (const auto& [name, bytes] : strategy::account_memory(s.spec, s1)) CHECK(bytes == 0);
}

TEST_CASE("wire size law holds for every probe traversal in every strategy") {
  const auto s = paper_setup();
  for (const Strategy st : {Strategy::S1, Strategy::S2, Strategy::S3}) {
    sim::ProbePlan plan = st == Strategy::S1   ? strategy::plan_s1(s.tree, 2)
                          : st == Strategy::S2 ? strategy::plan_s2(s.tree, 2, s.ids)
                                               : strategy::plan_s3(s.tree, s.ids);
    const auto trace = run_plan(s, std::move(plan));
    for (const auto& ev : trace.events) {
      if (ev.action != sim::Action::LinkTx || ev.kind == PacketKind::Data) continue;
      const std::size_t base = ev.kind == PacketKind::ProbeS1   ? 29
                               : ev.kind == PacketKind::ProbeS2 ? 59
                                                                : 58;
      CHECK(static_cast<std::size_t>(ev.size) == base + 16u * ev.slot_count);
    }
  }
}

TEST_CASE("metrics report: ratios, csv shape and reference block") {
  const auto s = paper_setup();
  strategy::MetricsReport report;
  report.rows.push_back(
      strategy::analyze(run_plan(s, strategy::plan_s1(s.tree, 2)), s.spec, 12));
  report.rows.push_back(
      strategy::analyze(run_plan(s, strategy::plan_s2(s.tree, 2, s.ids)), s.spec, 7));
  report.rows.push_back(strategy::analyze(run_plan(s, strategy::plan_s3(s.tree, s.ids)), s.spec, 1));

  const auto ratio = report.receipt_ratio_vs_s1(Strategy::S3);
  REQUIRE(ratio.has_value());
  CHECK(*ratio == doctest::Approx(4.0));
  const auto bytes_ratio = report.bytes_ratio_vs_s1(Strategy::S3);
  REQUIRE(bytes_ratio.has_value());
  CHECK(*bytes_ratio > 2.0);

  const auto csv = report.to_csv();
  CHECK(csv.find("mechanism,pkt_size_min_bytes") == 0);
  CHECK(csv.find("\nS3,") != std::string::npos);
  CHECK(csv.find(",828,") != std::string::npos);

  const auto text = report.to_text();
  CHECK(text.find("published reference results") != std::string::npos);
  CHECK(text.find("2300") != std::string::npos);   // S1 reference total
  CHECK(text.find("814") != std::string::npos);    // S3 reference total
  CHECK(text.find("| 12 |") != std::string::npos); // reference duplicate totals printed alongside
  CHECK(text.find("SW1->SW2") != std::string::npos);

  // Without an S1 row there are no ratios.
  strategy::MetricsReport s3_only;
  s3_only.rows.push_back(report.rows[2]);
  CHECK(!s3_only.receipt_ratio_vs_s1(Strategy::S3).has_value());
}

TEST_CASE("S3 receipts per generation scale with the schedule") {
  const auto s = paper_setup();
  sim::Workload w;
  w.plan = strategy::plan_s3(s.tree, s.ids);
  w.schedule = {0, 10'000, 5};
  const auto trace = sim::run(s.spec, s.tree, s.ids, w, 1, 200'000);
  CHECK(trace.generations == 5);
  CHECK(trace.receipts.size() == 15);
  std::set<std::int32_t> gens;
  for (const auto& r : trace.receipts) gens.insert(r.generation);
  CHECK(gens.size() == 5);
}
