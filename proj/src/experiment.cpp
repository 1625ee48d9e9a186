// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#include "mmint/experiment.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mmint::experiment {

using nlohmann::json;
using sim::Strategy;

namespace {

Strategy parse_strategy(const std::string& s) {
  if (s == "S1" || s == "s1") return Strategy::S1;
  if (s == "S2" || s == "s2") return Strategy::S2;
  if (s == "S3" || s == "s3") return Strategy::S3;
  throw std::invalid_argument("unknown strategy '" + s + "' (expected S1, S2 or S3)");
}

sim::ProbePlan plan_for(Strategy s, const net::Tree& tree, int nq, const mpolka::NodeIdMap& ids) {
  switch (s) {
    case Strategy::S1: return strategy::plan_s1(tree, nq);
    case Strategy::S2: return strategy::plan_s2(tree, nq, ids);
    case Strategy::S3: return strategy::plan_s3(tree, ids);
  }
  throw std::logic_error("bad strategy");
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::filesystem::path>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  written.push_back(path);
}

}  // namespace

ExperimentConfig load_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  if (!doc.contains("topology")) throw std::invalid_argument("config: missing 'topology'");
  std::filesystem::path topo = doc["topology"].get<std::string>();
  cfg.topology_file = topo.is_absolute() ? topo : base_dir / topo;
  if (!doc.contains("strategies") || doc["strategies"].empty())
    throw std::invalid_argument("config: at least one strategy is required");
  std::set<Strategy> seen;
  for (const auto& s : doc["strategies"]) {
    const Strategy st = parse_strategy(s.get<std::string>());
    if (seen.insert(st).second) cfg.strategies.push_back(st);
  }
  cfg.probe_period_us = doc.value("probe_period_us", cfg.probe_period_us);
  cfg.probe_start_us = doc.value("probe_start_us", cfg.probe_start_us);
  cfg.generations = doc.value("generations", cfg.generations);
  cfg.duration_us = doc.value("duration_us", cfg.duration_us);
  cfg.seed = doc.value("seed", cfg.seed);
  if (doc.contains("flows")) {
    for (const auto& jf : doc["flows"]) {
      sim::Flow f;
      f.source_host = jf.value("source", std::string{});
      f.sink_host = jf.value("sink", std::string{});
      f.rate_pps = jf.value("rate_pps", f.rate_pps);
      f.packet_bytes = jf.value("packet_bytes", f.packet_bytes);
      f.tos = jf.value("tos", f.tos);
      cfg.flows.push_back(std::move(f));
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str(), path.parent_path());
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  std::vector<std::string> diags;
  if (config.duration_us == 0) diags.push_back("duration_us: must be positive");
  if (config.strategies.empty()) diags.push_back("strategies: at least one is required");
  if (config.probe_period_us == 0) diags.push_back("probe_period_us: must be positive");

  net::TopologySpec spec;
  try {
    spec = net::load_topology_file(config.topology_file);
  } catch (const net::TopologyError& e) {
    for (const auto& d : e.diagnostics()) diags.push_back("topology: " + d);
    return diags;
  }
  for (std::size_t i = 0; i < config.flows.size(); ++i) {
    const auto& f = config.flows[i];
    auto known = [&](const std::string& host) {
      for (const auto& h : spec.hosts)
        if (h.name == host) return true;
      return false;
    };
    if (!known(f.source_host))
      diags.push_back("flows[" + std::to_string(i) + "].source: unknown host " + f.source_host);
    if (!known(f.sink_host))
      diags.push_back("flows[" + std::to_string(i) + "].sink: unknown host " + f.sink_host);
    if (f.rate_pps <= 0) diags.push_back("flows[" + std::to_string(i) + "].rate_pps: must be positive");
    if (f.packet_bytes < 64)
      diags.push_back("flows[" + std::to_string(i) + "].packet_bytes: must be >= 64");
  }
  try {
    net::to_tree(spec, spec.root);
  } catch (const net::TopologyError& e) {
    for (const auto& d : e.diagnostics()) diags.push_back("topology: " + d);
  }
  return diags;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto diags = validate(config);
  if (!diags.empty()) {
    std::string what = "invalid experiment config:";
    for (const auto& d : diags) what += "\n  " + d;
    throw std::invalid_argument(what);
  }

  ExperimentResult result;
  result.spec = net::load_topology_file(config.topology_file);
  result.tree = net::to_tree(result.spec, result.spec.root);
  result.node_ids = mpolka::assign_node_ids(result.spec);

  const int nq = result.spec.switches.empty() ? 1 : result.spec.switches.front().nq;
  for (const Strategy s : config.strategies) {
    StrategyRun run;
    run.strategy = s;
    sim::Workload workload;
    workload.flows = config.flows;
    workload.plan = plan_for(s, result.tree, nq, result.node_ids);
    workload.schedule = {config.probe_start_us, config.probe_period_us, config.generations};
    run.launches = workload.plan->launches.size();
    run.trace = sim::run(result.spec, result.tree, result.node_ids, workload, config.seed,
                         config.duration_us);
    for (const auto& receipt : run.trace.receipts)
      run.collector.ingest(static_cast<std::uint16_t>(receipt.collector_switch),
                           receipt.time_ns / 1000, receipt.bytes);
    result.runs.push_back(std::move(run));
  }

  for (const auto& run : result.runs)
    result.report.rows.push_back(strategy::analyze(run.trace, result.spec, run.launches));
  return result;
}

std::vector<std::filesystem::path> write_artifacts(const ExperimentResult& result,
                                                   const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  std::filesystem::create_directories(out_dir / "series");

  write_file(out_dir / "metrics.csv", result.report.to_csv(), written);

  std::ostringstream summary;
  summary << "topology: " << result.spec.switches.size() << " switches, " << result.spec.links.size()
          << " links, root " << result.tree.root << "\n";
  summary << "leaves:";
  for (const auto& leaf : result.tree.leaves) summary << ' ' << leaf;
  summary << "\nnodeIDs:\n";
  for (const auto& [name, id] : result.node_ids)
    summary << "  " << name << ": " << id.value.to_binary() << "\n";
  summary << "\n" << result.report.to_text();
  write_file(out_dir / "summary.txt", summary.str(), written);

  std::vector<std::string> names;
  for (const auto& sw : result.spec.switches) names.push_back(sw.name);

  for (const auto& run : result.runs) {
    const std::string tag(to_string(run.strategy));
    write_file(out_dir / ("trace_" + tag + ".log"), run.trace.export_lines(), written);

    std::ostringstream receipts;
    receipts << "probe_id,arrival_us,collector,wire_bytes,slot_count\n";
    for (const auto& r : run.collector.receipts())
      receipts << r.probe_id << ',' << r.arrival_us << ',' << names.at(r.collector_switch) << ','
               << r.wire_bytes << ',' << r.slot_count << '\n';
    write_file(out_dir / ("receipts_" + tag + ".csv"), receipts.str(), written);

    for (std::size_t si = 0; si < names.size(); ++si) {
      const std::string csv =
          telemetry::series_csv(run.collector.series(), static_cast<std::uint16_t>(si), names);
      write_file(out_dir / "series" / (tag + "_" + names[si] + ".csv"), csv, written);
    }
  }
  return written;
}

std::string describe_topology(const std::filesystem::path& topology_file) {
  const net::TopologySpec spec = net::load_topology_file(topology_file);
  const net::Tree tree = net::to_tree(spec, spec.root);
  const mpolka::NodeIdMap ids = mpolka::assign_node_ids(spec);
  const auto states = mpolka::tree_t_states(tree, ids);
  const mpolka::RouteId route = mpolka::encode_tree(tree, ids, states);

  std::ostringstream os;
  os << "switches (" << spec.switches.size() << "):\n";
  os << "  name | ports | monitored | nq | nodeID | register bytes\n";
  for (const auto& sw : spec.switches) {
    const auto& id = ids.at(sw.name);
    os << "  " << sw.name << " | " << sw.ports << " | " << sw.data_ports() << " | " << sw.nq
       << " | " << id.value.to_binary() << " | "
       << strategy::register_memory_bytes(sw.data_ports(), sw.nq) << '\n';
  }
  bool coprime = true;
  for (auto it = ids.begin(); it != ids.end(); ++it)
    for (auto jt = std::next(it); jt != ids.end(); ++jt)
      coprime = coprime && gf2::gcd(it->second.value, jt->second.value).is_one();
  os << "nodeIDs pairwise coprime: " << (coprime ? "yes" : "NO") << '\n';

  os << "links (" << spec.links.size() << "):\n";
  for (const auto& l : spec.links)
    os << "  " << l.a << '.' << l.a_port << " <-> " << l.b << '.' << l.b_port << " @ "
       << l.bandwidth_bps << " bps, " << l.delay_us << " us\n";
  os << "hosts:\n";
  for (const auto& h : spec.hosts)
    os << "  " << h.name << " @ " << h.attached_switch << " (" << net::to_string(h.role) << ")\n";

  os << "tree root: " << tree.root << "\nleaves:";
  for (const auto& leaf : tree.leaves) os << ' ' << leaf;
  os << "\ntransmission states:\n";
  for (const auto& [sw, state] : states) {
    os << "  " << sw << ": " << state.to_poly().to_binary() << " -> ports";
    const auto ports = mpolka::active_ports(state);
    if (ports.empty()) os << " none (terminal)";
    for (int p : ports) os << ' ' << p;
    os << '\n';
  }
  os << "forward routeID: " << route.value.to_binary() << '\n';
  return os.str();
}

}  // namespace mmint::experiment
