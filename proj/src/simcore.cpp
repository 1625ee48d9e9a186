// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#include "mmint/simcore.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mmint::sim {

std::string_view to_string(PacketKind kind) {
  switch (kind) {
    case PacketKind::Data: return "DATA";
    case PacketKind::ProbeS1: return "PROBE_S1";
    case PacketKind::ProbeS2: return "PROBE_S2";
    case PacketKind::ProbeS3: return "PROBE_S3";
  }
  return "?";
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::S1: return "S1";
    case Strategy::S2: return "S2";
    case Strategy::S3: return "S3";
  }
  return "?";
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Inject: return "inject";
    case Action::Enqueue: return "enqueue";
    case Action::DropQueueFull: return "drop_queue_full";
    case Action::DropNoCollector: return "drop_no_collector";
    case Action::Dequeue: return "dequeue";
    case Action::Absorb: return "absorb";
    case Action::RegWrite: return "reg_write";
    case Action::RegRead: return "reg_read";
    case Action::LinkTx: return "link_tx";
    case Action::HostDeliver: return "host_deliver";
    case Action::Deliver: return "deliver";
  }
  return "?";
}

int classify_queue(int tos, bool is_probe, int pinned_queue, int nq) {
  if (is_probe) return pinned_queue >= 0 ? pinned_queue : 0;
  return tos % nq;
}

WrrScheduler::WrrScheduler(std::vector<std::uint32_t> weights)
    : weights_(std::move(weights)), credits_(weights_) {
  if (weights_.empty()) throw std::invalid_argument("scheduler needs at least one queue");
  for (auto w : weights_)
    if (w == 0) throw std::invalid_argument("queue weights must be positive");
}

int WrrScheduler::pick(const std::vector<bool>& nonempty) {
  if (std::none_of(nonempty.begin(), nonempty.end(), [](bool b) { return b; })) return -1;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t qi = 0; qi < weights_.size(); ++qi) {
      if (credits_[qi] > 0 && qi < nonempty.size() && nonempty[qi]) {
        --credits_[qi];
        return static_cast<int>(qi);
      }
    }
    credits_ = weights_;  // next round
  }
  return -1;
}

std::size_t probe_base_bytes(PacketKind kind) {
  switch (kind) {
    case PacketKind::ProbeS1: return telemetry::kIntBaseBytes;
    case PacketKind::ProbeS2: return telemetry::kSrPinnedBaseBytes;
    case PacketKind::ProbeS3: return telemetry::kSrBaseBytes;
    case PacketKind::Data: break;
  }
  throw std::invalid_argument("not a probe kind");
}

int probe_wire_size(const Packet& pkt) {
  return static_cast<int>(probe_base_bytes(pkt.kind) + telemetry::kSlotBytes * pkt.slots.size());
}

namespace {

telemetry::Mac switch_mac(std::uint16_t sw) {
  return {0x02, 0x00, 0x00, 0x00, static_cast<std::uint8_t>(sw >> 8), static_cast<std::uint8_t>(sw)};
}

}  // namespace

telemetry::Probe to_wire(const Packet& pkt) {
  if (pkt.kind == PacketKind::ProbeS1) {
    telemetry::IntProbeHeader h;
    h.dst = switch_mac(pkt.path.empty() ? 0 : static_cast<std::uint16_t>(pkt.path.back()));
    h.src = switch_mac(pkt.origin_switch);
    h.flags = pkt.reverse ? 1 : 0;
    h.probe_id = pkt.probe_id;
    h.gen_timestamp_us = pkt.gen_timestamp_us;
    h.slots = pkt.slots;
    return h;
  }
  telemetry::SrProbeHeader h;
  h.src = switch_mac(pkt.origin_switch);
  h.route_id = pkt.route;
  h.probe_id = pkt.probe_id;
  h.gen_timestamp_us = pkt.gen_timestamp_us;
  h.origin_switch = pkt.origin_switch;
  if (pkt.kind == PacketKind::ProbeS2)
    h.target_queue = static_cast<std::uint8_t>(pkt.target_queue < 0 ? 0 : pkt.target_queue);
  h.slots = pkt.slots;
  return h;
}

SrPipelineResult sr_probe_pipeline(const Packet& probe, const mpolka::NodeId& node,
                                   const telemetry::RegisterFile& regs, int nq,
                                   bool has_collector, int ingress_port) {
  SrPipelineResult out;
  const mpolka::TState state = mpolka::compute_t_state(mpolka::RouteId{probe.route}, node);
  const std::vector<int> ports = mpolka::active_ports(state);

  auto append_dump = [&](Packet& p) {
    const auto dump = regs.dump();
    p.slots.insert(p.slots.end(), dump.begin(), dump.end());
    p.size_bytes = probe_wire_size(p);
    out.read_registers = true;
  };

  if (probe.kind == PacketKind::ProbeS3) {
    if (ports.empty()) {
      Packet final = probe;
      append_dump(final);
      if (has_collector)
        out.deliveries.push_back(std::move(final));
      else
        out.drop_no_collector = true;
      return out;
    }
    for (std::size_t i = 0; i < ports.size(); ++i) {
      Packet c = probe;
      if (i == 0)
        append_dump(c);
      else {
        c.slots.clear();
        c.size_bytes = probe_wire_size(c);
      }
      out.emissions.push_back({ports[i], 0, std::move(c)});
    }
    return out;
  }

  if (probe.kind != PacketKind::ProbeS2) throw std::invalid_argument("not a source-routed probe");

  if (ports.empty()) {
    if (ingress_port < 0) {
      // Terminal at the generating switch: one delivery per queue so every
      // queue class of the trivial tree is represented.
      for (int q = 0; q < nq; ++q) {
        Packet c = probe;
        c.target_queue = q;
        c.size_bytes = probe_wire_size(c);
        if (has_collector)
          out.deliveries.push_back(std::move(c));
        else
          out.drop_no_collector = true;
      }
    } else if (has_collector) {
      out.deliveries.push_back(probe);
    } else {
      out.drop_no_collector = true;
    }
    return out;
  }

  if (probe.target_queue > 0) {
    // A queue-pinned clone covered its link; it does not propagate.
    out.absorbed = true;
    return out;
  }

  for (std::size_t i = 0; i < ports.size(); ++i) {
    for (int q = 0; q < nq; ++q) {
      Packet c = probe;
      c.target_queue = q;
      const bool continues_stack = (i == 0 && q == 0);
      if (!continues_stack) c.slots.clear();
      c.sample_on_dequeue = !(i > 0 && q == 0);
      c.size_bytes = probe_wire_size(c);
      out.emissions.push_back({ports[i], q, std::move(c)});
    }
  }
  if (ingress_port >= 1) {
    for (int q = 0; q < nq; ++q) {
      Packet c = probe;
      c.slots.clear();
      c.target_queue = q;
      c.sample_on_dequeue = false;
      c.absorb_on_dequeue = true;
      c.size_bytes = probe_wire_size(c);
      out.emissions.push_back({ingress_port, q, std::move(c)});
    }
  }
  return out;
}

namespace {

struct QueueRt {
  std::deque<std::uint32_t> packets;
  int capacity = 0;
  QueueCounters counters;
};

struct PortRt {
  std::uint64_t bandwidth_bps = net::kDefaultBandwidthBps;
  std::uint64_t delay_us = net::kDefaultDelayUs;
  int peer_sw = -1;
  int peer_port = -1;
  std::vector<QueueRt> queues;
  std::optional<WrrScheduler> wrr;
  bool busy = false;
};

struct SwitchRt {
  std::string name;
  int nq = 1;
  std::vector<PortRt> ports;
  std::optional<telemetry::RegisterFile> regs;
  std::optional<mpolka::NodeId> node;
  bool has_collector = false;
};

struct FlowRt {
  int src_sw = -1;
  int dst_sw = -1;
  std::vector<int> path;
  std::uint64_t gap_ns = 0;
  int packet_bytes = 0;
  int tos = 0;
  std::mt19937_64 rng;
};

struct Event {
  enum class Type { Arrive, ServiceDone, FlowTick, GenTick };
  std::uint64_t time_ns = 0;
  std::uint64_t seq = 0;
  Type type = Type::Arrive;
  int a = 0;  // Arrive/ServiceDone: switch; FlowTick: flow; GenTick: generation
  int b = 0;  // Arrive: ingress port (-1 injection); ServiceDone: port
  std::uint32_t pkt = 0;
};

struct EventLater {
  bool operator()(const Event& x, const Event& y) const {
    return std::tie(x.time_ns, x.seq) > std::tie(y.time_ns, y.seq);
  }
};

class Engine {
 public:
  Engine(const net::TopologySpec& spec, const net::Tree& tree, const mpolka::NodeIdMap& ids,
         const Workload& workload, std::uint64_t seed, std::uint64_t duration_us)
      : spec_(spec), tree_(tree), workload_(workload), duration_ns_(duration_us * 1000), seed_(seed) {
    build(ids);
  }

  SimulationTrace run();

 private:
  void build(const mpolka::NodeIdMap& ids);
  void schedule(Event ev) {
    ev.seq = next_seq_++;
    queue_.push(ev);
  }
  void trace(TraceEvent ev) {
    ev.time_ns = now_;
    out_.events.push_back(ev);
  }
  Packet& pkt(std::uint32_t id) { return arena_[id]; }
  std::uint32_t store(Packet p) {
    arena_.push_back(std::move(p));
    return static_cast<std::uint32_t>(arena_.size() - 1);
  }

  int port_to(int sw, int peer) const;
  std::vector<int> switch_path(const std::string& from, const std::string& to) const;

  void handle_arrive(int sw, int ingress, std::uint32_t id);
  void handle_service_done(int sw, int port, std::uint32_t id);
  void handle_flow_tick(int flow);
  void handle_gen_tick(int generation);

  void process_pipeline(int sw, int ingress, std::uint32_t id);
  void enqueue(int sw, int port, int queue, std::uint32_t id);
  void try_start_service(int sw, int port);
  void deliver(int sw, std::uint32_t id);
  TraceEvent probe_event(const Packet& p) const;

  const net::TopologySpec& spec_;
  const net::Tree& tree_;
  const Workload& workload_;
  std::uint64_t duration_ns_;
  std::uint64_t seed_;

  std::vector<SwitchRt> switches_;
  std::map<std::pair<int, int>, int> next_port_;  // (switch, peer switch) -> port
  std::vector<FlowRt> flows_;
  std::deque<Packet> arena_;
  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t now_ = 0;
  std::uint32_t generations_done_ = 0;
  SimulationTrace out_;
};

void Engine::build(const mpolka::NodeIdMap& ids) {
  switches_.resize(spec_.switches.size());
  for (std::size_t i = 0; i < spec_.switches.size(); ++i) {
    const auto& sw = spec_.switches[i];
    SwitchRt& rt = switches_[i];
    rt.name = sw.name;
    rt.nq = sw.nq;
    rt.ports.resize(static_cast<std::size_t>(sw.ports));
    for (auto& port : rt.ports) {
      port.queues.resize(static_cast<std::size_t>(sw.nq));
      for (auto& q : port.queues) q.capacity = sw.queue_capacity;
      port.wrr.emplace(sw.queue_weights);
    }
    rt.regs.emplace(static_cast<std::uint16_t>(i), sw.data_ports(), sw.nq);
    rt.has_collector = spec_.has_collector(sw.name);
    const auto it = ids.find(sw.name);
    if (it != ids.end()) rt.node = it->second;
    out_.switch_names.push_back(sw.name);
  }
  for (const auto& l : spec_.links) {
    const int ai = spec_.switch_index(l.a);
    const int bi = spec_.switch_index(l.b);
    auto& pa = switches_[static_cast<std::size_t>(ai)].ports[static_cast<std::size_t>(l.a_port)];
    auto& pb = switches_[static_cast<std::size_t>(bi)].ports[static_cast<std::size_t>(l.b_port)];
    pa.bandwidth_bps = pb.bandwidth_bps = l.bandwidth_bps;
    pa.delay_us = pb.delay_us = l.delay_us;
    pa.peer_sw = bi;
    pa.peer_port = l.b_port;
    pb.peer_sw = ai;
    pb.peer_port = l.a_port;
    next_port_[{ai, bi}] = l.a_port;
    next_port_[{bi, ai}] = l.b_port;
  }

  for (std::size_t fi = 0; fi < workload_.flows.size(); ++fi) {
    const Flow& f = workload_.flows[fi];
    auto host_switch = [&](const std::string& host) -> std::string {
      for (const auto& h : spec_.hosts)
        if (h.name == host) return h.attached_switch;
      throw std::invalid_argument("flow references unknown host " + host);
    };
    FlowRt rt;
    const std::string src = host_switch(f.source_host);
    const std::string dst = host_switch(f.sink_host);
    rt.src_sw = spec_.switch_index(src);
    rt.dst_sw = spec_.switch_index(dst);
    rt.path = switch_path(src, dst);
    if (f.rate_pps <= 0) throw std::invalid_argument("flow rate must be positive");
    rt.gap_ns = static_cast<std::uint64_t>(1e9 / f.rate_pps);
    rt.packet_bytes = f.packet_bytes;
    rt.tos = f.tos;
    rt.rng.seed(seed_ * 0x9e3779b97f4a7c15ull + 0x51ed2701ull * (fi + 1));
    flows_.push_back(std::move(rt));
  }
}

int Engine::port_to(int sw, int peer) const {
  const auto it = next_port_.find({sw, peer});
  if (it == next_port_.end())
    throw std::logic_error("no link between " + switches_[static_cast<std::size_t>(sw)].name + " and " +
                           switches_[static_cast<std::size_t>(peer)].name);
  return it->second;
}

std::vector<int> Engine::switch_path(const std::string& from, const std::string& to) const {
  std::vector<int> out;
  for (const auto& name : tree_.path(from, to)) out.push_back(spec_.switch_index(name));
  return out;
}

TraceEvent Engine::probe_event(const Packet& p) const {
  TraceEvent ev;
  ev.kind = p.kind;
  ev.size = p.size_bytes;
  ev.probe_id = p.probe_id;
  ev.generation = p.generation;
  ev.reverse = p.reverse;
  ev.flow = p.flow;
  ev.slot_count = static_cast<std::uint16_t>(p.slots.size());
  return ev;
}

SimulationTrace Engine::run() {
  if (workload_.plan) out_.strategy = workload_.plan->strategy;

  for (std::size_t fi = 0; fi < flows_.size(); ++fi) {
    FlowRt& f = flows_[fi];
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    const auto first = static_cast<std::uint64_t>(jitter(f.rng) * static_cast<double>(f.gap_ns));
    if (first < duration_ns_)
      schedule({first, 0, Event::Type::FlowTick, static_cast<int>(fi), 0, 0});
  }
  if (workload_.plan && !workload_.plan->launches.empty()) {
    const std::uint64_t start = workload_.schedule.start_us * 1000;
    if (start < duration_ns_ || workload_.schedule.generations > 0)
      schedule({start, 0, Event::Type::GenTick, 0, 0, 0});
  }

  while (!queue_.empty()) {
    const Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time_ns;
    switch (ev.type) {
      case Event::Type::Arrive: handle_arrive(ev.a, ev.b, ev.pkt); break;
      case Event::Type::ServiceDone: handle_service_done(ev.a, ev.b, ev.pkt); break;
      case Event::Type::FlowTick: handle_flow_tick(ev.a); break;
      case Event::Type::GenTick: handle_gen_tick(ev.a); break;
    }
  }

  for (std::size_t si = 0; si < switches_.size(); ++si)
    for (std::size_t pi = 0; pi < switches_[si].ports.size(); ++pi)
      for (std::size_t qi = 0; qi < switches_[si].ports[pi].queues.size(); ++qi)
        out_.counters[{static_cast<int>(si), static_cast<int>(pi), static_cast<int>(qi)}] =
            switches_[si].ports[pi].queues[qi].counters;
  out_.generations = generations_done_;
  return out_;
}

void Engine::handle_flow_tick(int flow) {
  FlowRt& f = flows_[static_cast<std::size_t>(flow)];
  Packet p;
  p.kind = PacketKind::Data;
  p.size_bytes = f.packet_bytes;
  p.tos = f.tos;
  p.created_ns = now_;
  p.flow = flow;
  p.path = f.path;
  const std::uint32_t id = store(std::move(p));

  TraceEvent ev;
  ev.sw = f.src_sw;
  ev.kind = PacketKind::Data;
  ev.size = f.packet_bytes;
  ev.action = Action::Inject;
  ev.flow = flow;
  trace(ev);
  process_pipeline(f.src_sw, -1, id);

  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  const auto next = now_ + static_cast<std::uint64_t>(jitter(f.rng) * static_cast<double>(f.gap_ns));
  if (next < duration_ns_) schedule({next, 0, Event::Type::FlowTick, flow, 0, 0});
}

void Engine::handle_gen_tick(int generation) {
  const ProbePlan& plan = *workload_.plan;
  for (std::size_t li = 0; li < plan.launches.size(); ++li) {
    const ProbeLaunch& launch = plan.launches[li];
    Packet p;
    p.kind = launch.format;
    p.strategy = launch.strategy;
    p.tos = telemetry::kProbeTos;
    p.created_ns = now_;
    p.probe_id = static_cast<std::uint32_t>(generation) * 4096u + static_cast<std::uint32_t>(li);
    p.generation = generation;
    p.reverse = launch.reverse;
    p.gen_timestamp_us = static_cast<std::uint32_t>(now_ / 1000);
    const int origin = spec_.switch_index(launch.origin);
    if (origin < 0) throw std::invalid_argument("probe launch references unknown switch " + launch.origin);
    p.origin_switch = static_cast<std::uint16_t>(origin);
    p.target_queue = launch.target_queue;
    if (launch.format == PacketKind::ProbeS1) {
      for (const auto& name : launch.path) p.path.push_back(spec_.switch_index(name));
      if (p.path.empty()) p.path.push_back(origin);
    } else {
      p.route = launch.route.value;
    }
    p.size_bytes = probe_wire_size(p);
    const std::uint32_t id = store(std::move(p));

    TraceEvent ev = probe_event(pkt(id));
    ev.sw = origin;
    ev.action = Action::Inject;
    trace(ev);
    process_pipeline(origin, -1, id);
  }
  ++generations_done_;

  const std::uint64_t next = now_ + workload_.schedule.period_us * 1000;
  const auto& sched = workload_.schedule;
  const bool more = sched.generations > 0
                        ? generations_done_ < sched.generations
                        : next < duration_ns_;
  if (more) schedule({next, 0, Event::Type::GenTick, generation + 1, 0, 0});
}

void Engine::handle_arrive(int sw, int ingress, std::uint32_t id) {
  process_pipeline(sw, ingress, id);
}

void Engine::process_pipeline(int sw, int ingress, std::uint32_t id) {
  SwitchRt& rt = switches_[static_cast<std::size_t>(sw)];
  Packet& p = pkt(id);

  if (p.kind == PacketKind::Data) {
    if (p.path_pos + 1 >= p.path.size()) {
      enqueue(sw, 0, classify_queue(p.tos, false, -1, rt.nq), id);
    } else {
      const int port = port_to(sw, p.path[p.path_pos + 1]);
      ++p.path_pos;
      enqueue(sw, port, classify_queue(p.tos, false, -1, rt.nq), id);
    }
    return;
  }

  if (p.kind == PacketKind::ProbeS1) {
    if (p.path_pos + 1 >= p.path.size()) {
      deliver(sw, id);
    } else {
      const int port = port_to(sw, p.path[p.path_pos + 1]);
      ++p.path_pos;
      p.sample_on_dequeue = true;
      enqueue(sw, port, classify_queue(0, true, p.target_queue, rt.nq), id);
    }
    return;
  }

  if (!rt.node)
    throw std::invalid_argument("switch " + rt.name + " has no nodeID but received a source-routed probe");
  SrPipelineResult result =
      sr_probe_pipeline(p, *rt.node, *rt.regs, rt.nq, rt.has_collector, ingress);

  if (result.read_registers) {
    std::uint64_t oldest = now_;
    for (int port = 1; port <= rt.regs->data_ports(); ++port)
      for (int q = 0; q < rt.nq; ++q) oldest = std::min(oldest, rt.regs->last_update_ns(port, q));
    TraceEvent ev = probe_event(p);
    ev.sw = sw;
    ev.action = Action::RegRead;
    ev.slot_count = static_cast<std::uint16_t>(rt.regs->slot_count());
    ev.aux = (now_ - oldest) / 1000;  // worst-case register staleness, us
    trace(ev);
  }
  if (result.absorbed) {
    TraceEvent ev = probe_event(p);
    ev.sw = sw;
    ev.port = ingress;
    ev.action = Action::Absorb;
    trace(ev);
  }
  if (result.drop_no_collector) {
    TraceEvent ev = probe_event(p);
    ev.sw = sw;
    ev.action = Action::DropNoCollector;
    trace(ev);
  }
  for (Packet& d : result.deliveries) deliver(sw, store(std::move(d)));
  for (PipelineEmission& e : result.emissions)
    enqueue(sw, e.port, e.queue, store(std::move(e.packet)));
}

void Engine::enqueue(int sw, int port, int queue, std::uint32_t id) {
  SwitchRt& rt = switches_[static_cast<std::size_t>(sw)];
  PortRt& prt = rt.ports[static_cast<std::size_t>(port)];
  QueueRt& q = prt.queues[static_cast<std::size_t>(queue)];
  Packet& p = pkt(id);

  TraceEvent ev = probe_event(p);
  ev.sw = sw;
  ev.port = port;
  ev.queue = queue;

  q.counters.enqueued++;
  if (q.counters.resident >= static_cast<std::uint64_t>(q.capacity)) {
    q.counters.dropped++;
    ev.action = Action::DropQueueFull;
    trace(ev);
    return;
  }
  p.enq_time_ns = now_;
  p.enq_depth = static_cast<std::uint16_t>(q.counters.resident);
  q.counters.resident++;
  q.packets.push_back(id);
  ev.action = Action::Enqueue;
  trace(ev);
  try_start_service(sw, port);
}

void Engine::try_start_service(int sw, int port) {
  SwitchRt& rt = switches_[static_cast<std::size_t>(sw)];
  PortRt& prt = rt.ports[static_cast<std::size_t>(port)];
  if (prt.busy) return;

  while (true) {
    std::vector<bool> nonempty(prt.queues.size());
    for (std::size_t qi = 0; qi < prt.queues.size(); ++qi)
      nonempty[qi] = !prt.queues[qi].packets.empty();
    const int qi = prt.wrr->pick(nonempty);
    if (qi < 0) return;

    QueueRt& q = prt.queues[static_cast<std::size_t>(qi)];
    const std::uint32_t id = q.packets.front();
    q.packets.pop_front();
    q.counters.dequeued++;
    q.counters.resident--;
    Packet& p = pkt(id);
    p.ride_queue = qi;

    TraceEvent ev = probe_event(p);
    ev.sw = sw;
    ev.port = port;
    ev.queue = qi;
    ev.action = Action::Dequeue;
    trace(ev);

    if (p.absorb_on_dequeue) {
      ev.action = Action::Absorb;
      trace(ev);
      continue;  // consumed inside the switch, no transmission
    }

    const auto deq_depth = static_cast<std::uint16_t>(q.counters.resident);
    const auto timedelta_us = static_cast<std::uint32_t>((now_ - p.enq_time_ns) / 1000);
    const auto enq_ts_us = static_cast<std::uint32_t>(p.enq_time_ns / 1000);

    if (p.kind == PacketKind::Data && port >= 1 && port <= rt.regs->data_ports()) {
      rt.regs->record(port, qi, p.enq_depth, deq_depth, timedelta_us, enq_ts_us, now_);
      ev.action = Action::RegWrite;
      trace(ev);
    } else if (p.kind != PacketKind::Data && p.sample_on_dequeue && port >= 1) {
      p.slots.push_back({static_cast<std::uint16_t>(sw), static_cast<std::uint8_t>(port),
                         static_cast<std::uint8_t>(qi), p.enq_depth, deq_depth, timedelta_us,
                         enq_ts_us});
      p.size_bytes = probe_wire_size(p);
    }

    const std::uint64_t service_ns =
        static_cast<std::uint64_t>(p.size_bytes) * 8'000'000'000ull / prt.bandwidth_bps;
    prt.busy = true;
    schedule({now_ + service_ns, 0, Event::Type::ServiceDone, sw, port, id});
    return;
  }
}

void Engine::handle_service_done(int sw, int port, std::uint32_t id) {
  SwitchRt& rt = switches_[static_cast<std::size_t>(sw)];
  PortRt& prt = rt.ports[static_cast<std::size_t>(port)];
  prt.busy = false;
  Packet& p = pkt(id);

  if (port == 0 || prt.peer_sw < 0) {
    TraceEvent ev = probe_event(p);
    ev.sw = sw;
    ev.port = port;
    ev.action = Action::HostDeliver;
    trace(ev);
  } else {
    TraceEvent ev = probe_event(p);
    ev.sw = sw;
    ev.port = port;
    ev.queue = p.ride_queue;
    ev.action = Action::LinkTx;
    ev.peer = prt.peer_sw;
    trace(ev);
    schedule({now_ + prt.delay_us * 1000, 0, Event::Type::Arrive, prt.peer_sw, prt.peer_port, id});
  }
  try_start_service(sw, port);
}

void Engine::deliver(int sw, std::uint32_t id) {
  SwitchRt& rt = switches_[static_cast<std::size_t>(sw)];
  Packet& p = pkt(id);
  if (!rt.has_collector) {
    TraceEvent ev = probe_event(p);
    ev.sw = sw;
    ev.action = Action::DropNoCollector;
    trace(ev);
    return;
  }
  Receipt r;
  r.strategy = p.strategy;
  r.format = p.kind;
  r.probe_id = p.probe_id;
  r.generation = p.generation;
  r.collector_switch = sw;
  r.time_ns = now_;
  r.bytes = telemetry::serialize(to_wire(p));
  assert(static_cast<int>(r.bytes.size()) == p.size_bytes);

  TraceEvent ev = probe_event(p);
  ev.sw = sw;
  ev.port = 0;
  ev.action = Action::Deliver;
  trace(ev);
  out_.receipts.push_back(std::move(r));
}

}  // namespace

SimulationTrace run(const net::TopologySpec& spec, const net::Tree& tree,
                    const mpolka::NodeIdMap& ids, const Workload& workload, std::uint64_t seed,
                    std::uint64_t duration_us) {
  Engine engine(spec, tree, ids, workload, seed, duration_us);
  return engine.run();
}

std::string SimulationTrace::export_lines() const {
  std::ostringstream os;
  char buf[64];
  for (const auto& ev : events) {
    std::snprintf(buf, sizeof buf, "%llu.%03llu",
                  static_cast<unsigned long long>(ev.time_ns / 1000),
                  static_cast<unsigned long long>(ev.time_ns % 1000));
    os << buf << ' ' << (ev.sw >= 0 ? switch_names[static_cast<std::size_t>(ev.sw)] : "-") << ' ';
    if (ev.port >= 0)
      os << ev.port << ' ';
    else
      os << "- ";
    if (ev.queue >= 0)
      os << ev.queue << ' ';
    else
      os << "- ";
    os << to_string(ev.kind) << ' ' << ev.size << ' ' << to_string(ev.action);
    if (ev.action == Action::LinkTx && ev.peer >= 0)
      os << " dst=" << switch_names[static_cast<std::size_t>(ev.peer)];
    if (ev.kind == PacketKind::Data) {
      if (ev.flow >= 0) os << " flow=" << ev.flow;
    } else {
      os << " probe=" << ev.probe_id << " gen=" << ev.generation;
      os << " slots=" << ev.slot_count;
      if (ev.action == Action::RegRead) os << " staleness_us=" << ev.aux;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace mmint::sim
