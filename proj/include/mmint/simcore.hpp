// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mmint/mpolka.hpp"
#include "mmint/netmodel.hpp"
#include "mmint/telemetry.hpp"

namespace mmint::sim {

enum class PacketKind { Data, ProbeS1, ProbeS2, ProbeS3 };
enum class Strategy { S1, S2, S3 };

std::string_view to_string(PacketKind kind);
std::string_view to_string(Strategy s);

struct Flow {
  std::string source_host;
  std::string sink_host;
  double rate_pps = 100.0;
  int packet_bytes = 500;
  int tos = 0;
};

// One probe injection point of a plan.  SR formats carry a routeID and fan
// out in the pipeline; the unicast format follows an explicit switch path.
struct ProbeLaunch {
  Strategy strategy = Strategy::S3;
  PacketKind format = PacketKind::ProbeS3;
  std::string origin;
  bool reverse = false;
  mpolka::RouteId route;           // SR formats
  std::vector<std::string> path;   // unicast format: switch sequence incl. origin
  int target_queue = -1;           // pinned egress queue; -1 = default queue 0
};

struct ProbePlan {
  Strategy strategy = Strategy::S3;
  std::vector<ProbeLaunch> launches;
};

struct ProbeSchedule {
  std::uint64_t start_us = 0;
  std::uint64_t period_us = 10'000;  // default probing cadence
  std::uint32_t generations = 0;     // 0 = keep firing until the duration ends
};

struct Workload {
  std::vector<Flow> flows;
  std::optional<ProbePlan> plan;
  ProbeSchedule schedule;
};

enum class Action {
  Inject,
  Enqueue,
  DropQueueFull,
  DropNoCollector,
  Dequeue,
  Absorb,
  RegWrite,
  RegRead,
  LinkTx,
  HostDeliver,
  Deliver,
};

std::string_view to_string(Action a);

struct TraceEvent {
  std::uint64_t time_ns = 0;
  int sw = -1;
  int port = -1;
  int queue = -1;
  PacketKind kind = PacketKind::Data;
  int size = 0;
  Action action = Action::Inject;
  int peer = -1;                 // LinkTx: receiving switch
  std::uint32_t probe_id = 0;
  std::int32_t generation = -1;  // -1 for data traffic
  bool reverse = false;
  int flow = -1;
  std::uint16_t slot_count = 0;  // probes: slots on board at this event
  std::uint64_t aux = 0;         // RegRead: worst-case staleness in us
};

struct Receipt {
  Strategy strategy = Strategy::S3;
  PacketKind format = PacketKind::ProbeS3;
  std::uint32_t probe_id = 0;
  std::int32_t generation = -1;
  int collector_switch = -1;
  std::uint64_t time_ns = 0;
  std::vector<std::uint8_t> bytes;  // serialized wire image, parsed by the collector
};

struct QueueCounters {
  std::uint64_t enqueued = 0;  // accepted + dropped offers
  std::uint64_t dequeued = 0;
  std::uint64_t dropped = 0;
  std::uint64_t resident = 0;
};

struct SimulationTrace {
  std::vector<std::string> switch_names;
  std::optional<Strategy> strategy;
  std::uint32_t generations = 0;
  std::vector<TraceEvent> events;
  std::vector<Receipt> receipts;
  std::map<std::tuple<int, int, int>, QueueCounters> counters;  // (switch, port, queue)

  // Line-delimited record export used for golden-file comparison.
  std::string export_lines() const;
};

// Deterministic discrete-event run: identical (spec, tree, ids, workload,
// seed, duration) inputs produce identical traces.
SimulationTrace run(const net::TopologySpec& spec, const net::Tree& tree,
                    const mpolka::NodeIdMap& ids, const Workload& workload, std::uint64_t seed,
                    std::uint64_t duration_us);

// --- pipeline pieces, exposed for direct testing -------------------------

// Egress queue selection: data packets hash by TOS, probes take queue 0
// unless the plan pinned one.
int classify_queue(int tos, bool is_probe, int pinned_queue, int nq);

// Weighted round robin over a port's queues, by packet count.  Each round
// grants every queue `weight` dequeues; empty queues do not block the round.
class WrrScheduler {
 public:
  explicit WrrScheduler(std::vector<std::uint32_t> weights);
  int pick(const std::vector<bool>& nonempty);  // -1 when everything is empty

 private:
  std::vector<std::uint32_t> weights_;
  std::vector<std::uint32_t> credits_;
};

struct Packet {
  PacketKind kind = PacketKind::Data;
  Strategy strategy = Strategy::S3;
  int size_bytes = 0;
  int tos = 0;
  std::uint64_t created_ns = 0;
  int flow = -1;
  std::uint32_t probe_id = 0;
  std::int32_t generation = -1;
  bool reverse = false;
  std::uint16_t origin_switch = 0;
  std::uint32_t gen_timestamp_us = 0;
  std::vector<int> path;  // unicast: switch indices, path[path_pos] = current
  std::size_t path_pos = 0;
  gf2::Poly route;
  int target_queue = -1;
  std::vector<telemetry::TelemetrySlot> slots;
  bool absorb_on_dequeue = false;
  bool sample_on_dequeue = false;
  std::uint64_t enq_time_ns = 0;
  std::uint16_t enq_depth = 0;
  int ride_queue = -1;  // queue served at the most recent dequeue
};

std::size_t probe_base_bytes(PacketKind kind);
int probe_wire_size(const Packet& pkt);
telemetry::Probe to_wire(const Packet& pkt);

struct PipelineEmission {
  int port = 0;
  int queue = 0;
  Packet packet;
};

struct SrPipelineResult {
  std::vector<PipelineEmission> emissions;
  std::vector<Packet> deliveries;  // handed to the local collector
  bool absorbed = false;           // arriving pinned clone consumed here
  bool read_registers = false;
  bool drop_no_collector = false;
};

// Forwarding round for a source-routed probe at one switch.
//
// MM-INT probes (S3) clone to every active port of the transmission state;
// only the first active port's copy keeps the accumulated stack and gains
// this switch's full register dump, the rest restart empty.  At a terminal
// switch (no active ports) the local dump is appended and the probe goes to
// the local collector.
//
// Per-queue probes (S2) emit one clone per (active port, queue).  The
// accumulated stack continues only on the (first port, queue 0) clone;
// queue-0 clones on the remaining ports are bare route carriers for their
// subtree, every other clone samples the queue it rides.  When the probe
// arrived over a link, nq additional clones go back out the ingress port and
// are absorbed at dequeue without transmission.  Arriving non-queue-0 clones
// end at the next switch: absorbed when it forwards, delivered when it is
// terminal.
SrPipelineResult sr_probe_pipeline(const Packet& probe, const mpolka::NodeId& node,
                                   const telemetry::RegisterFile& regs, int nq,
                                   bool has_collector, int ingress_port);

}  // namespace mmint::sim
