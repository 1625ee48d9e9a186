// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mmint/gf2poly.hpp"

namespace mmint::telemetry {

// All wire fields are big-endian.
inline constexpr std::uint16_t kEtherTypeSr = 0x1234;    // source-routed probes (multicast)
inline constexpr std::uint16_t kEtherTypeInt = 0x1236;   // unicast hop-by-hop probes
inline constexpr std::uint16_t kEtherTypeData = 0x0800;
inline constexpr int kProbeTos = 55;  // marks any telemetry packet in the pipeline

inline constexpr std::size_t kSlotBytes = 16;
inline constexpr std::size_t kSrBaseBytes = 58;        // Ethernet 14 + routeID 32 + fields 12
inline constexpr std::size_t kSrPinnedBaseBytes = 59;  // + target_queue
inline constexpr std::size_t kIntBaseBytes = 29;       // Ethernet 14 + fields 15
inline constexpr std::size_t kRouteIdBytes = 32;

// One register record, the unit a probe harvests.
// Layout (16 bytes): switch_id u16 | port u8 | queue u8 | enq_qdepth u16 |
// deq_qdepth u16 | deq_timedelta u32 (us) | enq_timestamp u32 (us)
struct TelemetrySlot {
  std::uint16_t switch_id = 0;
  std::uint8_t port = 0;
  std::uint8_t queue = 0;
  std::uint16_t enq_qdepth = 0;
  std::uint16_t deq_qdepth = 0;
  std::uint32_t deq_timedelta_us = 0;
  std::uint32_t enq_timestamp_us = 0;

  friend bool operator==(const TelemetrySlot&, const TelemetrySlot&) = default;
};

using Mac = std::array<std::uint8_t, 6>;

// Source-routed probe header.  On-wire size: 58 + 16*slots for the plain
// form, 59 + 16*slots when a target queue is pinned.
struct SrProbeHeader {
  Mac dst{0xff, 0xff, 0xff, 0xff, 0xff, 0xff};
  Mac src{};
  gf2::Poly route_id;  // 256-bit field
  std::uint32_t probe_id = 0;
  std::uint32_t gen_timestamp_us = 0;
  std::uint16_t origin_switch = 0;
  std::optional<std::uint8_t> target_queue;  // present on queue-pinned probes
  std::vector<TelemetrySlot> slots;

  std::size_t wire_size() const {
    return (target_queue ? kSrPinnedBaseBytes : kSrBaseBytes) + kSlotBytes * slots.size();
  }
};

// Unicast hop-by-hop probe header; the stack grows by one slot per hop.
// On-wire size: 29 + 16*hop_count.
struct IntProbeHeader {
  Mac dst{};
  Mac src{};
  std::uint8_t version = 1;
  std::uint8_t flags = 0;  // bit 0: reverse-direction launch
  std::uint8_t max_hops = 32;
  std::uint32_t probe_id = 0;
  std::uint32_t gen_timestamp_us = 0;
  std::uint16_t instruction_bitmap = 0x000f;
  std::vector<TelemetrySlot> slots;  // hop_count == slots.size()

  std::size_t wire_size() const { return kIntBaseBytes + kSlotBytes * slots.size(); }
};

using Probe = std::variant<SrProbeHeader, IntProbeHeader>;

std::size_t wire_size(const Probe& probe);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

std::vector<std::uint8_t> serialize(const SrProbeHeader& probe);
std::vector<std::uint8_t> serialize(const IntProbeHeader& probe);
std::vector<std::uint8_t> serialize(const Probe& probe);
Probe parse_probe(std::span<const std::uint8_t> bytes);

// Per-switch telemetry registers: one slot per (data port, queue).  Port 0
// is the host/CPU attachment and carries no registers, so a switch with P
// total ports holds (P-1)*nq slots and 16*(P-1)*nq bytes of state.
class RegisterFile {
 public:
  RegisterFile(std::uint16_t switch_id, int data_ports, int nq);

  // Overwrites the slot for (port, queue); last writer wins.
  void record(int port, int queue, std::uint16_t enq_qdepth, std::uint16_t deq_qdepth,
              std::uint32_t deq_timedelta_us, std::uint32_t enq_timestamp_us,
              std::uint64_t now_ns);

  const TelemetrySlot& slot(int port, int queue) const;
  std::uint64_t last_update_ns(int port, int queue) const;

  // All slots in ascending (port, queue) order.
  std::vector<TelemetrySlot> dump() const { return slots_; }

  int data_ports() const { return data_ports_; }
  int nq() const { return nq_; }
  std::size_t slot_count() const { return slots_.size(); }
  std::size_t memory_bytes() const { return slots_.size() * kSlotBytes; }

 private:
  std::size_t index(int port, int queue) const;
  int data_ports_;
  int nq_;
  std::vector<TelemetrySlot> slots_;
  std::vector<std::uint64_t> last_update_ns_;
};

struct SeriesKey {
  std::uint16_t switch_id = 0;
  std::uint8_t port = 0;
  std::uint8_t queue = 0;
  auto operator<=>(const SeriesKey&) const = default;
};

struct SeriesSample {
  std::uint64_t time_us = 0;  // collection (receipt) time
  std::uint16_t enq_qdepth = 0;
  std::uint16_t deq_qdepth = 0;
  std::uint32_t deq_timedelta_us = 0;
};

struct ReceiptRecord {
  std::uint32_t probe_id = 0;
  std::uint64_t arrival_us = 0;
  std::uint16_t collector_switch = 0;
  std::size_t wire_bytes = 0;
  std::size_t slot_count = 0;
};

// Collector-side ingestion: parses delivered probe bytes, appends one series
// sample per carried slot, and keeps the raw receipt log the metrics are
// computed from.  A repeated probe_id at the same collector is logged, not
// fatal (multicast clones legitimately share an id across collectors).
class Collector {
 public:
  void ingest(std::uint16_t collector_switch, std::uint64_t arrival_us,
              std::span<const std::uint8_t> probe_bytes);

  const std::map<SeriesKey, std::vector<SeriesSample>>& series() const { return series_; }
  const std::vector<ReceiptRecord>& receipts() const { return receipts_; }
  const std::vector<std::string>& anomalies() const { return anomalies_; }

 private:
  std::map<SeriesKey, std::vector<SeriesSample>> series_;
  std::vector<ReceiptRecord> receipts_;
  std::map<std::pair<std::uint16_t, std::uint32_t>, int> seen_;
  std::vector<std::string> anomalies_;
};

// CSV with columns time_us,switch,port,queue,enq_qdepth,deq_qdepth,deq_timedelta_us
// restricted to one switch; `names` maps switch ids to printable names.
std::string series_csv(const std::map<SeriesKey, std::vector<SeriesSample>>& series,
                       std::uint16_t switch_id, const std::vector<std::string>& names);

}  // namespace mmint::telemetry
