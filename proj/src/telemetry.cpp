// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#include "mmint/telemetry.hpp"

#include <algorithm>
#include <sstream>

namespace mmint::telemetry {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return (static_cast<std::uint32_t>(b[at]) << 24) | (static_cast<std::uint32_t>(b[at + 1]) << 16) |
         (static_cast<std::uint32_t>(b[at + 2]) << 8) | b[at + 3];
}

void put_slot(std::vector<std::uint8_t>& out, const TelemetrySlot& s) {
  put_u16(out, s.switch_id);
  out.push_back(s.port);
  out.push_back(s.queue);
  put_u16(out, s.enq_qdepth);
  put_u16(out, s.deq_qdepth);
  put_u32(out, s.deq_timedelta_us);
  put_u32(out, s.enq_timestamp_us);
}

TelemetrySlot get_slot(std::span<const std::uint8_t> b, std::size_t at) {
  TelemetrySlot s;
  s.switch_id = get_u16(b, at);
  s.port = b[at + 2];
  s.queue = b[at + 3];
  s.enq_qdepth = get_u16(b, at + 4);
  s.deq_qdepth = get_u16(b, at + 6);
  s.deq_timedelta_us = get_u32(b, at + 8);
  s.enq_timestamp_us = get_u32(b, at + 12);
  return s;
}

}  // namespace

std::size_t wire_size(const Probe& probe) {
  return std::visit([](const auto& p) { return p.wire_size(); }, probe);
}

std::vector<std::uint8_t> serialize(const SrProbeHeader& probe) {
  std::vector<std::uint8_t> out;
  out.reserve(probe.wire_size());
  out.insert(out.end(), probe.dst.begin(), probe.dst.end());
  out.insert(out.end(), probe.src.begin(), probe.src.end());
  put_u16(out, kEtherTypeSr);
  std::array<std::uint8_t, kRouteIdBytes> route{};
  probe.route_id.to_bytes_be(route);
  out.insert(out.end(), route.begin(), route.end());
  put_u16(out, static_cast<std::uint16_t>(probe.slots.size()));
  put_u32(out, probe.probe_id);
  put_u32(out, probe.gen_timestamp_us);
  put_u16(out, probe.origin_switch);
  if (probe.target_queue) out.push_back(*probe.target_queue);
  for (const auto& s : probe.slots) put_slot(out, s);
  return out;
}

std::vector<std::uint8_t> serialize(const IntProbeHeader& probe) {
  std::vector<std::uint8_t> out;
  out.reserve(probe.wire_size());
  out.insert(out.end(), probe.dst.begin(), probe.dst.end());
  out.insert(out.end(), probe.src.begin(), probe.src.end());
  put_u16(out, kEtherTypeInt);
  out.push_back(probe.version);
  out.push_back(probe.flags);
  out.push_back(static_cast<std::uint8_t>(probe.slots.size()));
  out.push_back(probe.max_hops);
  put_u32(out, probe.probe_id);
  put_u32(out, probe.gen_timestamp_us);
  put_u16(out, probe.instruction_bitmap);
  out.push_back(0);  // reserved
  for (const auto& s : probe.slots) put_slot(out, s);
  return out;
}

std::vector<std::uint8_t> serialize(const Probe& probe) {
  return std::visit([](const auto& p) { return serialize(p); }, probe);
}

Probe parse_probe(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 14) throw ParseError(bytes.size(), "buffer shorter than an Ethernet header");
  const std::uint16_t ether = get_u16(bytes, 12);

  if (ether == kEtherTypeSr) {
    if (bytes.size() < kSrBaseBytes)
      throw ParseError(bytes.size(), "buffer shorter than the source-routed probe base");
    const bool pinned = (bytes.size() - kSrPinnedBaseBytes) % kSlotBytes == 0 &&
                        bytes.size() >= kSrPinnedBaseBytes;
    const bool plain = (bytes.size() - kSrBaseBytes) % kSlotBytes == 0;
    if (!pinned && !plain)
      throw ParseError(bytes.size(), "length fits neither 58+16k nor 59+16k");
    SrProbeHeader p;
    std::copy_n(bytes.begin(), 6, p.dst.begin());
    std::copy_n(bytes.begin() + 6, 6, p.src.begin());
    p.route_id = gf2::Poly::from_bytes_be(bytes.subspan(14, kRouteIdBytes));
    const std::uint16_t slot_count = get_u16(bytes, 46);
    p.probe_id = get_u32(bytes, 48);
    p.gen_timestamp_us = get_u32(bytes, 52);
    p.origin_switch = get_u16(bytes, 56);
    std::size_t at = kSrBaseBytes;
    if (pinned) {
      p.target_queue = bytes[58];
      at = kSrPinnedBaseBytes;
    }
    const std::size_t expect = at + kSlotBytes * slot_count;
    if (expect != bytes.size())
      throw ParseError(46, "slot_count " + std::to_string(slot_count) + " implies " +
                               std::to_string(expect) + " bytes, buffer has " +
                               std::to_string(bytes.size()));
    for (std::uint16_t i = 0; i < slot_count; ++i, at += kSlotBytes)
      p.slots.push_back(get_slot(bytes, at));
    return p;
  }

  if (ether == kEtherTypeInt) {
    if (bytes.size() < kIntBaseBytes)
      throw ParseError(bytes.size(), "buffer shorter than the hop-by-hop probe base");
    IntProbeHeader p;
    std::copy_n(bytes.begin(), 6, p.dst.begin());
    std::copy_n(bytes.begin() + 6, 6, p.src.begin());
    p.version = bytes[14];
    p.flags = bytes[15];
    const std::uint8_t hop_count = bytes[16];
    p.max_hops = bytes[17];
    p.probe_id = get_u32(bytes, 18);
    p.gen_timestamp_us = get_u32(bytes, 22);
    p.instruction_bitmap = get_u16(bytes, 26);
    const std::size_t expect = kIntBaseBytes + kSlotBytes * hop_count;
    if (expect != bytes.size())
      throw ParseError(16, "hop_count " + std::to_string(hop_count) + " implies " +
                               std::to_string(expect) + " bytes, buffer has " +
                               std::to_string(bytes.size()));
    std::size_t at = kIntBaseBytes;
    for (std::uint8_t i = 0; i < hop_count; ++i, at += kSlotBytes)
      p.slots.push_back(get_slot(bytes, at));
    return p;
  }

  std::ostringstream os;
  os << "unknown etherType 0x" << std::hex << ether;
  throw ParseError(12, os.str());
}

RegisterFile::RegisterFile(std::uint16_t switch_id, int data_ports, int nq)
    : data_ports_(data_ports), nq_(nq) {
  if (data_ports < 0 || nq < 1) throw std::invalid_argument("bad register file shape");
  slots_.resize(static_cast<std::size_t>(data_ports) * static_cast<std::size_t>(nq));
  last_update_ns_.resize(slots_.size(), 0);
  for (int p = 1; p <= data_ports; ++p) {
    for (int q = 0; q < nq; ++q) {
      TelemetrySlot& s = slots_[index(p, q)];
      s.switch_id = switch_id;
      s.port = static_cast<std::uint8_t>(p);
      s.queue = static_cast<std::uint8_t>(q);
    }
  }
}

std::size_t RegisterFile::index(int port, int queue) const {
  if (port < 1 || port > data_ports_ || queue < 0 || queue >= nq_)
    throw std::out_of_range("register slot (" + std::to_string(port) + "," + std::to_string(queue) +
                            ") out of range");
  return static_cast<std::size_t>(port - 1) * static_cast<std::size_t>(nq_) +
         static_cast<std::size_t>(queue);
}

void RegisterFile::record(int port, int queue, std::uint16_t enq_qdepth, std::uint16_t deq_qdepth,
                          std::uint32_t deq_timedelta_us, std::uint32_t enq_timestamp_us,
                          std::uint64_t now_ns) {
  const std::size_t i = index(port, queue);
  TelemetrySlot& s = slots_[i];
  s.enq_qdepth = enq_qdepth;
  s.deq_qdepth = deq_qdepth;
  s.deq_timedelta_us = deq_timedelta_us;
  s.enq_timestamp_us = enq_timestamp_us;
  last_update_ns_[i] = now_ns;
}

const TelemetrySlot& RegisterFile::slot(int port, int queue) const { return slots_[index(port, queue)]; }

std::uint64_t RegisterFile::last_update_ns(int port, int queue) const {
  return last_update_ns_[index(port, queue)];
}

void Collector::ingest(std::uint16_t collector_switch, std::uint64_t arrival_us,
                       std::span<const std::uint8_t> probe_bytes) {
  const Probe probe = parse_probe(probe_bytes);
  const auto [probe_id, slots] = std::visit(
      [](const auto& p) { return std::pair{p.probe_id, std::cref(p.slots)}; }, probe);

  receipts_.push_back({probe_id, arrival_us, collector_switch, probe_bytes.size(), slots.get().size()});
  const auto key = std::pair{collector_switch, probe_id};
  if (++seen_[key] > 1)
    anomalies_.push_back("probe_id " + std::to_string(probe_id) + " received more than once at switch " +
                         std::to_string(collector_switch));

  for (const TelemetrySlot& s : slots.get()) {
    series_[{s.switch_id, s.port, s.queue}].push_back(
        {arrival_us, s.enq_qdepth, s.deq_qdepth, s.deq_timedelta_us});
  }
}

std::string series_csv(const std::map<SeriesKey, std::vector<SeriesSample>>& series,
                       std::uint16_t switch_id, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "time_us,switch,port,queue,enq_qdepth,deq_qdepth,deq_timedelta_us\n";
  // Rows sorted by time within the switch for plotting convenience.
  std::vector<std::tuple<std::uint64_t, SeriesKey, SeriesSample>> rows;
  for (const auto& [key, samples] : series) {
    if (key.switch_id != switch_id) continue;
    for (const auto& s : samples) rows.emplace_back(s.time_us, key, s);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
  for (const auto& [t, key, s] : rows) {
    os << t << ',' << names.at(key.switch_id) << ',' << int(key.port) << ',' << int(key.queue) << ','
       << s.enq_qdepth << ',' << s.deq_qdepth << ',' << s.deq_timedelta_us << '\n';
  }
  return os.str();
}

}  // namespace mmint::telemetry
