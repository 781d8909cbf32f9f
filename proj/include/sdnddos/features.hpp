/*
 * Copyright 2026 The sdnddos Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Per-host flow features over one collection interval.
//
// Layout of the 68 features (1-based numbering, as in the column names
// f1..f68 of the dataset files):
//
//   TCP  1-34   counts and protocol shares (1-4), symmetric/asymmetric
//               shares (5-6), src IP (7-8), bytes and packets per flow
//               medians (9-12), window (13-14), TTL (15-16), src port
//               (17-18), dst port (19-20), dst port <=1024 / >1024 (21-22),
//               SYN ACK URG FIN RST PUSH flow shares, in/out (23-34)
//   UDP  35-54  counts and shares (35-38), symmetric/asymmetric (39-40),
//               src IP (41-42), medians (43-46), src port (47-48), dst port
//               (49-50), port ranges (51-52), TTL (53-54)
//   ICMP 55-68  counts and shares (55-58), symmetric share (59),
//               asymmetric count (60), src IP (61-62), medians (63-66),
//               TTL (67-68)
//
// Distinct-value features count incoming flows, entropies use the number of
// incoming flows carrying each value as frequency. "Incoming" means
// dst_ip == host, "outgoing" src_ip == host. Empty denominators give 0.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "sdnddos/traffic_model.hpp"

namespace sdnddos {

inline constexpr std::size_t kFeatureCount = 68;

struct FeatureVector {
  std::array<double, kFeatureCount> values{};
  Ipv4 host;
  double interval_start = 0.0;

  // 1-based feature number.
  double feature(std::size_t number) const { return values.at(number - 1); }
  double& feature(std::size_t number) { return values.at(number - 1); }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

using FlowPackets = std::map<FlowKey, std::vector<PacketHeader>>;

struct HostFlowView {
  Ipv4 host;
  std::array<FlowPackets, 3> incoming;  // indexed by Protocol
  std::array<FlowPackets, 3> outgoing;

  const FlowPackets& in(Protocol p) const { return incoming[static_cast<std::size_t>(p)]; }
  const FlowPackets& out(Protocol p) const { return outgoing[static_cast<std::size_t>(p)]; }
};

// One view per destination host, ordered by address.
inline std::vector<HostFlowView> group_by_host(std::span<const PacketHeader> snapshot) {
  std::map<Ipv4, HostFlowView> views;
  for (const PacketHeader& pkt : snapshot) {
    HostFlowView& v = views[pkt.dst_ip];
    v.host = pkt.dst_ip;
    v.incoming[static_cast<std::size_t>(pkt.protocol)][flow_key_of(pkt)].push_back(pkt);
  }
  for (const PacketHeader& pkt : snapshot) {
    auto it = views.find(pkt.src_ip);
    if (it == views.end()) continue;
    it->second.outgoing[static_cast<std::size_t>(pkt.protocol)][flow_key_of(pkt)].push_back(pkt);
  }
  std::vector<HostFlowView> out;
  out.reserve(views.size());
  for (auto& [host, view] : views) out.push_back(std::move(view));
  return out;
}

// Shannon entropy in bits of a frequency table. Empty input gives 0.
inline double entropy(std::span<const std::uint64_t> freqs) {
  double total = 0.0;
  for (auto f : freqs) total += static_cast<double>(f);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (auto f : freqs) {
    if (f == 0) continue;
    const double p = static_cast<double>(f) / total;
    h -= p * std::log2(p);
  }
  return h;
}

// Median with the mean-of-middle-pair convention for even sizes; 0 if empty.
inline double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return (lower + upper) / 2.0;
}

namespace detail {

inline double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// Distinct count and entropy of a per-flow attribute. Each flow contributes
// every distinct value it exhibits exactly once.
struct ValueStats {
  std::map<std::uint64_t, std::uint64_t> flows_per_value;

  void add_flow(const std::set<std::uint64_t>& values) {
    for (auto v : values) ++flows_per_value[v];
  }
  double distinct() const { return static_cast<double>(flows_per_value.size()); }
  double bits() const {
    std::vector<std::uint64_t> freqs;
    freqs.reserve(flows_per_value.size());
    for (const auto& [value, n] : flows_per_value) freqs.push_back(n);
    return entropy(freqs);
  }
};

struct ProtocolStats {
  double in_flows = 0, out_flows = 0;
  double symmetric_in = 0;
  double low_port_in = 0, high_port_in = 0;
  ValueStats src_ip, src_port, dst_port, ttl, window;
  std::vector<double> in_bytes, in_packets, out_bytes, out_packets;
  std::array<double, 6> flag_in{}, flag_out{};
};

inline ProtocolStats protocol_stats(const HostFlowView& view, Protocol proto) {
  ProtocolStats s;
  const FlowPackets& in = view.in(proto);
  const FlowPackets& out = view.out(proto);
  s.in_flows = static_cast<double>(in.size());
  s.out_flows = static_cast<double>(out.size());

  for (const auto& [key, packets] : in) {
    if (auto sym = symmetric_of(key); sym && out.contains(*sym)) s.symmetric_in += 1;
    if (proto != Protocol::kIcmp) {
      (key.dst_port <= 1024 ? s.low_port_in : s.high_port_in) += 1;
      s.src_port.add_flow({key.src_port});
      s.dst_port.add_flow({key.dst_port});
    }
    s.src_ip.add_flow({key.src_ip.value()});

    std::set<std::uint64_t> ttls, windows;
    double bytes = 0;
    std::uint8_t flags = 0;
    for (const PacketHeader& p : packets) {
      ttls.insert(p.ttl);
      if (p.window) windows.insert(*p.window);
      if (p.tcp_flags) flags |= p.tcp_flags->bits();
      bytes += p.data_size;
    }
    s.ttl.add_flow(ttls);
    s.window.add_flow(windows);
    s.in_bytes.push_back(bytes);
    s.in_packets.push_back(static_cast<double>(packets.size()));
    for (std::size_t f = 0; f < kAllTcpFlags.size(); ++f) {
      if (flags & static_cast<std::uint8_t>(kAllTcpFlags[f])) s.flag_in[f] += 1;
    }
  }
  for (const auto& [key, packets] : out) {
    double bytes = 0;
    std::uint8_t flags = 0;
    for (const PacketHeader& p : packets) {
      bytes += p.data_size;
      if (p.tcp_flags) flags |= p.tcp_flags->bits();
    }
    s.out_bytes.push_back(bytes);
    s.out_packets.push_back(static_cast<double>(packets.size()));
    for (std::size_t f = 0; f < kAllTcpFlags.size(); ++f) {
      if (flags & static_cast<std::uint8_t>(kAllTcpFlags[f])) s.flag_out[f] += 1;
    }
  }
  return s;
}

}  // namespace detail

inline FeatureVector extract(const HostFlowView& view, double interval_start = 0.0) {
  using detail::ratio;
  const auto tcp = detail::protocol_stats(view, Protocol::kTcp);
  const auto udp = detail::protocol_stats(view, Protocol::kUdp);
  const auto icmp = detail::protocol_stats(view, Protocol::kIcmp);
  const double total_in = tcp.in_flows + udp.in_flows + icmp.in_flows;
  const double total_out = tcp.out_flows + udp.out_flows + icmp.out_flows;

  FeatureVector fv;
  fv.host = view.host;
  fv.interval_start = interval_start;
  auto set = [&fv](std::size_t n, double v) { fv.feature(n) = v; };

  // TCP
  set(1, tcp.in_flows);
  set(2, ratio(tcp.in_flows, total_in));
  set(3, tcp.out_flows);
  set(4, ratio(tcp.out_flows, total_out));
  set(5, ratio(tcp.symmetric_in, tcp.in_flows));
  set(6, tcp.in_flows > 0 ? 1.0 - fv.feature(5) : 0.0);
  set(7, tcp.src_ip.distinct());
  set(8, tcp.src_ip.bits());
  set(9, median(tcp.in_bytes));
  set(10, median(tcp.out_bytes));
  set(11, median(tcp.in_packets));
  set(12, median(tcp.out_packets));
  set(13, tcp.window.distinct());
  set(14, tcp.window.bits());
  set(15, tcp.ttl.distinct());
  set(16, tcp.ttl.bits());
  set(17, tcp.src_port.distinct());
  set(18, tcp.src_port.bits());
  set(19, tcp.dst_port.distinct());
  set(20, tcp.dst_port.bits());
  set(21, ratio(tcp.low_port_in, tcp.in_flows));
  set(22, ratio(tcp.high_port_in, tcp.in_flows));
  for (std::size_t f = 0; f < kAllTcpFlags.size(); ++f) {
    set(23 + 2 * f, ratio(tcp.flag_in[f], tcp.in_flows));
    set(24 + 2 * f, ratio(tcp.flag_out[f], tcp.out_flows));
  }

  // UDP
  set(35, udp.in_flows);
  set(36, ratio(udp.in_flows, total_in));
  set(37, udp.out_flows);
  set(38, ratio(udp.out_flows, total_out));
  set(39, ratio(udp.symmetric_in, udp.in_flows));
  set(40, udp.in_flows > 0 ? 1.0 - fv.feature(39) : 0.0);
  set(41, udp.src_ip.distinct());
  set(42, udp.src_ip.bits());
  set(43, median(udp.in_bytes));
  set(44, median(udp.out_bytes));
  set(45, median(udp.in_packets));
  set(46, median(udp.out_packets));
  set(47, udp.src_port.distinct());
  set(48, udp.src_port.bits());
  set(49, udp.dst_port.distinct());
  set(50, udp.dst_port.bits());
  set(51, ratio(udp.low_port_in, udp.in_flows));
  set(52, ratio(udp.high_port_in, udp.in_flows));
  set(53, udp.ttl.distinct());
  set(54, udp.ttl.bits());

  // ICMP; 60 is a count, not a share.
  set(55, icmp.in_flows);
  set(56, ratio(icmp.in_flows, total_in));
  set(57, icmp.out_flows);
  set(58, ratio(icmp.out_flows, total_out));
  set(59, ratio(icmp.symmetric_in, icmp.in_flows));
  set(60, icmp.in_flows - icmp.symmetric_in);
  set(61, icmp.src_ip.distinct());
  set(62, icmp.src_ip.bits());
  set(63, median(icmp.in_bytes));
  set(64, median(icmp.out_bytes));
  set(65, median(icmp.in_packets));
  set(66, median(icmp.out_packets));
  set(67, icmp.ttl.distinct());
  set(68, icmp.ttl.bits());
  return fv;
}

// All host vectors of one interval snapshot, ordered by host address.
inline std::vector<FeatureVector> extract_interval(std::span<const PacketHeader> snapshot,
                                                   double interval_start) {
  std::vector<FeatureVector> out;
  for (const HostFlowView& view : group_by_host(snapshot)) {
    out.push_back(extract(view, interval_start));
  }
  return out;
}

}  // namespace sdnddos
