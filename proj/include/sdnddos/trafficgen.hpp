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

// Seeded synthetic traffic: bidirectional background sessions between the
// network's hosts plus one-way TCP/UDP/ICMP floods against victims, with
// per-(host, interval) ground-truth labels.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sdnddos/errors.hpp"
#include "sdnddos/labels.hpp"
#include "sdnddos/random.hpp"
#include "sdnddos/traffic_model.hpp"

namespace sdnddos {

inline constexpr double kDefaultInterval = 60.0;

struct NormalProfile {
  double flows_per_minute = 6.0;  // sessions started by each host
  int min_exchanges = 1;          // request/response rounds per session
  int max_exchanges = 8;
  // Session mix; weights need not sum to one.
  double web_share = 0.6;
  double dns_share = 0.25;
  double ping_share = 0.15;
  // Share of DNS/ping sessions whose server never answers.
  double unanswered_share = 0.03;

  friend bool operator==(const NormalProfile&, const NormalProfile&) = default;
};

struct AttackSegment {
  double start = 0.0;
  double end = 0.0;
  std::uint8_t vectors = kVectorTcp;  // AttackVector bits
  Ipv4 victim;
  double packet_rate = 10.0;  // packets per second, per vector
  bool spoofing = true;

  TrafficClass traffic_class() const { return class_of_vectors(vectors); }
  friend bool operator==(const AttackSegment&, const AttackSegment&) = default;
};

struct ScenarioSpec {
  std::uint64_t seed = 1;
  double duration = 600.0;
  double interval = kDefaultInterval;
  std::vector<Ipv4> hosts;
  std::vector<Ipv4> victims;
  NormalProfile normal;
  std::vector<AttackSegment> attack_segments;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

inline void validate(const ScenarioSpec& spec) {
  auto fail = [](const std::string& why) { throw ValidationError("scenario: " + why); };
  if (!(spec.duration > 0.0) || !std::isfinite(spec.duration)) fail("duration must be positive");
  if (!(spec.interval > 0.0)) fail("interval must be positive");
  if (spec.hosts.empty()) fail("at least one host is required");
  std::set<Ipv4> hosts(spec.hosts.begin(), spec.hosts.end());
  if (hosts.size() != spec.hosts.size()) fail("duplicate host address");
  for (Ipv4 v : spec.victims) {
    if (!hosts.contains(v)) fail("victim " + v.to_string() + " is not one of the hosts");
  }
  const NormalProfile& n = spec.normal;
  if (n.flows_per_minute < 0.0) fail("flows_per_minute must be >= 0");
  if (n.flows_per_minute > 0.0 && spec.hosts.size() < 2) fail("normal traffic needs two hosts");
  if (n.min_exchanges < 1 || n.max_exchanges < n.min_exchanges) fail("bad exchange range");
  if (!(n.unanswered_share >= 0.0 && n.unanswered_share <= 1.0)) {
    fail("unanswered_share must lie in [0, 1]");
  }
  if (n.web_share < 0 || n.dns_share < 0 || n.ping_share < 0 ||
      n.web_share + n.dns_share + n.ping_share <= 0) {
    fail("session shares must be non-negative with a positive sum");
  }
  for (const AttackSegment& s : spec.attack_segments) {
    if (!(s.start >= 0.0 && s.start < s.end && s.end <= spec.duration)) {
      fail("attack segment must satisfy 0 <= start < end <= duration");
    }
    if ((s.vectors & 7u) == 0 || (s.vectors & ~7u) != 0) fail("attack vector set must be non-empty");
    if (!hosts.contains(s.victim)) fail("victim " + s.victim.to_string() + " is not one of the hosts");
    if (!(s.packet_rate > 0.0)) fail("packet_rate must be positive");
  }
}

// Ground truth keyed by (host, interval start).
using GroundTruth = std::map<std::pair<Ipv4, double>, TrafficClass>;

struct GeneratedTrace {
  std::vector<PacketHeader> packets;
  GroundTruth labels;
};

// Every host in every interval: the union of the vectors of segments that
// overlap the interval on that victim, N when there are none.
inline GroundTruth label_intervals(const ScenarioSpec& spec) {
  GroundTruth out;
  const auto count = static_cast<std::int64_t>(std::ceil(spec.duration / spec.interval));
  for (std::int64_t k = 0; k < count; ++k) {
    const double lo = static_cast<double>(k) * spec.interval;
    const double hi = lo + spec.interval;
    for (Ipv4 host : spec.hosts) {
      std::uint8_t vectors = 0;
      for (const AttackSegment& s : spec.attack_segments) {
        if (s.victim == host && s.start < hi && s.end > lo) vectors |= s.vectors;
      }
      out[{host, lo}] = class_of_vectors(vectors);
    }
  }
  return out;
}

namespace detail {

class Emitter {
 public:
  explicit Emitter(double duration) : duration_(duration) {}

  void emit(PacketHeader p) {
    if (p.timestamp < 0.0 || p.timestamp >= duration_) return;
    packets_.push_back({std::move(p), seq_++});
  }

  // Time order, ties broken by source address then emission order.
  std::vector<PacketHeader> finish() {
    std::sort(packets_.begin(), packets_.end(), [](const auto& a, const auto& b) {
      if (a.first.timestamp != b.first.timestamp) return a.first.timestamp < b.first.timestamp;
      if (a.first.src_ip != b.first.src_ip) return a.first.src_ip < b.first.src_ip;
      return a.second < b.second;
    });
    std::vector<PacketHeader> out;
    out.reserve(packets_.size());
    for (auto& [p, seq] : packets_) out.push_back(std::move(p));
    packets_.clear();
    return out;
  }

 private:
  double duration_;
  std::vector<std::pair<PacketHeader, std::uint64_t>> packets_;
  std::uint64_t seq_ = 0;
};

inline double quantize(double t) { return std::round(t * 1e6) / 1e6; }

inline std::uint16_t ephemeral_port(Rng& rng) {
  return static_cast<std::uint16_t>(rng.uniform_int(32768, 60999));
}

struct HostTraits {
  std::uint8_t ttl;
  std::uint16_t window;
};

inline HostTraits traits_for(Rng& rng) {
  static constexpr std::uint16_t kWindows[] = {29200, 64240, 65535, 8192, 28960};
  HostTraits t;
  t.ttl = rng.chance(0.6) ? 64 : 128;
  t.window = kWindows[rng.uniform_int(0, 4)];
  return t;
}

inline std::uint8_t hop_ttl(std::uint8_t base, Rng& rng) {
  return static_cast<std::uint8_t>(base - rng.uniform_int(0, 1));
}

inline void web_session(Emitter& out, Rng& rng, double t, Ipv4 client, HostTraits ct, Ipv4 server,
                        HostTraits st, const NormalProfile& np) {
  using F = TcpFlag;
  const std::uint16_t sport = ephemeral_port(rng);
  const std::uint16_t dport = rng.chance(0.7) ? 80 : 443;
  const double rtt = rng.uniform(0.001, 0.05);
  auto c2s = [&](double ts, TcpFlags f, std::uint32_t size) {
    out.emit(make_tcp(quantize(ts), client, sport, server, dport, f, size, hop_ttl(ct.ttl, rng),
                      ct.window));
  };
  auto s2c = [&](double ts, TcpFlags f, std::uint32_t size) {
    out.emit(make_tcp(quantize(ts), server, dport, client, sport, f, size, hop_ttl(st.ttl, rng),
                      st.window));
  };
  c2s(t, {F::kSyn}, 0);
  t += rtt / 2;
  s2c(t, {F::kSyn, F::kAck}, 0);
  t += rtt / 2;
  c2s(t, {F::kAck}, 0);
  const auto rounds = rng.uniform_int(np.min_exchanges, np.max_exchanges);
  for (std::int64_t r = 0; r < rounds; ++r) {
    t += rng.uniform(0.0, 0.5);
    c2s(t, {F::kPush, F::kAck}, static_cast<std::uint32_t>(rng.uniform_int(200, 800)));
    const auto segments = rng.uniform_int(1, 4);
    for (std::int64_t s = 0; s < segments; ++s) {
      t += rtt / 2;
      s2c(t, s + 1 == segments ? TcpFlags{F::kPush, F::kAck} : TcpFlags{F::kAck},
          static_cast<std::uint32_t>(rng.uniform_int(500, 1460)));
    }
    t += rtt / 2;
    c2s(t, {F::kAck}, 0);
  }
  t += rng.uniform(0.0, 0.2);
  c2s(t, {F::kFin, F::kAck}, 0);
  t += rtt / 2;
  s2c(t, {F::kFin, F::kAck}, 0);
  t += rtt / 2;
  c2s(t, {F::kAck}, 0);
}

inline void dns_session(Emitter& out, Rng& rng, double t, Ipv4 client, HostTraits ct, Ipv4 server,
                        HostTraits st, bool answered) {
  const std::uint16_t sport = ephemeral_port(rng);
  const double rtt = rng.uniform(0.001, 0.03);
  const auto queries = rng.uniform_int(1, 2);
  for (std::int64_t q = 0; q < queries; ++q) {
    out.emit(make_udp(quantize(t), client, sport, server, 53,
                      static_cast<std::uint32_t>(rng.uniform_int(30, 60)), hop_ttl(ct.ttl, rng)));
    t += rtt;
    const auto reply_size = static_cast<std::uint32_t>(rng.uniform_int(60, 400));
    const std::uint8_t reply_ttl = hop_ttl(st.ttl, rng);
    if (answered) out.emit(make_udp(quantize(t), server, 53, client, sport, reply_size, reply_ttl));
    t += rng.uniform(0.01, 0.2);
  }
}

inline void ping_session(Emitter& out, Rng& rng, double t, Ipv4 client, HostTraits ct, Ipv4 server,
                         HostTraits st, bool answered) {
  const double rtt = rng.uniform(0.001, 0.02);
  const auto count = rng.uniform_int(1, 4);
  const std::uint32_t size = rng.chance(0.5) ? 56 : 32;
  for (std::int64_t i = 0; i < count; ++i) {
    const double ts = t + static_cast<double>(i);
    out.emit(make_icmp(quantize(ts), client, server, 8, 0, size, hop_ttl(ct.ttl, rng)));
    const std::uint8_t reply_ttl = hop_ttl(st.ttl, rng);
    if (answered) out.emit(make_icmp(quantize(ts + rtt), server, client, 0, 0, size, reply_ttl));
  }
}

// Random public-looking unicast source outside the host set.
inline Ipv4 spoofed_source(Rng& rng, const std::set<Ipv4>& hosts) {
  for (;;) {
    const auto first = static_cast<std::uint8_t>(rng.uniform_int(1, 223));
    if (first == 10 || first == 127) continue;
    Ipv4 ip((std::uint32_t{first} << 24) | static_cast<std::uint32_t>(rng.bits() & 0xffffff));
    if (!hosts.contains(ip)) return ip;
  }
}

inline void attack_segment(Emitter& out, Rng& rng, const AttackSegment& seg,
                           const std::set<Ipv4>& hosts) {
  std::vector<Ipv4> attackers;
  if (!seg.spoofing) {
    for (int i = 0; i < 10; ++i) attackers.push_back(spoofed_source(rng, hosts));
  }
  auto source = [&]() {
    return seg.spoofing ? spoofed_source(rng, hosts)
                        : attackers[static_cast<std::size_t>(rng.uniform_int(0, 9))];
  };
  auto ttl = [&]() { return static_cast<std::uint8_t>(rng.uniform_int(30, 255)); };
  auto size = [&](std::int64_t hi) { return static_cast<std::uint32_t>(rng.uniform_int(0, hi)); };

  for (std::uint8_t vector : {kVectorTcp, kVectorUdp, kVectorIcmp}) {
    if ((seg.vectors & vector) == 0) continue;
    // Fixed service port for half the floods, random ports otherwise.
    const bool fixed_port = rng.chance(0.5);
    const auto port = static_cast<std::uint16_t>(rng.chance(0.5) ? 80 : rng.uniform_int(1, 1024));
    auto dst_port = [&]() {
      return fixed_port ? port : static_cast<std::uint16_t>(rng.uniform_int(1, 65535));
    };
    for (double t = seg.start + rng.exponential(seg.packet_rate); t < seg.end;
         t += rng.exponential(seg.packet_rate)) {
      const double ts = quantize(t);
      if (ts >= seg.end) break;
      const auto sport = static_cast<std::uint16_t>(rng.uniform_int(1024, 65535));
      switch (vector) {
        case kVectorTcp:
          out.emit(make_tcp(ts, source(), sport, seg.victim, dst_port(), {TcpFlag::kSyn},
                            size(1200), ttl(),
                            static_cast<std::uint16_t>(rng.uniform_int(512, 65535))));
          break;
        case kVectorUdp:
          out.emit(make_udp(ts, source(), sport, seg.victim, dst_port(), size(1400), ttl()));
          break;
        default:
          out.emit(make_icmp(ts, source(), seg.victim, 8, 0, size(1400), ttl()));
          break;
      }
    }
  }
}

}  // namespace detail

inline GeneratedTrace generate(const ScenarioSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  detail::Emitter out(spec.duration);
  const std::set<Ipv4> host_set(spec.hosts.begin(), spec.hosts.end());

  std::vector<detail::HostTraits> traits;
  for (std::size_t i = 0; i < spec.hosts.size(); ++i) traits.push_back(detail::traits_for(rng));

  const NormalProfile& np = spec.normal;
  const double share_total = np.web_share + np.dns_share + np.ping_share;
  if (np.flows_per_minute > 0.0) {
    const double rate = np.flows_per_minute / 60.0;
    for (std::size_t c = 0; c < spec.hosts.size(); ++c) {
      for (double t = rng.exponential(rate); t < spec.duration; t += rng.exponential(rate)) {
        auto s = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(spec.hosts.size()) - 2));
        if (s >= c) ++s;
        const double pick = rng.uniform() * share_total;
        const Ipv4 client = spec.hosts[c], server = spec.hosts[s];
        const bool answered = !rng.chance(np.unanswered_share);
        if (pick < np.web_share) {
          detail::web_session(out, rng, t, client, traits[c], server, traits[s], np);
        } else if (pick < np.web_share + np.dns_share) {
          detail::dns_session(out, rng, t, client, traits[c], server, traits[s], answered);
        } else {
          detail::ping_session(out, rng, t, client, traits[c], server, traits[s], answered);
        }
      }
    }
  }
  for (const AttackSegment& seg : spec.attack_segments) {
    detail::attack_segment(out, rng, seg, host_set);
  }
  return GeneratedTrace{out.finish(), label_intervals(spec)};
}

// Bundled scenario: ten hosts for four hours, five of them victims of 5-minute
// floods that cycle through all seven attack classes (at least 105 attacked
// intervals per class). Flood rates are 10x-100x a host's normal session rate.
inline ScenarioSpec default_scenario(std::uint64_t seed) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.duration = 240 * 60.0;
  for (std::uint8_t i = 1; i <= 10; ++i) spec.hosts.emplace_back(10, 0, 0, i);
  spec.victims.assign(spec.hosts.begin(), spec.hosts.begin() + 5);

  Rng rng(seed ^ 0x5ce9a210ULL);
  const double normal_rate = spec.normal.flows_per_minute / 60.0;
  static constexpr TrafficClass kAttackClasses[] = {
      TrafficClass::T, TrafficClass::U, TrafficClass::I, TrafficClass::TU,
      TrafficClass::TI, TrafficClass::UI, TrafficClass::A};
  for (int v = 0; v < 5; ++v) {
    for (int k = 0; k < 30; ++k) {
      AttackSegment seg;
      const int start_minute = 2 + 8 * k + (v % 2);
      seg.start = start_minute * 60.0;
      seg.end = seg.start + 5 * 60.0;
      seg.vectors = vectors_of_class(kAttackClasses[(k + 3 * v) % 7]);
      seg.victim = spec.victims[static_cast<std::size_t>(v)];
      seg.packet_rate = normal_rate * rng.uniform(10.0, 100.0);
      seg.spoofing = true;
      spec.attack_segments.push_back(seg);
    }
  }
  return spec;
}

}  // namespace sdnddos
