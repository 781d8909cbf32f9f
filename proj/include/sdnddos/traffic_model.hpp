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

// Packets, flows and the symmetric-flow relation shared by every stage of
// the detector.

#pragma once

#include <array>
#include <charconv>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "sdnddos/errors.hpp"

namespace sdnddos {

class Ipv4 {
 public:
  constexpr Ipv4() = default;
  constexpr explicit Ipv4(std::uint32_t value) : value_(value) {}
  constexpr Ipv4(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d)
      : value_((std::uint32_t{a} << 24) | (std::uint32_t{b} << 16) |
               (std::uint32_t{c} << 8) | std::uint32_t{d}) {}

  constexpr std::uint32_t value() const { return value_; }

  // Dotted quad. Rejects anything else, including leading/trailing junk.
  static std::optional<Ipv4> parse(std::string_view text) {
    std::uint32_t value = 0;
    const char* p = text.data();
    const char* end = text.data() + text.size();
    for (int octet = 0; octet < 4; ++octet) {
      if (octet > 0) {
        if (p == end || *p != '.') return std::nullopt;
        ++p;
      }
      unsigned part = 0;
      auto [next, ec] = std::from_chars(p, end, part);
      if (ec != std::errc() || next == p || next - p > 3 || part > 255) return std::nullopt;
      p = next;
      value = (value << 8) | part;
    }
    if (p != end) return std::nullopt;
    return Ipv4(value);
  }

  std::string to_string() const {
    return std::to_string(value_ >> 24) + '.' + std::to_string((value_ >> 16) & 0xff) + '.' +
           std::to_string((value_ >> 8) & 0xff) + '.' + std::to_string(value_ & 0xff);
  }

  friend constexpr auto operator<=>(const Ipv4&, const Ipv4&) = default;

 private:
  std::uint32_t value_ = 0;
};

enum class Protocol : std::uint8_t { kTcp = 0, kUdp = 1, kIcmp = 2 };

inline constexpr std::array<Protocol, 3> kAllProtocols = {Protocol::kTcp, Protocol::kUdp,
                                                          Protocol::kIcmp};

inline std::string_view protocol_name(Protocol p) {
  switch (p) {
    case Protocol::kTcp: return "TCP";
    case Protocol::kUdp: return "UDP";
    case Protocol::kIcmp: return "ICMP";
  }
  return "?";
}

inline std::optional<Protocol> parse_protocol(std::string_view name) {
  if (name == "TCP") return Protocol::kTcp;
  if (name == "UDP") return Protocol::kUdp;
  if (name == "ICMP") return Protocol::kIcmp;
  return std::nullopt;
}

enum class TcpFlag : std::uint8_t {
  kSyn = 1u << 0,
  kAck = 1u << 1,
  kUrg = 1u << 2,
  kFin = 1u << 3,
  kRst = 1u << 4,
  kPush = 1u << 5,
};

// Canonical order, also the order of the flag features.
inline constexpr std::array<TcpFlag, 6> kAllTcpFlags = {TcpFlag::kSyn, TcpFlag::kAck,
                                                        TcpFlag::kUrg, TcpFlag::kFin,
                                                        TcpFlag::kRst, TcpFlag::kPush};
inline constexpr std::string_view kTcpFlagLetters = "SAUFRP";

class TcpFlags {
 public:
  constexpr TcpFlags() = default;
  constexpr TcpFlags(std::initializer_list<TcpFlag> flags) {
    for (TcpFlag f : flags) bits_ |= static_cast<std::uint8_t>(f);
  }
  static constexpr TcpFlags from_bits(std::uint8_t bits) {
    TcpFlags f;
    f.bits_ = bits & 0x3f;
    return f;
  }

  constexpr bool has(TcpFlag f) const { return (bits_ & static_cast<std::uint8_t>(f)) != 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  std::string to_letters() const {
    std::string out;
    for (std::size_t i = 0; i < kAllTcpFlags.size(); ++i) {
      if (has(kAllTcpFlags[i])) out.push_back(kTcpFlagLetters[i]);
    }
    return out;
  }

  static std::optional<TcpFlags> parse_letters(std::string_view letters) {
    TcpFlags f;
    for (char c : letters) {
      auto pos = kTcpFlagLetters.find(c);
      if (pos == std::string_view::npos) return std::nullopt;
      f.bits_ |= static_cast<std::uint8_t>(kAllTcpFlags[pos]);
    }
    return f;
  }

  friend constexpr bool operator==(const TcpFlags&, const TcpFlags&) = default;

 private:
  std::uint8_t bits_ = 0;
};

// One captured packet. Ports, flags and window exist only for the protocols
// that carry them; ICMP type/code only for ICMP.
struct PacketHeader {
  double timestamp = 0.0;
  Ipv4 src_ip;
  Ipv4 dst_ip;
  Protocol protocol = Protocol::kTcp;
  std::optional<std::uint16_t> src_port;
  std::optional<std::uint16_t> dst_port;
  std::optional<std::uint8_t> icmp_type;
  std::optional<std::uint8_t> icmp_code;
  std::uint32_t data_size = 0;
  std::uint8_t ttl = 64;
  std::optional<TcpFlags> tcp_flags;
  std::optional<std::uint16_t> window;

  friend bool operator==(const PacketHeader&, const PacketHeader&) = default;
};

inline PacketHeader make_tcp(double ts, Ipv4 src, std::uint16_t sport, Ipv4 dst,
                             std::uint16_t dport, TcpFlags flags, std::uint32_t size = 0,
                             std::uint8_t ttl = 64, std::uint16_t window = 29200) {
  PacketHeader p;
  p.timestamp = ts;
  p.src_ip = src;
  p.dst_ip = dst;
  p.protocol = Protocol::kTcp;
  p.src_port = sport;
  p.dst_port = dport;
  p.data_size = size;
  p.ttl = ttl;
  p.tcp_flags = flags;
  p.window = window;
  return p;
}

inline PacketHeader make_udp(double ts, Ipv4 src, std::uint16_t sport, Ipv4 dst,
                             std::uint16_t dport, std::uint32_t size = 0, std::uint8_t ttl = 64) {
  PacketHeader p;
  p.timestamp = ts;
  p.src_ip = src;
  p.dst_ip = dst;
  p.protocol = Protocol::kUdp;
  p.src_port = sport;
  p.dst_port = dport;
  p.data_size = size;
  p.ttl = ttl;
  return p;
}

inline PacketHeader make_icmp(double ts, Ipv4 src, Ipv4 dst, std::uint8_t type,
                              std::uint8_t code, std::uint32_t size = 0, std::uint8_t ttl = 64) {
  PacketHeader p;
  p.timestamp = ts;
  p.src_ip = src;
  p.dst_ip = dst;
  p.protocol = Protocol::kIcmp;
  p.icmp_type = type;
  p.icmp_code = code;
  p.data_size = size;
  p.ttl = ttl;
  return p;
}

// Checks the per-protocol presence rules.
inline bool is_well_formed(const PacketHeader& p) {
  const bool l4 = p.protocol == Protocol::kTcp || p.protocol == Protocol::kUdp;
  if (l4 != (p.src_port.has_value() && p.dst_port.has_value())) return false;
  if (!l4 && (p.src_port || p.dst_port)) return false;
  const bool icmp = p.protocol == Protocol::kIcmp;
  if (icmp != (p.icmp_type.has_value() && p.icmp_code.has_value())) return false;
  if (!icmp && (p.icmp_type || p.icmp_code)) return false;
  const bool tcp = p.protocol == Protocol::kTcp;
  if (tcp != (p.tcp_flags.has_value() && p.window.has_value())) return false;
  if (!tcp && (p.tcp_flags || p.window)) return false;
  return p.timestamp >= 0.0;
}

// Exact-match flow identity. For TCP/UDP the ICMP fields are zero; for ICMP
// the port fields are zero. Use the factories to keep that true.
struct FlowKey {
  Protocol protocol = Protocol::kTcp;
  Ipv4 src_ip;
  Ipv4 dst_ip;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint8_t icmp_type = 0;
  std::uint8_t icmp_code = 0;

  static FlowKey transport(Protocol proto, Ipv4 src, std::uint16_t sport, Ipv4 dst,
                           std::uint16_t dport) {
    return FlowKey{proto, src, dst, sport, dport, 0, 0};
  }
  static FlowKey icmp(Ipv4 src, Ipv4 dst, std::uint8_t type, std::uint8_t code) {
    return FlowKey{Protocol::kIcmp, src, dst, 0, 0, type, code};
  }

  friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
};

inline FlowKey flow_key_of(const PacketHeader& pkt) {
  if (pkt.protocol == Protocol::kIcmp) {
    return FlowKey::icmp(pkt.src_ip, pkt.dst_ip, pkt.icmp_type.value_or(0),
                         pkt.icmp_code.value_or(0));
  }
  return FlowKey::transport(pkt.protocol, pkt.src_ip, pkt.src_port.value_or(0), pkt.dst_ip,
                            pkt.dst_port.value_or(0));
}

// Request/response pairs of the ICMP type registry: echo, timestamp,
// information, address mask.
inline std::optional<std::uint8_t> icmp_counterpart_type(std::uint8_t type) {
  switch (type) {
    case 8: return std::uint8_t{0};
    case 0: return std::uint8_t{8};
    case 13: return std::uint8_t{14};
    case 14: return std::uint8_t{13};
    case 15: return std::uint8_t{16};
    case 16: return std::uint8_t{15};
    case 17: return std::uint8_t{18};
    case 18: return std::uint8_t{17};
    default: return std::nullopt;
  }
}

// Reverse-direction counterpart. ICMP keys keep their code; types without a
// request/response partner have no counterpart.
inline std::optional<FlowKey> symmetric_of(const FlowKey& key) {
  if (key.protocol == Protocol::kIcmp) {
    auto type = icmp_counterpart_type(key.icmp_type);
    if (!type) return std::nullopt;
    return FlowKey::icmp(key.dst_ip, key.src_ip, *type, key.icmp_code);
  }
  return FlowKey::transport(key.protocol, key.dst_ip, key.dst_port, key.src_ip, key.src_port);
}

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& k) const noexcept {
    std::uint64_t a = (std::uint64_t{k.src_ip.value()} << 32) | k.dst_ip.value();
    std::uint64_t b = (std::uint64_t{k.src_port} << 32) | (std::uint64_t{k.dst_port} << 16) |
                      (std::uint64_t{k.icmp_type} << 8) | k.icmp_code;
    b ^= std::uint64_t{static_cast<std::uint8_t>(k.protocol)} << 48;
    // splitmix64 finalizer on the combined words
    std::uint64_t h = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace sdnddos

template <>
struct std::hash<sdnddos::FlowKey> : sdnddos::FlowKeyHash {};
