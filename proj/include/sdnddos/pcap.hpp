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

// Classic libpcap files (Ethernet link type) for interoperability with
// packet tools. Only headers are captured; orig_len includes the payload.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sdnddos/errors.hpp"
#include "sdnddos/traffic_model.hpp"

namespace sdnddos::pcap {

inline constexpr std::uint32_t kMagic = 0xa1b2c3d4;
inline constexpr std::uint32_t kLinkTypeEthernet = 1;
inline constexpr std::size_t kEthernetHeader = 14;
inline constexpr std::size_t kIpv4Header = 20;

namespace detail {

inline void put16be(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}
inline void put32be(std::vector<std::uint8_t>& b, std::uint32_t v) {
  put16be(b, static_cast<std::uint16_t>(v >> 16));
  put16be(b, static_cast<std::uint16_t>(v));
}
inline void put32le(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 24)};
  out.write(bytes, 4);
}
inline void put16le(std::ostream& out, std::uint16_t v) {
  const char bytes[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
  out.write(bytes, 2);
}
inline std::uint16_t get16be(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}
inline std::uint32_t get32be(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{get16be(b, at)} << 16) | get16be(b, at + 2);
}

inline std::uint16_t ip_checksum(std::span<const std::uint8_t> header) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i + 1 < header.size(); i += 2) sum += get16be(header, i);
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum);
}

inline std::size_t l4_header_size(Protocol p) {
  switch (p) {
    case Protocol::kTcp: return 20;
    case Protocol::kUdp: return 8;
    case Protocol::kIcmp: return 8;
  }
  return 0;
}

inline std::uint8_t ip_protocol_number(Protocol p) {
  switch (p) {
    case Protocol::kTcp: return 6;
    case Protocol::kUdp: return 17;
    case Protocol::kIcmp: return 1;
  }
  return 0;
}

// Wire bit of each TcpFlag, in kAllTcpFlags order.
inline constexpr std::array<std::uint8_t, 6> kWireFlagBits = {0x02, 0x10, 0x20, 0x01, 0x04, 0x08};

inline std::uint8_t wire_flags(TcpFlags f) {
  std::uint8_t w = 0;
  for (std::size_t i = 0; i < kAllTcpFlags.size(); ++i) {
    if (f.has(kAllTcpFlags[i])) w |= kWireFlagBits[i];
  }
  return w;
}

inline TcpFlags flags_from_wire(std::uint8_t w) {
  std::uint8_t bits = 0;
  for (std::size_t i = 0; i < kAllTcpFlags.size(); ++i) {
    if (w & kWireFlagBits[i]) bits |= static_cast<std::uint8_t>(kAllTcpFlags[i]);
  }
  return TcpFlags::from_bits(bits);
}

}  // namespace detail

// Headers of one packet as it appears on the wire, starting at Ethernet.
inline std::vector<std::uint8_t> encode_frame(const PacketHeader& p) {
  std::vector<std::uint8_t> b;
  // Ethernet: locally administered MACs derived from the IPs.
  auto mac = [&](Ipv4 ip) {
    b.push_back(0x02);
    b.push_back(0x00);
    detail::put32be(b, ip.value());
  };
  mac(p.dst_ip);
  mac(p.src_ip);
  detail::put16be(b, 0x0800);

  const std::size_t l4 = detail::l4_header_size(p.protocol);
  const std::uint64_t total = kIpv4Header + l4 + p.data_size;
  const std::size_t ip_at = b.size();
  b.push_back(0x45);
  b.push_back(0);
  detail::put16be(b, static_cast<std::uint16_t>(std::min<std::uint64_t>(total, 0xffff)));
  detail::put16be(b, 0);       // identification
  detail::put16be(b, 0x4000);  // DF, offset 0
  b.push_back(p.ttl);
  b.push_back(detail::ip_protocol_number(p.protocol));
  detail::put16be(b, 0);
  detail::put32be(b, p.src_ip.value());
  detail::put32be(b, p.dst_ip.value());
  const std::uint16_t csum = detail::ip_checksum(std::span(b).subspan(ip_at, kIpv4Header));
  b[ip_at + 10] = static_cast<std::uint8_t>(csum >> 8);
  b[ip_at + 11] = static_cast<std::uint8_t>(csum);

  switch (p.protocol) {
    case Protocol::kTcp:
      detail::put16be(b, p.src_port.value_or(0));
      detail::put16be(b, p.dst_port.value_or(0));
      detail::put32be(b, 0);  // seq
      detail::put32be(b, 0);  // ack
      b.push_back(0x50);
      b.push_back(detail::wire_flags(p.tcp_flags.value_or(TcpFlags{})));
      detail::put16be(b, p.window.value_or(0));
      detail::put16be(b, 0);  // checksum left unset
      detail::put16be(b, 0);
      break;
    case Protocol::kUdp:
      detail::put16be(b, p.src_port.value_or(0));
      detail::put16be(b, p.dst_port.value_or(0));
      detail::put16be(b, static_cast<std::uint16_t>(std::min<std::uint64_t>(8 + p.data_size, 0xffff)));
      detail::put16be(b, 0);
      break;
    case Protocol::kIcmp:
      b.push_back(p.icmp_type.value_or(0));
      b.push_back(p.icmp_code.value_or(0));
      detail::put16be(b, 0);
      detail::put32be(b, 0);
      break;
  }
  return b;
}

inline void write(std::ostream& out, std::span<const PacketHeader> packets) {
  detail::put32le(out, kMagic);
  detail::put16le(out, 2);
  detail::put16le(out, 4);
  detail::put32le(out, 0);  // thiszone
  detail::put32le(out, 0);  // sigfigs
  detail::put32le(out, 65535);
  detail::put32le(out, kLinkTypeEthernet);
  for (const PacketHeader& p : packets) {
    const auto frame = encode_frame(p);
    const auto micros = static_cast<std::uint64_t>(std::llround(p.timestamp * 1e6));
    detail::put32le(out, static_cast<std::uint32_t>(micros / 1'000'000));
    detail::put32le(out, static_cast<std::uint32_t>(micros % 1'000'000));
    detail::put32le(out, static_cast<std::uint32_t>(frame.size()));
    const std::uint64_t orig = frame.size() + std::uint64_t{p.data_size};
    detail::put32le(out, static_cast<std::uint32_t>(std::min<std::uint64_t>(orig, 0xffffffffu)));
    out.write(reinterpret_cast<const char*>(frame.data()), static_cast<std::streamsize>(frame.size()));
  }
}

struct ReadStats {
  std::size_t frames = 0;
  std::size_t non_ipv4 = 0;
  std::size_t unsupported_protocol = 0;
  std::size_t fragments = 0;
  std::size_t truncated = 0;
};

struct ReadOptions {
  bool rebase_time = false;  // shift timestamps so the first packet is at 0
};

inline std::vector<PacketHeader> read(std::istream& in, ReadStats* stats = nullptr,
                                      ReadOptions options = {}) {
  ReadStats local;
  ReadStats& st = stats ? *stats : local;
  std::array<std::uint8_t, 24> gh{};
  if (!in.read(reinterpret_cast<char*>(gh.data()), gh.size())) {
    throw ValidationError("pcap: missing global header");
  }
  auto le32 = [](const std::uint8_t* p) {
    return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
           std::uint32_t{p[3]} << 24;
  };
  auto be32 = [](const std::uint8_t* p) {
    return std::uint32_t{p[3]} | std::uint32_t{p[2]} << 8 | std::uint32_t{p[1]} << 16 |
           std::uint32_t{p[0]} << 24;
  };
  bool swapped = false;
  if (le32(gh.data()) == kMagic) {
    swapped = false;
  } else if (be32(gh.data()) == kMagic) {
    swapped = true;
  } else {
    throw ValidationError("pcap: unsupported magic number (only microsecond pcap is read)");
  }
  auto u32 = [&](const std::uint8_t* p) { return swapped ? be32(p) : le32(p); };
  if (u32(gh.data() + 20) != kLinkTypeEthernet) throw ValidationError("pcap: link type is not Ethernet");

  std::vector<PacketHeader> out;
  std::array<std::uint8_t, 16> rh{};
  std::vector<std::uint8_t> frame;
  std::size_t record = 0;
  while (in.read(reinterpret_cast<char*>(rh.data()), rh.size())) {
    ++record;
    const std::uint32_t caplen = u32(rh.data() + 8);
    const std::uint32_t orig = u32(rh.data() + 12);
    if (caplen > 262144) {
      throw ValidationError("pcap: record " + std::to_string(record) + " has implausible length");
    }
    frame.resize(caplen);
    if (!in.read(reinterpret_cast<char*>(frame.data()), caplen)) {
      throw ValidationError("pcap: record " + std::to_string(record) + " is truncated");
    }
    ++st.frames;
    const std::span<const std::uint8_t> f(frame);
    if (f.size() < kEthernetHeader + kIpv4Header || detail::get16be(f, 12) != 0x0800 ||
        (f[kEthernetHeader] >> 4) != 4) {
      ++st.non_ipv4;
      continue;
    }
    const std::size_t ip = kEthernetHeader;
    const std::size_t ihl = std::size_t{f[ip] & 0x0fu} * 4;
    if (ihl < kIpv4Header || f.size() < ip + ihl) {
      ++st.truncated;
      continue;
    }
    if ((detail::get16be(f, ip + 6) & 0x1fff) != 0) {
      ++st.fragments;
      continue;
    }
    PacketHeader p;
    p.timestamp = static_cast<double>(std::uint64_t{u32(rh.data())} * 1'000'000 + u32(rh.data() + 4)) / 1e6;
    p.ttl = f[ip + 8];
    p.src_ip = Ipv4(detail::get32be(f, ip + 12));
    p.dst_ip = Ipv4(detail::get32be(f, ip + 16));
    const std::size_t l4 = ip + ihl;
    const std::uint8_t proto = f[ip + 9];
    const std::uint16_t ip_total = detail::get16be(f, ip + 2);
    std::size_t header_len = 0;
    if (proto == 6) {
      if (f.size() < l4 + 20) { ++st.truncated; continue; }
      p.protocol = Protocol::kTcp;
      p.src_port = detail::get16be(f, l4);
      p.dst_port = detail::get16be(f, l4 + 2);
      header_len = static_cast<std::size_t>(f[l4 + 12] >> 4) * 4;
      p.tcp_flags = detail::flags_from_wire(f[l4 + 13]);
      p.window = detail::get16be(f, l4 + 14);
    } else if (proto == 17) {
      if (f.size() < l4 + 8) { ++st.truncated; continue; }
      p.protocol = Protocol::kUdp;
      p.src_port = detail::get16be(f, l4);
      p.dst_port = detail::get16be(f, l4 + 2);
      header_len = 8;
    } else if (proto == 1) {
      if (f.size() < l4 + 8) { ++st.truncated; continue; }
      p.protocol = Protocol::kIcmp;
      p.icmp_type = f[l4];
      p.icmp_code = f[l4 + 1];
      header_len = 8;
    } else {
      ++st.unsupported_protocol;
      continue;
    }
    // Payload size from the original length when the IP total is saturated.
    const std::uint64_t headers = kEthernetHeader + ihl + header_len;
    const std::uint64_t from_ip = ip_total >= ihl + header_len ? ip_total - ihl - header_len : 0;
    const std::uint64_t from_orig = orig >= headers ? orig - headers : 0;
    p.data_size = static_cast<std::uint32_t>(std::max(from_ip, from_orig));
    out.push_back(p);
  }
  if (options.rebase_time && !out.empty()) {
    const double base = out.front().timestamp;
    for (PacketHeader& p : out) p.timestamp = std::round((p.timestamp - base) * 1e6) / 1e6;
  }
  return out;
}

}  // namespace sdnddos::pcap
