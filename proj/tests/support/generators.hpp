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

// Random inputs for property tests.

#pragma once

#include <cstdint>
#include <vector>

#include "sdnddos/labels.hpp"
#include "sdnddos/random.hpp"
#include "sdnddos/traffic_model.hpp"

namespace sdnddos::testing {

template <typename T, std::size_t N>
T pick(Rng& rng, const T (&pool)[N]) {
  return pool[rng.uniform_int(0, static_cast<std::int64_t>(N) - 1)];
}

// Small value pools so flows, replies and repeated values actually collide.
inline PacketHeader random_packet(Rng& rng, double ts, int host_pool = 4) {
  static constexpr std::uint16_t kPorts[] = {22, 53, 80, 1024, 1025, 40000, 51234};
  static constexpr std::uint8_t kIcmpTypes[] = {0, 8, 13, 14, 3, 17};
  static constexpr std::uint8_t kTtls[] = {32, 64, 128, 255};
  static constexpr std::uint16_t kWindows[] = {0, 1024, 29200};
  const Ipv4 src(10, 0, 0, static_cast<std::uint8_t>(rng.uniform_int(1, host_pool)));
  const Ipv4 dst(10, 0, 0, static_cast<std::uint8_t>(rng.uniform_int(1, host_pool)));
  const auto size = static_cast<std::uint32_t>(rng.uniform_int(0, 1500));
  const std::uint8_t ttl = pick(rng, kTtls);
  switch (rng.uniform_int(0, 2)) {
    case 0:
      return make_tcp(ts, src, pick(rng, kPorts), dst, pick(rng, kPorts),
                      TcpFlags::from_bits(static_cast<std::uint8_t>(rng.uniform_int(0, 63))), size,
                      ttl, pick(rng, kWindows));
    case 1:
      return make_udp(ts, src, pick(rng, kPorts), dst, pick(rng, kPorts), size, ttl);
    default:
      return make_icmp(ts, src, dst, pick(rng, kIcmpTypes),
                       static_cast<std::uint8_t>(rng.uniform_int(0, 1)), size, ttl);
  }
}

inline std::vector<PacketHeader> random_snapshot(Rng& rng, std::size_t max_packets) {
  const auto n = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(max_packets)));
  std::vector<PacketHeader> out;
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t += rng.uniform(0.0, 0.5);
    out.push_back(random_packet(rng, t));
    // Sometimes answer the packet so symmetric flows show up.
    if (out.size() < max_packets && rng.chance(0.3)) {
      const auto sym = symmetric_of(flow_key_of(out.back()));
      if (sym) {
        PacketHeader reply = out.back();
        reply.src_ip = sym->src_ip;
        reply.dst_ip = sym->dst_ip;
        if (reply.protocol == Protocol::kIcmp) {
          reply.icmp_type = sym->icmp_type;
        } else {
          reply.src_port = sym->src_port;
          reply.dst_port = sym->dst_port;
        }
        reply.timestamp = t += 0.01;
        out.push_back(reply);
        ++i;
      }
    }
  }
  return out;
}

inline std::vector<int> random_labels(Rng& rng, std::size_t n, int classes) {
  std::vector<int> out(n);
  for (int& y : out) y = static_cast<int>(rng.uniform_int(0, classes - 1));
  return out;
}

}  // namespace sdnddos::testing
