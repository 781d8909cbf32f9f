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

// Single OpenFlow-style switch in reactive mode: exact-match flow table with
// counters and idle timeouts, table-miss events towards the controller, and
// an egress log of everything it forwards.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sdnddos/errors.hpp"
#include "sdnddos/traffic_model.hpp"

namespace sdnddos {

using PortId = std::uint32_t;

inline constexpr double kDefaultIdleTimeout = 60.0;

// Host-to-port wiring. Destinations not listed leave through the uplink.
struct Topology {
  std::map<Ipv4, PortId> host_ports;
  PortId uplink_port = 0;
  PortId port_count = 1;
  double idle_timeout = kDefaultIdleTimeout;

  PortId port_for(Ipv4 dst) const {
    auto it = host_ports.find(dst);
    return it == host_ports.end() ? uplink_port : it->second;
  }

  // Plain-text key=value config:
  //   idle_timeout = 60
  //   uplink = 0
  //   ports = 16            (optional; defaults to highest id + 1)
  //   host.10.0.0.1 = 1
  // '#' starts a comment.
  static Topology parse(std::istream& in) {
    Topology topo;
    std::optional<PortId> declared_ports;
    PortId highest = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        const char* ws = " \t\r";
        s.erase(0, s.find_first_not_of(ws));
        s.erase(s.find_last_not_of(ws) + 1);
        return s;
      };
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ValidationError("topology line " + std::to_string(line_no) + ": expected key=value");
      }
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      auto bad = [&](const std::string& why) {
        return ValidationError("topology line " + std::to_string(line_no) + ": " + why);
      };
      auto as_port = [&](const std::string& v) {
        unsigned long long n = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
        if (ec != std::errc() || p != v.data() + v.size() || n > 0xffffffffULL) {
          throw bad("invalid port id '" + v + "'");
        }
        return static_cast<PortId>(n);
      };
      if (key == "idle_timeout") {
        try {
          std::size_t used = 0;
          topo.idle_timeout = std::stod(value, &used);
          if (used != value.size() || !(topo.idle_timeout > 0)) throw bad("bad idle_timeout");
        } catch (const std::logic_error&) {
          throw bad("bad idle_timeout '" + value + "'");
        }
      } else if (key == "uplink") {
        topo.uplink_port = as_port(value);
        highest = std::max(highest, topo.uplink_port);
      } else if (key == "ports") {
        declared_ports = as_port(value);
      } else if (key.rfind("host.", 0) == 0) {
        auto ip = Ipv4::parse(key.substr(5));
        if (!ip) throw bad("invalid IPv4 in '" + key + "'");
        PortId port = as_port(value);
        topo.host_ports[*ip] = port;
        highest = std::max(highest, port);
      } else {
        throw bad("unknown key '" + key + "'");
      }
    }
    topo.port_count = declared_ports.value_or(highest + 1);
    if (highest >= topo.port_count) {
      throw ValidationError("topology: port id " + std::to_string(highest) +
                            " exceeds declared port count");
    }
    return topo;
  }

  static Topology parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }
};

struct RuleActions {
  std::optional<PortId> forward_port;
  bool to_controller = false;

  friend bool operator==(const RuleActions&, const RuleActions&) = default;
};

struct FlowRule {
  FlowKey match;
  RuleActions actions;
  double idle_timeout = kDefaultIdleTimeout;
  std::uint64_t packet_count = 0;
  std::uint64_t byte_count = 0;
  double last_matched = 0.0;

  bool expired_at(double now) const { return now - last_matched > idle_timeout; }
};

struct Matched {
  FlowKey rule;
  RuleActions actions;
};

struct TableMiss {
  PacketHeader packet_in;
};

using SwitchEvent = std::variant<Matched, TableMiss>;

struct EgressRecord {
  double timestamp;
  FlowKey flow;
  PortId port;
};

class Switch {
 public:
  explicit Switch(Topology topology = {}) : topology_(std::move(topology)) {}

  const Topology& topology() const { return topology_; }

  // Looks the packet up in the flow table. A hit updates counters and
  // performs the forwarding action; a miss (or an idle rule, which is evicted)
  // is reported so the controller can decide.
  SwitchEvent receive(const PacketHeader& pkt, double now) {
    const FlowKey key = flow_key_of(pkt);
    auto it = table_.find(key);
    if (it != table_.end() && it->second.expired_at(now)) {
      table_.erase(it);
      it = table_.end();
    }
    if (it == table_.end()) return TableMiss{pkt};

    FlowRule& rule = it->second;
    ++rule.packet_count;
    rule.byte_count += pkt.data_size;
    rule.last_matched = now;
    if (rule.actions.forward_port) {
      egress_.push_back({pkt.timestamp, key, *rule.actions.forward_port});
    }
    return Matched{rule.match, rule.actions};
  }

  // flow_mod: replaces any rule with the same match.
  void install_rule(const FlowKey& match, const RuleActions& actions, double idle_timeout,
                    double now) {
    if (actions.forward_port) check_port(*actions.forward_port);
    FlowRule rule;
    rule.match = match;
    rule.actions = actions;
    rule.idle_timeout = idle_timeout;
    rule.last_matched = now;
    table_.insert_or_assign(match, rule);
  }

  void install_rule(const FlowKey& match, const RuleActions& actions, double now) {
    install_rule(match, actions, topology_.idle_timeout, now);
  }

  // packet_out: one-off forwarding, no table change.
  void packet_out(const PacketHeader& pkt, PortId port) {
    check_port(port);
    egress_.push_back({pkt.timestamp, flow_key_of(pkt), port});
  }

  const FlowRule* find_rule(const FlowKey& key) const {
    auto it = table_.find(key);
    return it == table_.end() ? nullptr : &it->second;
  }

  std::size_t table_size() const { return table_.size(); }
  const std::vector<EgressRecord>& egress_log() const { return egress_; }
  void clear_egress_log() { egress_.clear(); }

 private:
  void check_port(PortId port) const {
    if (port >= topology_.port_count) {
      throw ConfigError("port " + std::to_string(port) + " does not exist on a " +
                        std::to_string(topology_.port_count) + "-port switch");
    }
  }

  Topology topology_;
  std::unordered_map<FlowKey, FlowRule, FlowKeyHash> table_;
  std::vector<EgressRecord> egress_;
};

}  // namespace sdnddos
