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

// Traffic collector and flow installer. Every packet reaching the controller
// is recorded for feature extraction; forwarding rules are installed only
// once both directions of a flow have been seen, so spoofed one-way floods
// never occupy the flow table.

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "sdnddos/switch_sim.hpp"
#include "sdnddos/traffic_model.hpp"

namespace sdnddos {

enum class DeliveryReason { kTableMiss, kInstalledRuleToController };

struct ForwardOnly {};
struct Recorded {};
// Install rules for both keys; `flow` is the packet's own flow.
struct InstallBoth {
  FlowKey flow;
  FlowKey symflow;
};

using TcfiAction = std::variant<ForwardOnly, InstallBoth, Recorded>;

inline constexpr std::size_t kDefaultPendingLimit = 1'000'000;

class Tcfi {
 public:
  explicit Tcfi(std::size_t pending_limit = kDefaultPendingLimit)
      : pending_limit_(pending_limit == 0 ? 1 : pending_limit) {}

  TcfiAction on_packet(const PacketHeader& pkt, DeliveryReason reason) {
    packets_.push_back(pkt);
    if (reason == DeliveryReason::kInstalledRuleToController) return Recorded{};

    const FlowKey flow = flow_key_of(pkt);
    const std::optional<FlowKey> symflow = symmetric_of(flow);
    // A flow that is its own counterpart (e.g. A->A) never self-installs.
    if (symflow && *symflow != flow) {
      if (auto it = pending_.find(*symflow); it != pending_.end()) {
        pending_.erase(it);
        return InstallBoth{flow, *symflow};
      }
    }
    if (!pending_.contains(flow)) add_pending(flow);
    return ForwardOnly{};
  }

  // Hands over the packets recorded since the previous call. Pending flows
  // carry over so a reply arriving in the next interval still pairs up.
  std::vector<PacketHeader> snapshot_and_reset() { return std::exchange(packets_, {}); }

  bool is_pending(const FlowKey& key) const { return pending_.contains(key); }
  std::size_t pending_count() const { return pending_.size(); }
  std::size_t recorded_count() const { return packets_.size(); }
  std::uint64_t evicted_count() const { return evicted_; }

  template <typename Fn>
  void for_each_pending(Fn&& fn) const {
    for (const auto& [key, seq] : pending_) fn(key);
  }

 private:
  void add_pending(const FlowKey& key) {
    while (pending_.size() >= pending_limit_) evict_oldest();
    const std::uint64_t seq = next_seq_++;
    pending_.emplace(key, seq);
    order_.emplace_back(key, seq);
    // Entries removed by pairing leave stale tombstones in order_.
    if (order_.size() > 2 * pending_.size() + 1024) compact();
  }

  void evict_oldest() {
    while (!order_.empty()) {
      auto [key, seq] = order_.front();
      order_.pop_front();
      auto it = pending_.find(key);
      if (it != pending_.end() && it->second == seq) {
        pending_.erase(it);
        ++evicted_;
        return;
      }
    }
  }

  void compact() {
    std::deque<std::pair<FlowKey, std::uint64_t>> live;
    for (const auto& entry : order_) {
      auto it = pending_.find(entry.first);
      if (it != pending_.end() && it->second == entry.second) live.push_back(entry);
    }
    order_ = std::move(live);
  }

  std::size_t pending_limit_;
  std::vector<PacketHeader> packets_;
  std::unordered_map<FlowKey, std::uint64_t, FlowKeyHash> pending_;
  std::deque<std::pair<FlowKey, std::uint64_t>> order_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t evicted_ = 0;
};

// Wires a Switch to the Tcfi the way the controller application does:
// installed rules forward to the destination port and copy to the
// controller, table misses are resolved by the Tcfi and then packet_out.
class ReactiveController {
 public:
  using InstallObserver = std::function<void(const FlowKey& flow, const FlowKey& symflow)>;

  explicit ReactiveController(Topology topology = {},
                              std::size_t pending_limit = kDefaultPendingLimit)
      : switch_(std::move(topology)), tcfi_(pending_limit) {}

  void set_install_observer(InstallObserver observer) { observer_ = std::move(observer); }

  // Drives one packet through switch and controller at trace time `now`.
  void ingest(const PacketHeader& pkt, double now) {
    SwitchEvent event = switch_.receive(pkt, now);
    if (const auto* hit = std::get_if<Matched>(&event)) {
      if (hit->actions.to_controller) {
        tcfi_.on_packet(pkt, DeliveryReason::kInstalledRuleToController);
      }
      return;
    }
    TcfiAction action = tcfi_.on_packet(pkt, DeliveryReason::kTableMiss);
    if (const auto* both = std::get_if<InstallBoth>(&action)) {
      install(both->symflow, now);
      install(both->flow, now);
      ++pairs_installed_;
      if (observer_) observer_(both->flow, both->symflow);
    }
    switch_.packet_out(pkt, switch_.topology().port_for(pkt.dst_ip));
  }

  std::vector<PacketHeader> snapshot_and_reset() { return tcfi_.snapshot_and_reset(); }

  const Switch& switch_state() const { return switch_; }
  Switch& switch_state() { return switch_; }
  const Tcfi& tcfi() const { return tcfi_; }
  std::uint64_t pairs_installed() const { return pairs_installed_; }

 private:
  void install(const FlowKey& key, double now) {
    RuleActions actions;
    actions.forward_port = switch_.topology().port_for(key.dst_ip);
    actions.to_controller = true;
    switch_.install_rule(key, actions, now);
  }

  Switch switch_;
  Tcfi tcfi_;
  InstallObserver observer_;
  std::uint64_t pairs_installed_ = 0;
};

}  // namespace sdnddos
