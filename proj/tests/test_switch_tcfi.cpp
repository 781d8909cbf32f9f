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

#include <gtest/gtest.h>

#include "sdnddos/switch_sim.hpp"
#include "sdnddos/tcfi.hpp"
#include "support/tcfi_properties.hpp"

namespace sdnddos {
namespace {

const Ipv4 kA(10, 0, 0, 1);
const Ipv4 kB(10, 0, 0, 2);

Topology two_hosts() {
  return Topology::parse("ports = 3\nuplink = 0\nhost.10.0.0.1 = 1\nhost.10.0.0.2 = 2\n");
}

RuleActions forward(PortId port) { return RuleActions{port, true}; }

TEST(Topology, ParsesKeysAndComments) {
  const auto t = Topology::parse("# lab\nidle_timeout = 30\nuplink=0\nhost.10.0.0.1 = 4 # server\n");
  EXPECT_DOUBLE_EQ(t.idle_timeout, 30.0);
  EXPECT_EQ(t.port_for(kA), 4u);
  EXPECT_EQ(t.port_for(kB), 0u);
  EXPECT_EQ(t.port_count, 5u);
}

TEST(Topology, ReportsLineNumbers) {
  try {
    Topology::parse("uplink = 0\nbogus = 1\n");
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(Topology::parse("ports = 2\nhost.10.0.0.1 = 5\n"), ValidationError);
  EXPECT_THROW(Topology::parse("idle_timeout = -1\n"), ValidationError);
}

TEST(Switch, EmptyTableMisses) {
  Switch sw(two_hosts());
  auto ev = sw.receive(make_udp(0, kA, 1, kB, 2, 0, 64), 0);
  EXPECT_TRUE(std::holds_alternative<TableMiss>(ev));
}

TEST(Switch, InstalledRuleMatchesAndCounts) {
  Switch sw(two_hosts());
  const auto pkt = make_tcp(0, kA, 5000, kB, 80, {TcpFlag::kAck}, 100);
  sw.install_rule(flow_key_of(pkt), forward(2), 0.0);
  auto ev = sw.receive(pkt, 1.0);
  ASSERT_TRUE(std::holds_alternative<Matched>(ev));
  const FlowRule* rule = sw.find_rule(flow_key_of(pkt));
  ASSERT_NE(rule, nullptr);
  EXPECT_EQ(rule->packet_count, 1u);
  EXPECT_EQ(rule->byte_count, 100u);
  ASSERT_EQ(sw.egress_log().size(), 1u);
  EXPECT_EQ(sw.egress_log()[0].port, 2u);
}

TEST(Switch, IdleRuleExpiresAndIsEvicted) {
  Switch sw(two_hosts());
  const auto key = FlowKey::transport(Protocol::kUdp, kA, 1, kB, 2);
  sw.install_rule(key, forward(2), 10.0, 0.0);
  auto ev = sw.receive(make_udp(11, kA, 1, kB, 2, 0, 64), 11.0);
  EXPECT_TRUE(std::holds_alternative<TableMiss>(ev));
  EXPECT_EQ(sw.find_rule(key), nullptr);
  EXPECT_EQ(sw.table_size(), 0u);
}

TEST(Switch, MatchRefreshesIdleTimer) {
  Switch sw(two_hosts());
  const auto key = FlowKey::transport(Protocol::kUdp, kA, 1, kB, 2);
  sw.install_rule(key, forward(2), 10.0, 0.0);
  EXPECT_TRUE(std::holds_alternative<Matched>(sw.receive(make_udp(8, kA, 1, kB, 2, 0, 64), 8.0)));
  EXPECT_TRUE(std::holds_alternative<Matched>(sw.receive(make_udp(16, kA, 1, kB, 2, 0, 64), 16.0)));
}

TEST(Switch, ReinstallReplaces) {
  Switch sw(two_hosts());
  const auto key = FlowKey::transport(Protocol::kTcp, kA, 1, kB, 2);
  sw.install_rule(key, forward(1), 0.0);
  sw.install_rule(key, forward(2), 0.0);
  EXPECT_EQ(sw.table_size(), 1u);
  EXPECT_EQ(sw.find_rule(key)->actions.forward_port, 2u);
}

TEST(Switch, ExactMatchOnly) {
  Switch sw(two_hosts());
  const auto key = FlowKey::transport(Protocol::kTcp, kA, 1, kB, 2);
  sw.install_rule(key, forward(2), 0.0);
  const auto reply = make_tcp(0, kB, 2, kA, 1, {TcpFlag::kAck});
  EXPECT_TRUE(std::holds_alternative<TableMiss>(sw.receive(reply, 0.0)));
}

TEST(Switch, PacketOut) {
  Switch sw(two_hosts());
  const auto pkt = make_udp(0, kA, 1, kB, 2, 0, 64);
  sw.packet_out(pkt, 1);
  EXPECT_EQ(sw.egress_log().size(), 1u);
  EXPECT_EQ(sw.table_size(), 0u);
  sw.packet_out(pkt, 2);
  EXPECT_EQ(sw.egress_log().size(), 2u);

  Switch small(Topology::parse("ports = 2\n"));
  EXPECT_THROW(small.packet_out(pkt, 99), ConfigError);
}

TEST(Switch, EgressConservation) {
  Rng rng(3);
  ReactiveController ctl(two_hosts());
  std::size_t n = 0;
  for (double t = 0; t < 50; t += 0.05, ++n) {
    PacketHeader p = testing::random_packet(rng, t, 2);
    ctl.ingest(p, t);
  }
  EXPECT_EQ(ctl.switch_state().egress_log().size(), n);
}

TEST(Tcfi, FirstPacketIsPending) {
  Tcfi tcfi;
  const auto syn = make_tcp(0, kA, 5000, kB, 80, {TcpFlag::kSyn});
  auto act = tcfi.on_packet(syn, DeliveryReason::kTableMiss);
  EXPECT_TRUE(std::holds_alternative<ForwardOnly>(act));
  EXPECT_TRUE(tcfi.is_pending(flow_key_of(syn)));
}

TEST(Tcfi, ReplyInstallsBoth) {
  Tcfi tcfi;
  const auto syn = make_tcp(0, kA, 5000, kB, 80, {TcpFlag::kSyn});
  const auto synack = make_tcp(0.1, kB, 80, kA, 5000, {TcpFlag::kSyn, TcpFlag::kAck});
  tcfi.on_packet(syn, DeliveryReason::kTableMiss);
  auto act = tcfi.on_packet(synack, DeliveryReason::kTableMiss);
  const auto* both = std::get_if<InstallBoth>(&act);
  ASSERT_NE(both, nullptr);
  EXPECT_EQ(both->flow, flow_key_of(synack));
  EXPECT_EQ(both->symflow, flow_key_of(syn));
  EXPECT_EQ(tcfi.pending_count(), 0u);
}

TEST(Tcfi, RepeatedOneWayPacketLeavesListUnchanged) {
  Tcfi tcfi;
  const auto syn = make_tcp(0, kA, 5000, kB, 80, {TcpFlag::kSyn});
  tcfi.on_packet(syn, DeliveryReason::kTableMiss);
  auto act = tcfi.on_packet(syn, DeliveryReason::kTableMiss);
  EXPECT_TRUE(std::holds_alternative<ForwardOnly>(act));
  EXPECT_EQ(tcfi.pending_count(), 1u);
}

TEST(Tcfi, RuleDeliveredPacketsAreOnlyRecorded) {
  Tcfi tcfi;
  const auto syn = make_tcp(0, kA, 5000, kB, 80, {TcpFlag::kSyn});
  auto act = tcfi.on_packet(syn, DeliveryReason::kInstalledRuleToController);
  EXPECT_TRUE(std::holds_alternative<Recorded>(act));
  EXPECT_EQ(tcfi.pending_count(), 0u);
  EXPECT_EQ(tcfi.recorded_count(), 1u);
}

TEST(Tcfi, SelfSymmetricFlowNeverInstalls) {
  Tcfi tcfi;
  const auto self = make_udp(0, kA, 7, kA, 7, 0, 64);
  EXPECT_TRUE(std::holds_alternative<ForwardOnly>(tcfi.on_packet(self, DeliveryReason::kTableMiss)));
  EXPECT_TRUE(std::holds_alternative<ForwardOnly>(tcfi.on_packet(self, DeliveryReason::kTableMiss)));
}

TEST(Tcfi, UnpairedIcmpNeverInstalls) {
  Tcfi tcfi;
  tcfi.on_packet(make_icmp(0, kA, kB, 3, 1, 0, 64), DeliveryReason::kTableMiss);
  auto act = tcfi.on_packet(make_icmp(0, kB, kA, 3, 1, 0, 64), DeliveryReason::kTableMiss);
  EXPECT_TRUE(std::holds_alternative<ForwardOnly>(act));
}

TEST(Tcfi, SnapshotSizes) {
  Tcfi tcfi;
  for (int i = 0; i < 3; ++i) tcfi.on_packet(make_udp(i, kA, 1, kB, 2, 0, 64), DeliveryReason::kTableMiss);
  EXPECT_EQ(tcfi.snapshot_and_reset().size(), 3u);
  EXPECT_EQ(tcfi.snapshot_and_reset().size(), 0u);
  tcfi.on_packet(make_udp(0, kA, 1, kB, 2, 0, 64), DeliveryReason::kTableMiss);
  tcfi.on_packet(make_udp(0, kA, 1, kB, 2, 0, 64), DeliveryReason::kTableMiss);
  EXPECT_EQ(tcfi.snapshot_and_reset().size(), 2u);
  tcfi.on_packet(make_udp(0, kA, 1, kB, 2, 0, 64), DeliveryReason::kTableMiss);
  EXPECT_EQ(tcfi.snapshot_and_reset().size(), 1u);
}

TEST(Tcfi, PendingSurvivesSnapshot) {
  Tcfi tcfi;
  tcfi.on_packet(make_icmp(59, kA, kB, 8, 0, 32, 64), DeliveryReason::kTableMiss);
  tcfi.snapshot_and_reset();
  auto act = tcfi.on_packet(make_icmp(61, kB, kA, 0, 0, 32, 64), DeliveryReason::kTableMiss);
  EXPECT_TRUE(std::holds_alternative<InstallBoth>(act));
}

TEST(Tcfi, PendingListIsBoundedOldestFirst) {
  Tcfi tcfi(3);
  for (std::uint16_t p = 1; p <= 4; ++p) {
    tcfi.on_packet(make_udp(0, kA, p, kB, 9, 0, 64), DeliveryReason::kTableMiss);
  }
  EXPECT_EQ(tcfi.pending_count(), 3u);
  EXPECT_EQ(tcfi.evicted_count(), 1u);
  EXPECT_FALSE(tcfi.is_pending(FlowKey::transport(Protocol::kUdp, kA, 1, kB, 9)));
  EXPECT_TRUE(tcfi.is_pending(FlowKey::transport(Protocol::kUdp, kA, 4, kB, 9)));
}

TEST(ReactiveController, HandshakeInstallsPairThenRecordsViaRules) {
  ReactiveController ctl(two_hosts());
  ctl.ingest(make_tcp(0, kA, 5000, kB, 80, {TcpFlag::kSyn}), 0);
  ctl.ingest(make_tcp(0.1, kB, 80, kA, 5000, {TcpFlag::kSyn, TcpFlag::kAck}), 0.1);
  EXPECT_EQ(ctl.pairs_installed(), 1u);
  EXPECT_EQ(ctl.switch_state().table_size(), 2u);
  const FlowRule* rule = ctl.switch_state().find_rule(FlowKey::transport(Protocol::kTcp, kA, 5000, kB, 80));
  ASSERT_NE(rule, nullptr);
  EXPECT_EQ(rule->actions, (RuleActions{2, true}));
  ctl.ingest(make_tcp(0.2, kA, 5000, kB, 80, {TcpFlag::kAck}), 0.2);
  EXPECT_EQ(rule->packet_count, 1u);
  EXPECT_EQ(ctl.snapshot_and_reset().size(), 3u);
}

TEST(TcfiProperties, RandomSequences) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (double timeout : {0.5, 60.0}) {
      const auto r = testing::check_random_sequence(seed, 3000, timeout);
      EXPECT_TRUE(r.ok()) << r.violations.front();
      EXPECT_GT(r.installs, 0u);
    }
  }
}

TEST(TcfiProperties, SpoofedFloodInstallsNothing) {
  const auto r = testing::check_spoofed_flood(5, 5000);
  EXPECT_TRUE(r.ok()) << r.violations.front();
}

}  // namespace
}  // namespace sdnddos
