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

#include <set>

#include "sdnddos/pipeline.hpp"
#include "sdnddos/trafficgen.hpp"

namespace sdnddos {
namespace {

ScenarioSpec small_spec(std::uint64_t seed, double minutes) {
  ScenarioSpec s;
  s.seed = seed;
  s.duration = minutes * 60.0;
  for (std::uint8_t i = 1; i <= 6; ++i) s.hosts.emplace_back(10, 0, 0, i);
  return s;
}

AttackSegment segment(double start, double end, std::uint8_t vectors, Ipv4 victim,
                      double rate = 5.0) {
  AttackSegment a;
  a.start = start;
  a.end = end;
  a.vectors = vectors;
  a.victim = victim;
  a.packet_rate = rate;
  return a;
}

TEST(Scenario, Validation) {
  ScenarioSpec s = small_spec(1, 10);
  EXPECT_NO_THROW(validate(s));
  s.victims.emplace_back(192, 168, 0, 1);
  EXPECT_THROW(validate(s), ValidationError);

  s = small_spec(1, 10);
  s.attack_segments.push_back(segment(100, 50, kVectorTcp, s.hosts[0]));
  EXPECT_THROW(validate(s), ValidationError);
  s.attack_segments[0] = segment(0, 700, kVectorTcp, s.hosts[0]);
  EXPECT_THROW(validate(s), ValidationError);
  s.attack_segments[0] = segment(0, 60, 0, s.hosts[0]);
  EXPECT_THROW(validate(s), ValidationError);
  s.attack_segments[0] = segment(0, 60, kVectorTcp, Ipv4(1, 2, 3, 4));
  EXPECT_THROW(validate(s), ValidationError);

  s = small_spec(1, 10);
  s.hosts.push_back(s.hosts[0]);
  EXPECT_THROW(validate(s), ValidationError);
  s = small_spec(1, 10);
  s.duration = 0;
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Labels, NormalOnlyScenarioIsAllN) {
  const auto labels = label_intervals(small_spec(1, 10));
  EXPECT_EQ(labels.size(), 60u);
  for (const auto& [key, cls] : labels) EXPECT_EQ(cls, TrafficClass::N);
}

TEST(Labels, VectorUnionAndOverlap) {
  ScenarioSpec s = small_spec(1, 10);
  const Ipv4 v = s.hosts[0];
  s.attack_segments.push_back(segment(60, 150, kVectorTcp | kVectorUdp | kVectorIcmp, v));
  s.attack_segments.push_back(segment(200, 230, kVectorTcp, v));
  s.attack_segments.push_back(segment(220, 260, kVectorUdp, v));
  const auto labels = label_intervals(s);
  EXPECT_EQ(labels.at({v, 0.0}), TrafficClass::N);
  EXPECT_EQ(labels.at({v, 60.0}), TrafficClass::A);
  EXPECT_EQ(labels.at({v, 120.0}), TrafficClass::A);  // partial overlap counts
  EXPECT_EQ(labels.at({v, 180.0}), TrafficClass::TU);
  EXPECT_EQ(labels.at({v, 240.0}), TrafficClass::U);
  EXPECT_EQ(labels.at({s.hosts[1], 60.0}), TrafficClass::N);
}

TEST(Generate, Deterministic) {
  ScenarioSpec s = small_spec(9, 5);
  s.attack_segments.push_back(segment(30, 200, kVectorTcp | kVectorIcmp, s.hosts[2]));
  const auto a = generate(s);
  const auto b = generate(s);
  EXPECT_EQ(a.packets, b.packets);
  EXPECT_EQ(a.labels, b.labels);
  s.seed = 10;
  EXPECT_NE(generate(s).packets, a.packets);
}

TEST(Generate, SortedWellFormedAndInRange) {
  ScenarioSpec s = small_spec(2, 10);
  s.attack_segments.push_back(segment(60, 300, kVectorTcp | kVectorUdp | kVectorIcmp, s.hosts[1]));
  const auto trace = generate(s);
  ASSERT_FALSE(trace.packets.empty());
  std::set<Protocol> seen;
  for (std::size_t i = 0; i < trace.packets.size(); ++i) {
    const auto& p = trace.packets[i];
    EXPECT_TRUE(is_well_formed(p));
    EXPECT_GE(p.timestamp, 0.0);
    EXPECT_LT(p.timestamp, s.duration);
    if (i > 0) {
      EXPECT_LE(trace.packets[i - 1].timestamp, p.timestamp);
    }
    seen.insert(p.protocol);
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(Generate, AttackRateIsRespected) {
  ScenarioSpec s = small_spec(3, 10);
  s.normal.flows_per_minute = 0;
  s.attack_segments.push_back(segment(0, 400, kVectorUdp, s.hosts[0], 20.0));
  const auto n = static_cast<double>(generate(s).packets.size());
  EXPECT_NEAR(n, 8000.0, 5 * std::sqrt(8000.0));
}

TEST(Generate, NormalTrafficInstallsRulesForNearlyAllFlows) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const ScenarioSpec s = small_spec(seed, 60);
    const auto trace = generate(s);
    std::set<FlowKey> flows, installed;
    for (const auto& p : trace.packets) flows.insert(flow_key_of(p));
    ReactiveController ctl;
    ctl.set_install_observer([&](const FlowKey& f, const FlowKey& sym) {
      installed.insert(f);
      installed.insert(sym);
    });
    for (const auto& p : trace.packets) ctl.ingest(p, p.timestamp);
    ASSERT_GT(flows.size(), 1000u);
    const double share = static_cast<double>(installed.size()) / static_cast<double>(flows.size());
    EXPECT_GE(share, 0.95) << "seed " << seed;
  }
}

TEST(Generate, SpoofedFloodsInstallNoRules) {
  ScenarioSpec s = small_spec(4, 10);
  s.normal.flows_per_minute = 0;
  s.attack_segments.push_back(segment(0, 590, kVectorTcp | kVectorUdp | kVectorIcmp, s.hosts[0], 30));
  s.attack_segments.push_back(segment(100, 400, kVectorTcp, s.hosts[3], 50));
  ReplayStats stats;
  const auto trace = generate(s);
  replay(trace.packets, s.interval, {}, &stats);
  EXPECT_GT(stats.packets, 10000u);
  EXPECT_EQ(stats.rule_pairs_installed, 0u);
}

TEST(Generate, SynFloodLowersSymmetricTcpShare) {
  ScenarioSpec s = small_spec(5, 30);
  s.normal.flows_per_minute = 20;
  const Ipv4 victim = s.hosts[0];
  s.attack_segments.push_back(segment(600, 1200, kVectorTcp, victim, 5.0));
  const auto trace = generate(s);
  double before = 0, during = 0;
  int n_before = 0, n_during = 0;
  for (const auto& fv : replay(trace.packets, s.interval)) {
    if (fv.host != victim) continue;
    const auto cls = trace.labels.at({fv.host, fv.interval_start});
    if (cls == TrafficClass::T) {
      during += fv.feature(5);
      ++n_during;
    } else if (fv.interval_start < 600) {
      before += fv.feature(5);
      ++n_before;
    }
  }
  ASSERT_EQ(n_during, 10);
  ASSERT_GT(n_before, 5);
  EXPECT_LT(during / n_during, before / n_before);
}

TEST(DefaultScenario, EveryClassHasAtLeastOneHundredIntervals) {
  for (std::uint64_t seed : {1, 2}) {
    const ScenarioSpec s = default_scenario(seed);
    EXPECT_NO_THROW(validate(s));
    std::map<TrafficClass, int> counts;
    for (const auto& [key, cls] : label_intervals(s)) ++counts[cls];
    ASSERT_EQ(counts.size(), kNumClasses);
    for (const auto& [cls, n] : counts) EXPECT_GE(n, 100) << class_name(cls);
  }
}

}  // namespace
}  // namespace sdnddos
