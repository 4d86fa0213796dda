/*
 * Copyright 2026 The sdnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sdnet/adaptive.hpp>
#include <sdnet/simulation.hpp>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"

namespace sdnet {
namespace {

using testing::by_name;
using testing::count_kind;
using testing::global_service;
using testing::local_service;

std::vector<UtilizationRecord> records_at(std::initializer_list<Tick> ticks, const ServiceId& id = "s",
                                          const NodeId& node = "lsd") {
  std::vector<UtilizationRecord> out;
  for (Tick t : ticks) out.push_back({id, t, node});
  return out;
}

TEST(Hotness, Empty) { EXPECT_EQ(hotness({}, "s", 10, 5).total, 0u); }

TEST(Hotness, WindowArithmetic) {
  auto log = records_at({10, 11, 12, 13, 14});
  EXPECT_EQ(hotness(log, "s", 14, 5).total, 5u);
  EXPECT_EQ(hotness(log, "s", 14, 3).total, 3u);
  EXPECT_EQ(hotness(log, "s", 15, 5).total, 4u);
  EXPECT_EQ(hotness(log, "other", 14, 5).total, 0u);
}

TEST(Hotness, PerLsdBreakdown) {
  auto log = records_at({1, 2}, "s", "a");
  auto more = records_at({2}, "s", "b");
  log.insert(log.end(), more.begin(), more.end());
  auto h = hotness(log, "s", 2, 10);
  EXPECT_EQ(h.total, 3u);
  EXPECT_EQ(h.per_lsd, (std::map<NodeId, std::uint64_t>{{"a", 2}, {"b", 1}}));
}

TEST(Recommend, PromotesHotVrp) {
  SwitchPolicy p{10, 3, 20};
  EXPECT_EQ(recommend(global_service("s", "tsd"), LayerKind::TSD, {12, {}}, p, std::nullopt, 100),
            SwitchDecision::PromoteToPPP);
}

TEST(Recommend, HysteresisBandKeepsPpp) {
  SwitchPolicy p{10, 3, 20};
  EXPECT_EQ(recommend(global_service("s", "tsd", PropagationStrategy::PPP), LayerKind::TSD, {12, {}}, p,
                      std::nullopt, 100),
            SwitchDecision::NoChange);
  EXPECT_EQ(recommend(global_service("s", "tsd", PropagationStrategy::PPP), LayerKind::TSD, {3, {}}, p,
                      std::nullopt, 100),
            SwitchDecision::DemoteToVRP);
}

TEST(Recommend, CooldownBlocks) {
  SwitchPolicy p{10, 3, 20};
  EXPECT_EQ(recommend(global_service("s", "tsd"), LayerKind::TSD, {12, {}}, p, 95, 100), SwitchDecision::NoChange);
  EXPECT_EQ(recommend(global_service("s", "tsd"), LayerKind::TSD, {12, {}}, p, 80, 100),
            SwitchDecision::PromoteToPPP);
}

TEST(Recommend, LsdOriginNeverSwitches) {
  SwitchPolicy p{10, 3, 20};
  EXPECT_EQ(recommend(local_service("s", "lsd", {0, 0, 1, 1}), LayerKind::LSD, {50, {}}, p, std::nullopt, 100),
            SwitchDecision::NoChange);
}

TEST(SwitchPolicyTest, RequiresGap) {
  EXPECT_TRUE((SwitchPolicy{10, 2, 0}).valid());
  EXPECT_FALSE((SwitchPolicy{2, 2, 0}).valid());
}

TEST(ApplySwitch, PromoteSchedulesPushesAndStopsRequests) {
  Simulator sim(testing::chain_topology(), {});
  sim.schedule(1, action::RegisterService{"tsd", global_service("g", "tsd")});
  sim.run(5);
  ASSERT_FALSE(sim.apply_switch("g", SwitchDecision::PromoteToPPP));
  EXPECT_EQ(count_kind(sim, MessageKind::Push), 1u);
  EXPECT_EQ(sim.last_switch("g"), 5);
  sim.run(10);
  for (const auto& l : {"lsd-a", "lsd-b"}) {
    sim.schedule(11, action::CustomerLookup{l, by_name("g")});
    sim.schedule(12, action::CustomerLookup{l, by_name("g")});
  }
  sim.run(50);
  EXPECT_EQ(count_kind(sim, MessageKind::Request), 0u);
  EXPECT_EQ(sim.node("tsd").find("g")->descriptor.strategy, PropagationStrategy::PPP);
  EXPECT_EQ(sim.report().promotions.at("g"), 1u);
}

TEST(ApplySwitch, DemotedCopiesDecay) {
  SimParams p;
  p.base_ttl = 30;
  Simulator sim(testing::chain_topology(), p);
  sim.schedule(1, action::RegisterService{"tsd", global_service("g", "tsd", PropagationStrategy::PPP)});
  sim.run(10);
  ASSERT_EQ(sim.node("lsd-a").find("g")->kind, EntryKind::PersistentPropagated);
  ASSERT_FALSE(sim.apply_switch("g", SwitchDecision::DemoteToVRP));
  EXPECT_EQ(sim.node("lsd-a").find("g")->expires_at, 40);
  sim.run(39);
  EXPECT_NE(sim.node("nsd").find("g"), nullptr);
  sim.run(40);
  for (const auto& n : {"nsd", "lsd-a", "lsd-b"}) EXPECT_EQ(sim.node(n).find("g"), nullptr) << n;
  EXPECT_EQ(sim.node("tsd").find("g")->kind, EntryKind::Registered);
}

TEST(ApplySwitch, UnknownService) {
  Simulator sim(testing::chain_topology(), {});
  EXPECT_EQ(sim.apply_switch("nope", SwitchDecision::PromoteToPPP), SwitchError::UnknownService);
}

TEST(ApplySwitch, ScheduledSwitchAppearsInTrace) {
  Simulator sim(testing::chain_topology(), {});
  sim.schedule(1, action::RegisterService{"tsd", global_service("g", "tsd")});
  sim.schedule(2, action::StrategySwitch{"g", SwitchDecision::PromoteToPPP});
  sim.schedule(3, action::StrategySwitch{"missing", SwitchDecision::PromoteToPPP});
  sim.run(3);
  EXPECT_EQ(sim.trace()[1].detail, "PromoteToPPP");
  EXPECT_EQ(sim.trace()[1].node, "tsd");
  EXPECT_EQ(sim.trace()[2].services, std::vector<ServiceId>{"missing"});
  EXPECT_EQ(sim.trace()[2].detail, "unknown-service");
}

TEST(Evaluation, PromotesUnderSustainedDemand) {
  SimParams p;
  p.adaptive = true;
  p.window_length = 20;
  p.policy = {5, 1, 100};
  Simulator sim(testing::chain_topology(), p);
  sim.schedule(1, action::RegisterService{"tsd", global_service("g", "tsd")});
  for (Tick t = 2; t < 20; ++t) sim.schedule(t, action::CustomerLookup{"lsd-a", by_name("g")});
  sim.run(20);
  EXPECT_EQ(sim.trace().back().detail, "PromoteToPPP:g");
  EXPECT_EQ(sim.last_switch("g"), 20);
  sim.run(41);
  // Demand stopped, but the cooldown holds the promotion.
  EXPECT_EQ(sim.report().demotions.count("g"), 0u);
  sim.run(120);
  EXPECT_EQ(sim.report().demotions.at("g"), 1u);
}

}  // namespace
}  // namespace sdnet
