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

#include <sdnet/directory.hpp>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"

namespace sdnet {
namespace {

using testing::by_name;
using testing::global_service;
using testing::local_service;

const GeoArea kLot{0, 0, 10, 10};

TEST(RegisterService, GlobalAtTsd) {
  DirectoryState tsd("tsd", LayerKind::TSD);
  EXPECT_FALSE(tsd.register_service(global_service("coord", "tsd"), 1));
  ASSERT_NE(tsd.find("coord"), nullptr);
  EXPECT_EQ(tsd.find("coord")->kind, EntryKind::Registered);
  EXPECT_FALSE(tsd.find("coord")->expires_at);
}

TEST(RegisterService, LocalAtLsdVisibleOnlyThere) {
  DirectoryState lot("lsd-lot", LayerKind::LSD);
  DirectoryState neighbour("lsd-ring", LayerKind::LSD);
  auto parking = local_service("parking", "lsd-lot", kLot);
  parking.tags = {"parking"};
  EXPECT_FALSE(lot.register_service(parking, 1));
  LookupQuery q;
  q.tags = {"parking"};
  auto here = lot.lookup(q, 2);
  ASSERT_EQ(here.matches.size(), 1u);
  EXPECT_EQ(here.matches.front().service_id, "parking");
  EXPECT_FALSE(here.miss);
  auto there = neighbour.lookup(q, 2);
  EXPECT_TRUE(there.matches.empty());
  EXPECT_TRUE(there.miss);
}

TEST(RegisterService, RejectsMisplacedScopes) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  EXPECT_EQ(lsd.register_service(global_service("g", "lsd"), 1), DirectoryError::GlobalAtNonTsd);
  DirectoryState tsd("tsd", LayerKind::TSD);
  EXPECT_EQ(tsd.register_service(local_service("l", "tsd", kLot), 1), DirectoryError::LocalAtTsd);
  EXPECT_EQ(tsd.register_service(global_service("g", "elsewhere"), 1), DirectoryError::WrongOrigin);
}

TEST(RegisterService, VersionsMustIncrease) {
  DirectoryState nsd("nsd", LayerKind::NSD);
  EXPECT_FALSE(nsd.register_service(local_service("s", "nsd", kLot, PropagationStrategy::VRP, 5), 5));
  EXPECT_EQ(nsd.register_service(local_service("s", "nsd", kLot, PropagationStrategy::VRP, 5), 6),
            DirectoryError::StaleVersion);
  auto t = std::get<Tombstone>(nsd.deregister_service("s", 7));
  EXPECT_EQ(t.version, (Version{6, "nsd"}));
  EXPECT_EQ(nsd.register_service(local_service("s", "nsd", kLot, PropagationStrategy::VRP, 6), 8),
            DirectoryError::StaleVersion);
  EXPECT_FALSE(nsd.register_service(local_service("s", "nsd", kLot, PropagationStrategy::VRP, 9), 9));
  EXPECT_EQ(nsd.tombstone("s"), nullptr);
}

TEST(Lookup, EmptyQueryReturnsAllSorted) {
  DirectoryState tsd("tsd", LayerKind::TSD);
  for (auto [id, name] : {std::pair{"c", "beta"}, {"a", "gamma"}, {"b", "alpha"}}) {
    auto d = global_service(id, "tsd");
    d.name = name;
    ASSERT_FALSE(tsd.register_service(d, 0));
  }
  auto r = tsd.lookup({}, 1);
  ASSERT_EQ(r.matches.size(), 3u);
  EXPECT_EQ(r.matches[0].name, "alpha");
  EXPECT_EQ(r.matches[1].name, "beta");
  EXPECT_EQ(r.matches[2].name, "gamma");
  EXPECT_EQ(tsd.utilization_log().size(), 3u);
  EXPECT_EQ(tsd.lookup({}, 1).matches, r.matches);
}

TEST(Lookup, FiltersByEveryField) {
  DirectoryState nsd("nsd", LayerKind::NSD);
  auto a = local_service("a", "nsd", {0, 0, 10, 10});
  a.name = "parking-north";
  a.tags = {"parking", "paid"};
  auto b = local_service("b", "nsd", {20, 20, 30, 30});
  b.name = "parking-south";
  b.tags = {"parking"};
  ASSERT_FALSE(nsd.register_service(a, 0));
  ASSERT_FALSE(nsd.register_service(b, 0));
  LookupQuery q;
  q.tags = {"parking", "paid"};
  EXPECT_EQ(nsd.match(q, 1).size(), 1u);
  EXPECT_EQ(nsd.match(by_name("parking-s"), 1).front().service_id, "b");
  LookupQuery at;
  at.position = Point{25, 25};
  EXPECT_EQ(nsd.match(at, 1).front().service_id, "b");
  GeoArea far{100, 100, 110, 110};
  EXPECT_TRUE(nsd.match({}, 1, &far).empty());
}

TEST(StorePropagated, FreshPersistentStore) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  EXPECT_EQ(lsd.store_propagated(global_service("g", "tsd"), EntryKind::PersistentPropagated, std::nullopt, 3),
            StoreOutcome::Stored);
  EXPECT_EQ(lsd.find("g")->kind, EntryKind::PersistentPropagated);
  EXPECT_FALSE(lsd.find("g")->expires_at);
  EXPECT_EQ(lsd.find("g")->stored_at, 3);
}

TEST(StorePropagated, VolatileStoreExpiry) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  lsd.store_propagated(global_service("g", "tsd"), EntryKind::VolatileCached, 50, 100);
  EXPECT_EQ(lsd.find("g")->expires_at, 150);
}

TEST(StorePropagated, LowerVersionIgnored) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  lsd.store_propagated(global_service("g", "tsd", PropagationStrategy::PPP, 7), EntryKind::PersistentPropagated,
                       std::nullopt, 0);
  EXPECT_EQ(lsd.store_propagated(global_service("g", "tsd", PropagationStrategy::PPP, 3),
                                 EntryKind::PersistentPropagated, std::nullopt, 1),
            StoreOutcome::IgnoredStale);
  EXPECT_EQ(lsd.find("g")->descriptor.version.timestamp, 7);
}

TEST(StorePropagated, PersistentUpgradesVolatileOfEqualVersion) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  auto d = global_service("g", "tsd");
  lsd.store_propagated(d, EntryKind::VolatileCached, 10, 0);
  EXPECT_EQ(lsd.store_propagated(d, EntryKind::PersistentPropagated, std::nullopt, 1), StoreOutcome::Upgraded);
  EXPECT_EQ(lsd.find("g")->kind, EntryKind::PersistentPropagated);
  EXPECT_FALSE(lsd.find("g")->expires_at);
  EXPECT_EQ(lsd.store_propagated(d, EntryKind::VolatileCached, 10, 2), StoreOutcome::Unchanged);
  EXPECT_EQ(lsd.find("g")->kind, EntryKind::PersistentPropagated);
}

TEST(StorePropagated, TombstonedIdsIgnored) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  lsd.apply_tombstone({"g", {4, "tsd"}, "tsd"});
  EXPECT_EQ(lsd.store_propagated(global_service("g", "tsd", PropagationStrategy::PPP, 4),
                                 EntryKind::PersistentPropagated, std::nullopt, 5),
            StoreOutcome::IgnoredTombstoned);
  EXPECT_EQ(lsd.store_propagated(global_service("g", "tsd", PropagationStrategy::PPP, 5),
                                 EntryKind::PersistentPropagated, std::nullopt, 5),
            StoreOutcome::Stored);
}

TEST(StorePropagated, NeverReplacesRegisteredEntry) {
  DirectoryState nsd("nsd", LayerKind::NSD);
  ASSERT_FALSE(nsd.register_service(local_service("s", "nsd", kLot), 0));
  EXPECT_EQ(nsd.store_propagated(local_service("s", "other", kLot, PropagationStrategy::VRP, 9),
                                 EntryKind::PersistentPropagated, std::nullopt, 1),
            StoreOutcome::IgnoredStale);
  EXPECT_EQ(nsd.find("s")->kind, EntryKind::Registered);
}

TEST(RefreshEntry, ResetsExpiryToBaseTtl) {
  DirectoryState lsd("lsd", LayerKind::LSD, 50);
  lsd.store_propagated(global_service("g", "tsd"), EntryKind::VolatileCached, 50, 100);
  ASSERT_EQ(lsd.find("g")->expires_at, 150);
  EXPECT_FALSE(lsd.refresh_entry("g", 140));
  EXPECT_EQ(lsd.find("g")->expires_at, 190);
  EXPECT_EQ(lsd.find("g")->refresh_count, 1u);
}

TEST(RefreshEntry, PersistentIsNotCached) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  lsd.store_propagated(global_service("g", "tsd"), EntryKind::PersistentPropagated, std::nullopt, 0);
  EXPECT_EQ(lsd.refresh_entry("g", 1), DirectoryError::NotCached);
  EXPECT_EQ(lsd.refresh_entry("missing", 1), DirectoryError::NotCached);
}

TEST(RefreshEntry, TwiceInOneTick) {
  DirectoryState lsd("lsd", LayerKind::LSD, 50);
  lsd.store_propagated(global_service("g", "tsd"), EntryKind::VolatileCached, 50, 100);
  lsd.refresh_entry("g", 120);
  lsd.refresh_entry("g", 120);
  EXPECT_EQ(lsd.find("g")->refresh_count, 2u);
  EXPECT_EQ(lsd.find("g")->expires_at, 170);
}

TEST(ExpireEntries, BoundaryIsInclusive) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  lsd.store_propagated(global_service("v", "tsd"), EntryKind::VolatileCached, 100, 0);
  lsd.store_propagated(global_service("p", "tsd"), EntryKind::PersistentPropagated, std::nullopt, 0);
  EXPECT_TRUE(lsd.expire_entries(99).empty());
  EXPECT_NE(lsd.find("v"), nullptr);
  EXPECT_EQ(lsd.expire_entries(100), std::vector<ServiceId>{"v"});
  EXPECT_EQ(lsd.find("v"), nullptr);
  lsd.expire_entries(1'000'000);
  EXPECT_NE(lsd.find("p"), nullptr);
}

TEST(ExpireEntries, ExpiredEntryIsNotVisibleBeforeSweep) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  lsd.store_propagated(global_service("v", "tsd"), EntryKind::VolatileCached, 10, 0);
  EXPECT_EQ(lsd.visible_ids(9).size(), 1u);
  EXPECT_TRUE(lsd.visible_ids(10).empty());
  EXPECT_TRUE(lsd.lookup({}, 10).miss);
}

TEST(DeregisterService, AtOriginEmitsTombstone) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  ASSERT_FALSE(lsd.register_service(local_service("s", "lsd", kLot, PropagationStrategy::VRP, 3), 3));
  auto r = lsd.deregister_service("s", 10);
  ASSERT_TRUE(std::holds_alternative<Tombstone>(r));
  const auto& t = std::get<Tombstone>(r);
  EXPECT_EQ(t.version, (Version{4, "lsd"}));
  EXPECT_GT(t.version, (Version{3, "lsd"}));
  EXPECT_EQ(lsd.find("s"), nullptr);
  EXPECT_TRUE(lsd.lookup({}, 11).miss);
}

TEST(DeregisterService, PropagatedCopyIsNotOrigin) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  lsd.store_propagated(global_service("g", "tsd"), EntryKind::PersistentPropagated, std::nullopt, 0);
  EXPECT_EQ(std::get<DirectoryError>(lsd.deregister_service("g", 1)), DirectoryError::NotOrigin);
  EXPECT_EQ(std::get<DirectoryError>(lsd.deregister_service("nothing", 1)), DirectoryError::NotOrigin);
}

TEST(ApplyTombstone, DropsOlderEntriesOnly) {
  DirectoryState lsd("lsd", LayerKind::LSD);
  lsd.store_propagated(global_service("g", "tsd", PropagationStrategy::PPP, 8), EntryKind::PersistentPropagated,
                       std::nullopt, 0);
  auto stale = lsd.apply_tombstone({"g", {5, "tsd"}, "tsd"});
  EXPECT_FALSE(stale.recorded);
  EXPECT_NE(lsd.find("g"), nullptr);
  auto fresh = lsd.apply_tombstone({"g", {9, "tsd"}, "tsd"});
  EXPECT_TRUE(fresh.recorded);
  ASSERT_TRUE(fresh.dropped);
  EXPECT_EQ(lsd.find("g"), nullptr);
  EXPECT_FALSE(lsd.apply_tombstone({"g", {9, "tsd"}, "tsd"}).recorded);
}

TEST(MakeVolatile, ConvertsPersistentCopy) {
  DirectoryState lsd("lsd", LayerKind::LSD, 30);
  lsd.store_propagated(global_service("g", "tsd"), EntryKind::PersistentPropagated, std::nullopt, 0);
  EXPECT_TRUE(lsd.make_volatile("g", 10));
  EXPECT_EQ(lsd.find("g")->kind, EntryKind::VolatileCached);
  EXPECT_EQ(lsd.find("g")->expires_at, 40);
  EXPECT_FALSE(lsd.make_volatile("g", 10));
}

}  // namespace
}  // namespace sdnet
