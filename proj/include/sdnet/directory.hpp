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

#pragma once

#include <sdnet/core_model.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

namespace sdnet {

enum class EntryKind { Registered, PersistentPropagated, VolatileCached };

inline constexpr std::string_view to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::Registered: return "Registered";
    case EntryKind::PersistentPropagated: return "PersistentPropagated";
    case EntryKind::VolatileCached: return "VolatileCached";
  }
  return "?";
}

struct DirectoryEntry {
  ServiceDescriptor descriptor;
  EntryKind kind = EntryKind::Registered;
  // Present iff kind == VolatileCached.
  std::optional<Tick> expires_at;
  std::uint32_t refresh_count = 0;
  Tick stored_at = 0;

  bool live_at(Tick now) const { return !expires_at || *expires_at > now; }

  friend bool operator==(const DirectoryEntry&, const DirectoryEntry&) = default;
};

/// Filtered search. Every present field must match; an empty query matches
/// everything.
struct LookupQuery {
  std::set<std::string> tags;
  std::optional<std::string> name_prefix;
  std::optional<Point> position;

  bool matches(const ServiceDescriptor& d) const {
    for (const auto& t : tags)
      if (!d.tags.contains(t)) return false;
    if (name_prefix && !d.name.starts_with(*name_prefix)) return false;
    if (position && !d.relevance_area.contains(*position)) return false;
    return true;
  }

  friend bool operator==(const LookupQuery&, const LookupQuery&) = default;
};

struct UtilizationRecord {
  ServiceId service_id;
  Tick tick = 0;
  NodeId node;

  friend bool operator==(const UtilizationRecord&, const UtilizationRecord&) = default;
};

enum class DirectoryError {
  GlobalAtNonTsd,
  LocalAtTsd,
  StaleVersion,
  WrongOrigin,
  NotCached,
  NotOrigin,
};

inline constexpr std::string_view to_string(DirectoryError e) {
  switch (e) {
    case DirectoryError::GlobalAtNonTsd: return "GlobalAtNonTsd";
    case DirectoryError::LocalAtTsd: return "LocalAtTsd";
    case DirectoryError::StaleVersion: return "StaleVersion";
    case DirectoryError::WrongOrigin: return "WrongOrigin";
    case DirectoryError::NotCached: return "NotCached";
    case DirectoryError::NotOrigin: return "NotOrigin";
  }
  return "?";
}

enum class StoreOutcome {
  Stored,
  Upgraded,   // volatile copy became persistent
  Rearmed,    // volatile copy of equal version got a fresh expiry
  Unchanged,  // equal version already held with the same or stronger kind
  IgnoredStale,
  IgnoredTombstoned,
};

inline constexpr bool accepted(StoreOutcome o) {
  return o == StoreOutcome::Stored || o == StoreOutcome::Upgraded || o == StoreOutcome::Rearmed;
}

struct LookupResult {
  std::vector<ServiceDescriptor> matches;
  bool miss = true;
};

struct TombstoneOutcome {
  bool recorded = false;
  std::optional<ServiceDescriptor> dropped;
};

/// Service Directory state of a single node.
class DirectoryState {
 public:
  static constexpr Tick kDefaultBaseTtl = 100;

  DirectoryState() = default;
  DirectoryState(NodeId node_id, LayerKind layer, Tick base_ttl = kDefaultBaseTtl)
      : node_id_(std::move(node_id)), layer_(layer), base_ttl_(base_ttl) {}

  const NodeId& node_id() const { return node_id_; }
  LayerKind layer() const { return layer_; }
  Tick base_ttl() const { return base_ttl_; }

  const std::map<ServiceId, DirectoryEntry>& entries() const { return entries_; }
  const std::map<ServiceId, Tombstone>& tombstones() const { return tombstones_; }
  const std::vector<UtilizationRecord>& utilization_log() const { return utilization_; }

  const DirectoryEntry* find(const ServiceId& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }
  const Tombstone* tombstone(const ServiceId& id) const {
    auto it = tombstones_.find(id);
    return it == tombstones_.end() ? nullptr : &it->second;
  }

  /// Ids of entries a lookup at `now` could return.
  std::set<ServiceId> visible_ids(Tick now) const {
    std::set<ServiceId> out;
    for (const auto& [id, e] : entries_)
      if (e.live_at(now)) out.insert(id);
    return out;
  }

  std::optional<DirectoryError> register_service(ServiceDescriptor desc, Tick now) {
    if (desc.origin_node != node_id_) return DirectoryError::WrongOrigin;
    if (desc.scope == ServiceScope::Global && layer_ != LayerKind::TSD) return DirectoryError::GlobalAtNonTsd;
    if (desc.scope == ServiceScope::Local && layer_ == LayerKind::TSD) return DirectoryError::LocalAtTsd;
    if (const auto* e = find(desc.service_id); e && desc.version <= e->descriptor.version)
      return DirectoryError::StaleVersion;
    if (const auto* t = tombstone(desc.service_id); t && desc.version <= t->version)
      return DirectoryError::StaleVersion;
    tombstones_.erase(desc.service_id);
    ServiceId id = desc.service_id;
    entries_.insert_or_assign(std::move(id), DirectoryEntry{std::move(desc), EntryKind::Registered, std::nullopt, 0, now});
    return std::nullopt;
  }

  /// Non-logging search. When `relevant_to` is set, Local-scope descriptors
  /// are returned only if their relevance area intersects it.
  std::vector<ServiceDescriptor> match(const LookupQuery& query, Tick now,
                                       const GeoArea* relevant_to = nullptr) const {
    std::vector<ServiceDescriptor> out;
    for (const auto& [id, e] : entries_) {
      if (!e.live_at(now) || !query.matches(e.descriptor)) continue;
      if (relevant_to && e.descriptor.scope == ServiceScope::Local &&
          !area_intersects(e.descriptor.relevance_area, *relevant_to))
        continue;
      out.push_back(e.descriptor);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return std::tie(a.name, a.service_id) < std::tie(b.name, b.service_id);
    });
    return out;
  }

  /// Customer-facing lookup: logs one utilization record per returned
  /// descriptor.
  LookupResult lookup(const LookupQuery& query, Tick now) {
    LookupResult r;
    r.matches = match(query, now);
    r.miss = r.matches.empty();
    for (const auto& d : r.matches) record_utilization(d.service_id, now);
    return r;
  }

  void record_utilization(const ServiceId& id, Tick now) { utilization_.push_back({id, now, node_id_}); }

  StoreOutcome store_propagated(const ServiceDescriptor& desc, EntryKind kind, std::optional<Tick> ttl, Tick now) {
    if (const auto* t = tombstone(desc.service_id); t && t->version >= desc.version)
      return StoreOutcome::IgnoredTombstoned;
    const bool is_volatile = kind == EntryKind::VolatileCached;
    std::optional<Tick> expiry;
    if (is_volatile) expiry = now + ttl.value_or(base_ttl_);

    auto it = entries_.find(desc.service_id);
    if (it != entries_.end()) {
      DirectoryEntry& cur = it->second;
      const auto order = desc.version <=> cur.descriptor.version;
      if (order < 0) return StoreOutcome::IgnoredStale;
      if (order == 0) {
        // An expired copy is treated as absent.
        if (!cur.live_at(now)) {
          cur = DirectoryEntry{desc, kind, expiry, 0, now};
          return StoreOutcome::Stored;
        }
        if (cur.kind == EntryKind::VolatileCached && !is_volatile) {
          cur.kind = kind;
          cur.expires_at.reset();
          cur.refresh_count = 0;
          cur.descriptor.strategy = desc.strategy;
          return StoreOutcome::Upgraded;
        }
        if (cur.kind == EntryKind::VolatileCached && is_volatile) {
          cur.expires_at = expiry;
          return StoreOutcome::Rearmed;
        }
        return StoreOutcome::Unchanged;
      }
      if (cur.kind == EntryKind::Registered) {
        // A newer version of a service registered here can only come from a
        // conflicting registration elsewhere; the local registration stays.
        return StoreOutcome::IgnoredStale;
      }
    }
    entries_.insert_or_assign(desc.service_id, DirectoryEntry{desc, kind, expiry, 0, now});
    return StoreOutcome::Stored;
  }

  /// Resets a cached entry's expiry to now + base_ttl.
  std::optional<DirectoryError> refresh_entry(const ServiceId& id, Tick now) {
    auto it = entries_.find(id);
    if (it == entries_.end() || it->second.kind != EntryKind::VolatileCached || !it->second.live_at(now))
      return DirectoryError::NotCached;
    it->second.expires_at = now + base_ttl_;
    ++it->second.refresh_count;
    return std::nullopt;
  }

  std::vector<ServiceId> expire_entries(Tick now) {
    std::vector<ServiceId> expired;
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (it->second.kind == EntryKind::VolatileCached && *it->second.expires_at <= now) {
        expired.push_back(it->first);
        it = entries_.erase(it);
      } else {
        ++it;
      }
    }
    return expired;
  }

  std::variant<Tombstone, DirectoryError> deregister_service(const ServiceId& id, Tick /*now*/) {
    auto it = entries_.find(id);
    if (it == entries_.end() || it->second.kind != EntryKind::Registered) return DirectoryError::NotOrigin;
    Tombstone t{id, Version{it->second.descriptor.version.timestamp + 1, node_id_}, node_id_};
    entries_.erase(it);
    tombstones_.insert_or_assign(id, t);
    return t;
  }

  /// Records a tombstone received through synchronization and drops any
  /// older entry for the same service.
  TombstoneOutcome apply_tombstone(const Tombstone& t) {
    TombstoneOutcome out;
    if (const auto* cur = tombstone(t.service_id); cur && cur->version >= t.version) return out;
    auto it = entries_.find(t.service_id);
    if (it != entries_.end()) {
      if (it->second.descriptor.version > t.version) return out;
      out.dropped = it->second.descriptor;
      entries_.erase(it);
    }
    tombstones_.insert_or_assign(t.service_id, t);
    out.recorded = true;
    return out;
  }

  // Rewrites strategy metadata on a held copy; versions are unaffected.
  bool set_strategy(const ServiceId& id, PropagationStrategy s) {
    auto it = entries_.find(id);
    if (it == entries_.end()) return false;
    it->second.descriptor.strategy = s;
    return true;
  }

  // Turns a persistent copy into a cache entry expiring at now + base_ttl.
  bool make_volatile(const ServiceId& id, Tick now) {
    auto it = entries_.find(id);
    if (it == entries_.end() || it->second.kind != EntryKind::PersistentPropagated) return false;
    it->second.kind = EntryKind::VolatileCached;
    it->second.expires_at = now + base_ttl_;
    it->second.refresh_count = 0;
    return true;
  }

  friend bool operator==(const DirectoryState&, const DirectoryState&) = default;

 private:
  NodeId node_id_;
  LayerKind layer_ = LayerKind::LSD;
  Tick base_ttl_ = kDefaultBaseTtl;
  std::map<ServiceId, DirectoryEntry> entries_;
  std::map<ServiceId, Tombstone> tombstones_;
  std::vector<UtilizationRecord> utilization_;
};

}  // namespace sdnet
