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

// Message-level building blocks for distributing service information:
// persistent push targets, direction rules for every message kind, and the
// anti-entropy merge used between TSD peers. The event-driven halves
// (push fan-out, reactive resolution, deletion sync) live in Simulator.

#pragma once

#include <sdnet/core_model.hpp>
#include <sdnet/directory.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

namespace sdnet {

enum class MessageKind { Push, Request, Response, DeleteSync, PeerSync };

inline constexpr std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::Push: return "Push";
    case MessageKind::Request: return "Request";
    case MessageKind::Response: return "Response";
    case MessageKind::DeleteSync: return "DeleteSync";
    case MessageKind::PeerSync: return "PeerSync";
  }
  return "?";
}

struct PropagationMessage {
  MessageKind kind = MessageKind::Push;
  NodeId from;
  NodeId to;
  // Push: one descriptor. Response: the answer set. PeerSync: sender's
  // registered and persistent entries.
  std::vector<ServiceDescriptor> descriptors;
  // DeleteSync: one tombstone. PeerSync: all of the sender's tombstones.
  std::vector<Tombstone> tombstones;
  // Request/Response only.
  std::optional<LookupQuery> query;
  // Request/Response only: originating LSD first, then every node the
  // request passed through. Constant once the request is answered.
  std::vector<NodeId> hop_chain;
  std::uint64_t request_id = 0;

  friend bool operator==(const PropagationMessage&, const PropagationMessage&) = default;
};

/// Whether a descriptor is relevant at an LSD. Global services are relevant
/// everywhere; Local ones only where their area meets the LSD coverage.
inline bool relevant_at(const Topology& topo, const NodeId& lsd, const ServiceDescriptor& desc) {
  return desc.scope == ServiceScope::Global || area_intersects(desc.relevance_area, topo.coverage(lsd));
}

/// Persistent push targets below `origin`: relevant LSD descendants plus
/// every NSD that has at least one of them beneath it.
inline std::set<NodeId> ppp_targets(const Topology& topo, const NodeId& origin, const ServiceDescriptor& desc) {
  std::set<NodeId> out;
  // Post-order so an NSD sees its children's verdicts first.
  auto visit = [&](auto& self, const NodeId& n) -> bool {
    if (topo.layer(n) == LayerKind::LSD) {
      if (!relevant_at(topo, n, desc)) return false;
      out.insert(n);
      return true;
    }
    bool any = false;
    for (const auto& c : topo.children(n)) any = self(self, c) || any;
    if (any && n != origin) out.insert(n);
    return any;
  };
  if (topo.layer(origin) != LayerKind::LSD) visit(visit, origin);
  return out;
}

/// Next hops of a downward push or deletion issued by `from`.
inline std::vector<NodeId> downstream_hops(const Topology& topo, const NodeId& from, const ServiceDescriptor& desc) {
  const auto targets = ppp_targets(topo, from, desc);
  std::vector<NodeId> hops;
  for (const auto& c : topo.children(from))
    if (targets.contains(c)) hops.push_back(c);
  return hops;
}

inline bool check_edge_legal(const Topology& topo, const PropagationMessage& msg) {
  if (!topo.contains(msg.from) || !topo.contains(msg.to) || msg.from == msg.to) return false;
  switch (msg.kind) {
    case MessageKind::Push:
    case MessageKind::DeleteSync:
      return topo.parent(msg.to) == msg.from;
    case MessageKind::Request:
      return topo.parent(msg.from) == msg.to;
    case MessageKind::Response:
      return topo.parent(msg.to) == msg.from &&
             std::find(msg.hop_chain.begin(), msg.hop_chain.end(), msg.to) != msg.hop_chain.end();
    case MessageKind::PeerSync:
      return topo.layer(msg.from) == LayerKind::TSD && topo.layer(msg.to) == LayerKind::TSD;
  }
  return false;
}

// ---------------------------------------------------------------------------
// TSD anti-entropy
// ---------------------------------------------------------------------------

struct PeerDigest {
  std::vector<ServiceDescriptor> entries;
  std::vector<Tombstone> tombstones;
};

inline PeerDigest make_digest(const DirectoryState& state) {
  PeerDigest d;
  for (const auto& [id, e] : state.entries())
    if (e.kind != EntryKind::VolatileCached) d.entries.push_back(e.descriptor);
  for (const auto& [id, t] : state.tombstones()) d.tombstones.push_back(t);
  return d;
}

struct MergeOutcome {
  // Newly held descriptors, and descriptors removed by incoming tombstones.
  std::vector<ServiceDescriptor> adopted;
  std::vector<ServiceDescriptor> dropped;
  std::size_t tombstones_recorded = 0;

  bool changed() const { return !adopted.empty() || tombstones_recorded > 0; }
};

/// One-sided merge: `into` keeps, per service id, the version-maximal of its
/// own entry/tombstone and the incoming ones. Tombstones win version ties.
inline MergeOutcome merge_peer_digest(DirectoryState& into, const PeerDigest& from, Tick now) {
  MergeOutcome out;
  for (const auto& t : from.tombstones) {
    auto r = into.apply_tombstone(t);
    if (r.recorded) ++out.tombstones_recorded;
    if (r.dropped) out.dropped.push_back(*r.dropped);
  }
  for (const auto& d : from.entries) {
    if (accepted(into.store_propagated(d, EntryKind::PersistentPropagated, std::nullopt, now)))
      out.adopted.push_back(d);
  }
  return out;
}

/// Pairwise anti-entropy between two TSD states.
inline std::pair<DirectoryState, DirectoryState> tsd_peer_sync(DirectoryState a, DirectoryState b, Tick now = 0) {
  const PeerDigest da = make_digest(a);
  const PeerDigest db = make_digest(b);
  merge_peer_digest(a, db, now);
  merge_peer_digest(b, da, now);
  return {std::move(a), std::move(b)};
}

/// Content of a replica independent of which node holds it: per service id,
/// whichever of the live entry and the tombstone has the greater version.
struct ReplicaView {
  std::map<ServiceId, Version> live;
  std::map<ServiceId, Version> deleted;

  friend bool operator==(const ReplicaView&, const ReplicaView&) = default;
};

inline ReplicaView replica_view(const DirectoryState& s) {
  ReplicaView v;
  for (const auto& [id, e] : s.entries())
    if (e.kind != EntryKind::VolatileCached) v.live[id] = e.descriptor.version;
  for (const auto& [id, t] : s.tombstones()) {
    auto it = v.live.find(id);
    if (it != v.live.end() && it->second > t.version) continue;
    if (it != v.live.end()) v.live.erase(it);
    v.deleted[id] = t.version;
  }
  return v;
}

}  // namespace sdnet
