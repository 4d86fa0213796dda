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

// Deterministic discrete-event engine for a network of service directories.
//
// Events execute in strict (tick, seq) order, where seq is assigned when an
// event is scheduled. Messages travel one tree edge (or TSD peer link) at a
// time and arrive after that link's latency. All state lives in the
// Simulator; there is no hidden randomness.
//
// Trace export format: one record per executed event, tab-separated:
//
//   tick  seq  node  action  services  message  peer  detail
//
// `services` is a comma-joined id list, `message` the delivered message kind
// and `peer` its sender and send tick as "<node>@<tick>". Empty fields are
// written as "-". The first line is a '#'-prefixed header.

#pragma once

#include <sdnet/adaptive.hpp>
#include <sdnet/core_model.hpp>
#include <sdnet/directory.hpp>
#include <sdnet/metrics.hpp>
#include <sdnet/propagation.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace sdnet {

/// Raised when the simulator detects a broken internal invariant (illegal
/// message direction, causality violation, customer lookup off an LSD).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SimParams {
  Tick base_ttl = DirectoryState::kDefaultBaseTtl;
  Tick peer_sync_period = 50;
  Tick window_length = 50;
  SwitchPolicy policy;
  bool adaptive = false;

  friend bool operator==(const SimParams&, const SimParams&) = default;
};

namespace action {

struct DeliverMessage {
  PropagationMessage msg;
  Tick sent_at = 0;
};
struct CustomerLookup {
  NodeId lsd;
  LookupQuery query;
};
struct RegisterService {
  NodeId node;
  ServiceDescriptor descriptor;
};
struct DeregisterService {
  NodeId node;
  ServiceId service_id;
};
struct PeerSyncRound {};
struct ExpirySweep {
  NodeId node;
};
// Without a service this is a periodic evaluation round over all services.
struct StrategySwitch {
  std::optional<ServiceId> service;
  SwitchDecision decision = SwitchDecision::NoChange;
};

}  // namespace action

using SimAction = std::variant<action::DeliverMessage, action::CustomerLookup, action::RegisterService,
                               action::DeregisterService, action::PeerSyncRound, action::ExpirySweep,
                               action::StrategySwitch>;

inline std::string_view action_name(const SimAction& a) {
  static constexpr std::string_view names[] = {"DeliverMessage", "CustomerLookup", "RegisterService",
                                               "DeregisterService", "PeerSyncRound", "ExpirySweep",
                                               "StrategySwitch"};
  return names[a.index()];
}

struct SimEvent {
  Tick at = 0;
  std::uint64_t seq = 0;
  SimAction action;
};

struct TraceRecord {
  Tick tick = 0;
  std::uint64_t seq = 0;
  NodeId node;
  std::string action;
  std::vector<ServiceId> services;
  std::optional<MessageKind> message;
  NodeId peer;
  std::string detail;

  std::string to_line() const {
    auto field = [](const std::string& s) { return s.empty() ? std::string("-") : s; };
    std::string ids;
    for (const auto& s : services) {
      if (!ids.empty()) ids += ',';
      ids += s;
    }
    std::ostringstream os;
    os << tick << '\t' << seq << '\t' << field(node) << '\t' << action << '\t' << field(ids) << '\t'
       << (message ? std::string(to_string(*message)) : std::string("-")) << '\t' << field(peer) << '\t'
       << field(detail);
    return os.str();
  }

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline std::string trace_text(std::span<const TraceRecord> records) {
  std::string out = "# tick\tseq\tnode\taction\tservices\tmessage\tpeer\tdetail\n";
  for (const auto& r : records) {
    out += r.to_line();
    out += '\n';
  }
  return out;
}

enum class SwitchError { UnknownService };

class Simulator {
 public:
  /// Builds one empty directory per node and pre-schedules the periodic
  /// peer-sync and adaptive-evaluation rounds.
  Simulator(Topology topology, SimParams params) : topo_(std::move(topology)), params_(params) {
    if (params_.base_ttl < 1) throw std::invalid_argument("base_ttl must be >= 1");
    for (const auto& id : topo_.nodes()) nodes_.emplace(id, DirectoryState(id, topo_.layer(id), params_.base_ttl));
    for (LayerKind layer : {LayerKind::TSD, LayerKind::NSD, LayerKind::LSD}) metrics_.layers[layer];
    for (const auto& id : topo_.nodes_of(LayerKind::LSD)) metrics_.lsd_cache[id];
    if (topo_.tsds().size() >= 2 && params_.peer_sync_period > 0)
      schedule(params_.peer_sync_period, action::PeerSyncRound{});
    if (params_.adaptive && params_.window_length > 0)
      schedule(params_.window_length, action::StrategySwitch{});
  }

  const Topology& topology() const { return topo_; }
  const SimParams& params() const { return params_; }
  Tick clock() const { return clock_; }
  const std::map<NodeId, DirectoryState>& nodes() const { return nodes_; }
  const DirectoryState& node(const NodeId& id) const { return nodes_.at(id); }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  std::size_t pending_events() const { return queue_.size(); }

  std::optional<Tick> next_event_tick() const {
    if (queue_.empty()) return std::nullopt;
    return queue_.begin()->first.first;
  }

  /// Schedules an action; the sequence number is assigned here.
  std::uint64_t schedule(Tick at, SimAction a) {
    if (at < clock_) throw InvariantViolation("event scheduled in the past");
    const std::uint64_t seq = next_seq_++;
    queue_.emplace(std::make_pair(at, seq), std::move(a));
    return seq;
  }

  void schedule_all(std::span<const SimEvent> events) {
    for (const auto& e : events) schedule(e.at, e.action);
  }

  /// Executes the (tick, seq)-minimal event.
  std::optional<TraceRecord> step() {
    if (queue_.empty()) return std::nullopt;
    auto node = queue_.extract(queue_.begin());
    clock_ = node.key().first;
    TraceRecord rec;
    rec.tick = clock_;
    rec.seq = node.key().second;
    rec.action = std::string(action_name(node.mapped()));
    std::visit([&](auto& a) { handle(a, rec); }, node.mapped());
    trace_.push_back(rec);
    return rec;
  }

  /// Steps until the queue is empty or the next event lies beyond `until`;
  /// the clock then stands at `until`.
  std::vector<TraceRecord> run(Tick until) {
    std::vector<TraceRecord> executed;
    while (!queue_.empty() && queue_.begin()->first.first <= until) executed.push_back(*step());
    clock_ = std::max(clock_, until);
    return executed;
  }

  /// True when nothing but periodic housekeeping (peer-sync rounds, expiry
  /// sweeps, evaluation rounds) remains queued.
  bool quiescent() const {
    for (const auto& [key, a] : queue_) {
      if (std::holds_alternative<action::PeerSyncRound>(a) || std::holds_alternative<action::ExpirySweep>(a))
        continue;
      if (const auto* s = std::get_if<action::StrategySwitch>(&a); s && !s->service) continue;
      return false;
    }
    return true;
  }

  /// Runs to `horizon`, then keeps stepping until quiescent.
  void run_until_quiescent(Tick horizon) {
    run(horizon);
    while (!quiescent()) step();
  }

  /// Sends a message from the current tick; arrival after the link latency.
  void send(PropagationMessage msg) {
    if (!check_edge_legal(topo_, msg))
      throw InvariantViolation("illegal " + std::string(to_string(msg.kind)) + " " + msg.from + "->" + msg.to);
    const Tick latency = topo_.latency(msg.from, msg.to);
    ++metrics_.messages_sent;
    ++metrics_.messages_by_kind[std::string(to_string(msg.kind))];
    ++metrics_.messages_by_crossing[std::string(to_string(topo_.layer(msg.from))) + "->" +
                                    std::string(to_string(topo_.layer(msg.to)))];
    ++metrics_.layers[topo_.layer(msg.from)].messages_sent;
    schedule(clock_ + latency, action::DeliverMessage{std::move(msg), clock_});
  }

  /// Pushes `desc` one hop towards every persistent target below `origin`.
  std::size_t ppp_propagate(const NodeId& origin, const ServiceDescriptor& desc) {
    const auto hops = downstream_hops(topo_, origin, desc);
    for (const auto& c : hops) send(push_message(origin, c, desc));
    return hops.size();
  }

  /// Emits deletion sync for a tombstone created at `origin`: DeleteSync down
  /// the persistent-target tree, plus PeerSync to every peer of a TSD.
  void sync_deletion(const NodeId& origin, const Tombstone& tombstone, const ServiceDescriptor& deleted) {
    for (const auto& c : downstream_hops(topo_, origin, deleted)) send(delete_message(origin, c, tombstone, deleted));
    if (topo_.layer(origin) == LayerKind::TSD) {
      for (const auto& peer : topo_.tsds()) {
        if (peer == origin) continue;
        PropagationMessage m;
        m.kind = MessageKind::PeerSync;
        m.from = origin;
        m.to = peer;
        m.tombstones = {tombstone};
        send(std::move(m));
      }
    }
  }

  /// Changes a service's propagation strategy at its origin.
  std::optional<SwitchError> apply_switch(const ServiceId& id, SwitchDecision decision) {
    const NodeId* origin = origin_of(id);
    if (!origin) return SwitchError::UnknownService;
    if (decision == SwitchDecision::NoChange) return std::nullopt;
    const NodeId origin_id = *origin;

    if (decision == SwitchDecision::PromoteToPPP) {
      for (auto& [nid, st] : nodes_) st.set_strategy(id, PropagationStrategy::PPP);
      ppp_propagate(origin_id, nodes_.at(origin_id).find(id)->descriptor);
      if (topo_.layer(origin_id) == LayerKind::TSD) {
        for (const auto& peer : topo_.tsds()) {
          if (peer == origin_id) continue;
          if (const auto* e = nodes_.at(peer).find(id); e && e->kind != EntryKind::VolatileCached)
            ppp_propagate(peer, e->descriptor);
        }
      }
      ++metrics_.promotions[id];
    } else {
      for (auto& [nid, st] : nodes_) {
        st.set_strategy(id, PropagationStrategy::VRP);
        if (topo_.layer(nid) != LayerKind::TSD && st.make_volatile(id, clock_))
          schedule_sweep(nid, *st.find(id)->expires_at);
      }
      ++metrics_.demotions[id];
    }
    last_switch_[id] = clock_;
    metrics_.switches.push_back({clock_, id, std::string(to_string(decision))});
    return std::nullopt;
  }

  std::optional<Tick> last_switch(const ServiceId& id) const {
    auto it = last_switch_.find(id);
    if (it == last_switch_.end()) return std::nullopt;
    return it->second;
  }

  /// Node holding the Registered entry for `id`, if any.
  const NodeId* origin_of(const ServiceId& id) const {
    for (const auto& [nid, st] : nodes_)
      if (const auto* e = st.find(id); e && e->kind == EntryKind::Registered) return &st.node_id();
    return nullptr;
  }

  std::vector<UtilizationRecord> all_utilization() const {
    std::vector<UtilizationRecord> out;
    for (const auto& [nid, st] : nodes_) out.insert(out.end(), st.utilization_log().begin(), st.utilization_log().end());
    return out;
  }

  MetricsReport report() const {
    MetricsReport r = metrics_;
    r.final_tick = clock_;
    for (const auto& [id, deleted] : deleted_at_) {
      StalenessSample s{id, deleted, std::nullopt, 0};
      if (auto it = last_seen_.find(id); it != last_seen_.end()) {
        s.last_seen = it->second;
        s.delta = std::max<Tick>(0, it->second - deleted);
      }
      r.staleness.push_back(s);
    }
    return r;
  }

 private:
  static PropagationMessage push_message(const NodeId& from, const NodeId& to, const ServiceDescriptor& d) {
    PropagationMessage m;
    m.kind = MessageKind::Push;
    m.from = from;
    m.to = to;
    m.descriptors = {d};
    return m;
  }

  static PropagationMessage delete_message(const NodeId& from, const NodeId& to, const Tombstone& t,
                                           const ServiceDescriptor& deleted) {
    PropagationMessage m;
    m.kind = MessageKind::DeleteSync;
    m.from = from;
    m.to = to;
    m.tombstones = {t};
    // Carried only so each hop can route to the same targets.
    m.descriptors = {deleted};
    return m;
  }

  static std::string_view outcome_name(StoreOutcome o) {
    switch (o) {
      case StoreOutcome::Stored: return "stored";
      case StoreOutcome::Upgraded: return "upgraded";
      case StoreOutcome::Rearmed: return "rearmed";
      case StoreOutcome::Unchanged: return "unchanged";
      case StoreOutcome::IgnoredStale: return "ignored-stale";
      case StoreOutcome::IgnoredTombstoned: return "ignored-tombstoned";
    }
    return "?";
  }

  void schedule_sweep(const NodeId& node, Tick at) {
    if (sweeps_pending_.insert({node, at}).second) schedule(at, action::ExpirySweep{node});
  }

  void note_served(const NodeId& lsd, const ServiceId& id) {
    ++metrics_.demand[id][lsd];
    last_seen_[id] = clock_;
  }

  // --- handlers -----------------------------------------------------------

  void handle(action::DeliverMessage& a, TraceRecord& rec) {
    PropagationMessage& msg = a.msg;
    if (!check_edge_legal(topo_, msg))
      throw InvariantViolation("illegal delivery " + std::string(to_string(msg.kind)) + " " + msg.from + "->" +
                               msg.to);
    if (clock_ < a.sent_at + topo_.latency(msg.from, msg.to))
      throw InvariantViolation("message delivered before its latency elapsed");
    ++metrics_.messages_delivered;
    ++metrics_.layers[topo_.layer(msg.to)].messages_received;
    rec.node = msg.to;
    rec.message = msg.kind;
    rec.peer = msg.from + "@" + std::to_string(a.sent_at);
    switch (msg.kind) {
      case MessageKind::Push: on_push(msg, rec); break;
      case MessageKind::DeleteSync: on_delete_sync(msg, rec); break;
      case MessageKind::Request: on_request(msg, rec); break;
      case MessageKind::Response: on_response(msg, rec); break;
      case MessageKind::PeerSync: on_peer_sync(msg, rec); break;
    }
  }

  void on_push(const PropagationMessage& msg, TraceRecord& rec) {
    const ServiceDescriptor& d = msg.descriptors.front();
    const StoreOutcome o = nodes_.at(msg.to).store_propagated(d, EntryKind::PersistentPropagated, std::nullopt, clock_);
    if (o == StoreOutcome::IgnoredStale || o == StoreOutcome::IgnoredTombstoned) ++metrics_.ignored_stores;
    rec.services = {d.service_id};
    rec.detail = std::string(outcome_name(o));
    for (const auto& c : downstream_hops(topo_, msg.to, d)) send(push_message(msg.to, c, d));
  }

  void on_delete_sync(const PropagationMessage& msg, TraceRecord& rec) {
    const Tombstone& t = msg.tombstones.front();
    const TombstoneOutcome o = nodes_.at(msg.to).apply_tombstone(t);
    rec.services = {t.service_id};
    rec.detail = o.dropped ? "dropped" : (o.recorded ? "recorded" : "ignored");
    for (const auto& c : downstream_hops(topo_, msg.to, msg.descriptors.front()))
      send(delete_message(msg.to, c, t, msg.descriptors.front()));
  }

  void on_request(const PropagationMessage& msg, TraceRecord& rec) {
    const NodeId& here = msg.to;
    DirectoryState& st = nodes_.at(here);
    LayerCounters& lc = metrics_.layers[topo_.layer(here)];
    ++lc.requests_received;
    if (topo_.layer(here) == LayerKind::TSD) ++metrics_.requests_at_tsd;

    const GeoArea& coverage = topo_.coverage(msg.hop_chain.front());
    auto matches = st.match(*msg.query, clock_, &coverage);
    for (const auto& d : matches) rec.services.push_back(d.service_id);

    PropagationMessage next;
    next.query = msg.query;
    next.request_id = msg.request_id;
    next.from = here;
    if (!matches.empty() || !topo_.parent(here)) {
      for (const auto& d : matches) {
        if (!st.refresh_entry(d.service_id, clock_)) {
          ++lc.refreshes;
          schedule_sweep(here, *st.find(d.service_id)->expires_at);
        }
      }
      if (matches.empty()) {
        ++lc.requests_unresolved;
        rec.detail = "unresolved";
      } else {
        ++lc.requests_answered;
        rec.detail = "answer";
      }
      next.kind = MessageKind::Response;
      next.to = msg.hop_chain.back();
      next.hop_chain = msg.hop_chain;
      next.descriptors = std::move(matches);
    } else {
      ++lc.requests_forwarded;
      rec.detail = "forward";
      next.kind = MessageKind::Request;
      next.to = *topo_.parent(here);
      next.hop_chain = msg.hop_chain;
      next.hop_chain.push_back(here);
    }
    send(std::move(next));
  }

  void on_response(const PropagationMessage& msg, TraceRecord& rec) {
    const NodeId& here = msg.to;
    DirectoryState& st = nodes_.at(here);
    LayerCounters& lc = metrics_.layers[topo_.layer(here)];
    const bool at_origin_lsd = msg.hop_chain.front() == here;
    std::vector<ServiceId> served;
    for (const auto& d : msg.descriptors) {
      const StoreOutcome o = st.store_propagated(d, EntryKind::VolatileCached, params_.base_ttl, clock_);
      rec.services.push_back(d.service_id);
      if (o == StoreOutcome::IgnoredStale || o == StoreOutcome::IgnoredTombstoned) ++metrics_.ignored_stores;
      if (o != StoreOutcome::IgnoredTombstoned) served.push_back(d.service_id);
      if (o == StoreOutcome::Stored || o == StoreOutcome::Rearmed) {
        ++lc.volatile_stores;
        if (topo_.layer(here) == LayerKind::LSD) ++metrics_.lsd_cache[here].volatile_stores;
        schedule_sweep(here, *st.find(d.service_id)->expires_at);
      }
    }
    if (!at_origin_lsd) {
      rec.detail = msg.descriptors.empty() ? "relay-empty" : "cached";
      auto pos = std::find(msg.hop_chain.begin(), msg.hop_chain.end(), here);
      PropagationMessage next = msg;
      next.from = here;
      next.to = *std::prev(pos);
      send(std::move(next));
      return;
    }
    rec.detail = msg.descriptors.empty() ? "empty" : "served";
    for (const auto& id : served) {
      st.record_utilization(id, clock_);
      note_served(here, id);
    }
  }

  void on_peer_sync(const PropagationMessage& msg, TraceRecord& rec) {
    const NodeId& here = msg.to;
    DirectoryState& st = nodes_.at(here);
    const MergeOutcome o = merge_peer_digest(st, PeerDigest{msg.descriptors, msg.tombstones}, clock_);
    for (const auto& d : o.dropped) {
      rec.services.push_back(d.service_id);
      const Tombstone& t = *st.tombstone(d.service_id);
      for (const auto& c : downstream_hops(topo_, here, d)) send(delete_message(here, c, t, d));
    }
    for (const auto& d : o.adopted) {
      rec.services.push_back(d.service_id);
      if (d.strategy == PropagationStrategy::PPP) ppp_propagate(here, d);
    }
    std::sort(rec.services.begin(), rec.services.end());
    rec.detail = "adopted=" + std::to_string(o.adopted.size()) + ";dropped=" + std::to_string(o.dropped.size());
  }

  void handle(action::CustomerLookup& a, TraceRecord& rec) {
    if (!topo_.contains(a.lsd) || topo_.layer(a.lsd) != LayerKind::LSD)
      throw InvariantViolation("customer lookup at non-LSD node '" + a.lsd + "'");
    rec.node = a.lsd;
    DirectoryState& st = nodes_.at(a.lsd);
    LayerCounters& lc = metrics_.layers[LayerKind::LSD];
    LsdCacheCounters& cc = metrics_.lsd_cache[a.lsd];
    ++lc.customer_lookups;
    const LookupResult r = st.lookup(a.query, clock_);
    if (!r.miss) {
      ++lc.served_locally;
      ++lc.cache_hits;
      ++cc.hits;
      rec.detail = "hit";
      for (const auto& d : r.matches) {
        rec.services.push_back(d.service_id);
        note_served(a.lsd, d.service_id);
        if (!st.refresh_entry(d.service_id, clock_)) {
          ++lc.refreshes;
          ++cc.refreshes;
          schedule_sweep(a.lsd, *st.find(d.service_id)->expires_at);
        }
      }
      return;
    }
    ++lc.escalated;
    ++lc.cache_misses;
    ++cc.misses;
    rec.detail = "miss";
    PropagationMessage req;
    req.kind = MessageKind::Request;
    req.from = a.lsd;
    req.to = *topo_.parent(a.lsd);
    req.query = a.query;
    req.hop_chain = {a.lsd};
    req.request_id = ++next_request_id_;
    send(std::move(req));
  }

  void handle(action::RegisterService& a, TraceRecord& rec) {
    rec.node = a.node;
    rec.services = {a.descriptor.service_id};
    if (!topo_.contains(a.node)) throw InvariantViolation("registration at unknown node '" + a.node + "'");
    if (auto err = nodes_.at(a.node).register_service(a.descriptor, clock_)) {
      ++metrics_.rejected_registrations;
      rec.detail = "rejected:" + std::string(to_string(*err));
      return;
    }
    rec.detail = "registered";
    if (a.descriptor.strategy == PropagationStrategy::PPP) ppp_propagate(a.node, a.descriptor);
  }

  void handle(action::DeregisterService& a, TraceRecord& rec) {
    rec.node = a.node;
    rec.services = {a.service_id};
    if (!topo_.contains(a.node)) throw InvariantViolation("deregistration at unknown node '" + a.node + "'");
    DirectoryState& st = nodes_.at(a.node);
    std::optional<ServiceDescriptor> deleted;
    if (const auto* e = st.find(a.service_id)) deleted = e->descriptor;
    auto result = st.deregister_service(a.service_id, clock_);
    if (auto* err = std::get_if<DirectoryError>(&result)) {
      ++metrics_.rejected_deregistrations;
      rec.detail = "rejected:" + std::string(to_string(*err));
      return;
    }
    rec.detail = "deregistered";
    deleted_at_[a.service_id] = clock_;
    sync_deletion(a.node, std::get<Tombstone>(result), *deleted);
  }

  void handle(action::PeerSyncRound&, TraceRecord& rec) {
    const auto& tsds = topo_.tsds();
    std::size_t sent = 0;
    for (const auto& a : tsds) {
      const PeerDigest digest = make_digest(nodes_.at(a));
      for (const auto& b : tsds) {
        if (a == b) continue;
        PropagationMessage m;
        m.kind = MessageKind::PeerSync;
        m.from = a;
        m.to = b;
        m.descriptors = digest.entries;
        m.tombstones = digest.tombstones;
        send(std::move(m));
        ++sent;
      }
    }
    rec.detail = "messages=" + std::to_string(sent);
    schedule(clock_ + params_.peer_sync_period, action::PeerSyncRound{});
  }

  void handle(action::ExpirySweep& a, TraceRecord& rec) {
    sweeps_pending_.erase({a.node, clock_});
    rec.node = a.node;
    rec.services = nodes_.at(a.node).expire_entries(clock_);
    const LayerKind layer = topo_.layer(a.node);
    metrics_.layers[layer].expirations += rec.services.size();
    if (layer == LayerKind::LSD) metrics_.lsd_cache[a.node].expirations += rec.services.size();
  }

  void handle(action::StrategySwitch& a, TraceRecord& rec) {
    if (a.service) {
      rec.services = {*a.service};
      if (apply_switch(*a.service, a.decision)) {
        rec.detail = "unknown-service";
      } else {
        rec.detail = std::string(to_string(a.decision));
        rec.node = *origin_of(*a.service);
      }
      return;
    }
    const auto log = all_utilization();
    std::vector<std::pair<ServiceId, SwitchDecision>> decisions;
    for (const auto& [nid, st] : nodes_) {
      for (const auto& [id, e] : st.entries()) {
        if (e.kind != EntryKind::Registered) continue;
        const Hotness hot = hotness(log, id, clock_, params_.window_length);
        const auto d = recommend(e.descriptor, topo_.layer(nid), hot, params_.policy, last_switch(id), clock_);
        if (d != SwitchDecision::NoChange) decisions.emplace_back(id, d);
      }
    }
    std::sort(decisions.begin(), decisions.end());
    for (const auto& [id, d] : decisions) {
      apply_switch(id, d);
      rec.services.push_back(id);
      if (!rec.detail.empty()) rec.detail += ';';
      rec.detail += std::string(to_string(d)) + ":" + id;
    }
    if (rec.detail.empty()) rec.detail = "none";
    schedule(clock_ + params_.window_length, action::StrategySwitch{});
  }

  Topology topo_;
  SimParams params_;
  Tick clock_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_request_id_ = 0;
  std::map<std::pair<Tick, std::uint64_t>, SimAction> queue_;
  std::map<NodeId, DirectoryState> nodes_;
  std::set<std::pair<NodeId, Tick>> sweeps_pending_;
  MetricsReport metrics_;
  std::vector<TraceRecord> trace_;
  std::map<ServiceId, Tick> last_switch_;
  std::map<ServiceId, Tick> deleted_at_;
  std::map<ServiceId, Tick> last_seen_;
};

// ---------------------------------------------------------------------------
// Workload
// ---------------------------------------------------------------------------

struct LookupSpec {
  Tick tick = 0;
  NodeId node;
  LookupQuery query;

  friend bool operator==(const LookupSpec&, const LookupSpec&) = default;
};

struct RegistrationSpec {
  Tick tick = 0;
  NodeId node;
  ServiceDescriptor descriptor;

  friend bool operator==(const RegistrationSpec&, const RegistrationSpec&) = default;
};

struct DeregistrationSpec {
  Tick tick = 0;
  NodeId node;
  ServiceId service_id;

  friend bool operator==(const DeregistrationSpec&, const DeregistrationSpec&) = default;
};

/// Synthetic customer demand: every tick in [start, end) each LSD receives a
/// Poisson(rate) number of lookups, each for a service name drawn with
/// probability proportional to 1 / rank^skew over registered names in
/// registration order.
struct GeneratorSpec {
  double rate = 0.0;
  double skew = 1.0;
  std::optional<std::uint64_t> seed;
  Tick start = 0;
  Tick end = 0;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

struct WorkloadSpec {
  std::vector<RegistrationSpec> registrations;
  std::vector<DeregistrationSpec> deregistrations;
  std::vector<LookupSpec> lookups;
  std::optional<GeneratorSpec> generator;

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

enum class WorkloadErrorKind { LookupAtNonLsd, UnknownNode, InvalidGenerator };

struct WorkloadError {
  WorkloadErrorKind kind;
  std::string message;
};

namespace detail {

// Distribution sampling is done by hand on top of mt19937_64 because the
// standard distributions are implementation-defined and would make traces
// differ between standard libraries.
class WorkloadRng {
 public:
  explicit WorkloadRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t poisson(double rate) {
    const double limit = std::exp(-rate);
    std::uint64_t k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }

  std::size_t pick(std::span<const double> cumulative) {
    const double u = uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Fills in the defaults of a registration: origin = registering node,
/// version = (tick, node) when unset.
inline ServiceDescriptor normalized_descriptor(const RegistrationSpec& r) {
  ServiceDescriptor d = r.descriptor;
  if (d.origin_node.empty()) d.origin_node = r.node;
  if (d.version.node.empty()) d.version = Version{r.tick, r.node};
  return d;
}

/// Expands a workload into concrete events, ordered by tick and then
/// registrations, deregistrations, explicit lookups, generated lookups.
inline std::variant<std::vector<SimEvent>, WorkloadError> generate_workload(const WorkloadSpec& spec,
                                                                            const Topology& topo,
                                                                            std::uint64_t seed) {
  struct Keyed {
    Tick tick;
    int category;
    std::size_t index;
    SimAction action;
  };
  std::vector<Keyed> out;
  auto known = [&](const NodeId& id) { return topo.contains(id); };

  for (std::size_t i = 0; i < spec.registrations.size(); ++i) {
    const auto& r = spec.registrations[i];
    if (!known(r.node)) return WorkloadError{WorkloadErrorKind::UnknownNode, "registration at unknown node '" + r.node + "'"};
    out.push_back({r.tick, 0, i, action::RegisterService{r.node, normalized_descriptor(r)}});
  }
  for (std::size_t i = 0; i < spec.deregistrations.size(); ++i) {
    const auto& d = spec.deregistrations[i];
    if (!known(d.node)) return WorkloadError{WorkloadErrorKind::UnknownNode, "deregistration at unknown node '" + d.node + "'"};
    out.push_back({d.tick, 1, i, action::DeregisterService{d.node, d.service_id}});
  }
  for (std::size_t i = 0; i < spec.lookups.size(); ++i) {
    const auto& l = spec.lookups[i];
    if (!known(l.node)) return WorkloadError{WorkloadErrorKind::UnknownNode, "lookup at unknown node '" + l.node + "'"};
    if (topo.layer(l.node) != LayerKind::LSD)
      return WorkloadError{WorkloadErrorKind::LookupAtNonLsd,
                           "lookup targets " + std::string(to_string(topo.layer(l.node))) + " '" + l.node + "'"};
    out.push_back({l.tick, 2, i, action::CustomerLookup{l.node, l.query}});
  }

  if (spec.generator) {
    const GeneratorSpec& g = *spec.generator;
    if (!(g.rate >= 0.0) || !std::isfinite(g.rate) || !(g.skew >= 0.0) || !std::isfinite(g.skew))
      return WorkloadError{WorkloadErrorKind::InvalidGenerator, "generator rate and skew must be finite and >= 0"};
    std::vector<std::string> names;
    for (const auto& r : spec.registrations)
      if (std::find(names.begin(), names.end(), r.descriptor.name) == names.end()) names.push_back(r.descriptor.name);
    if (g.rate > 0.0 && !names.empty()) {
      std::vector<double> cumulative;
      double acc = 0.0;
      for (std::size_t k = 0; k < names.size(); ++k) {
        acc += 1.0 / std::pow(static_cast<double>(k + 1), g.skew);
        cumulative.push_back(acc);
      }
      detail::WorkloadRng rng(g.seed.value_or(seed));
      const auto lsds = topo.nodes_of(LayerKind::LSD);
      std::size_t index = 0;
      for (Tick t = g.start; t < g.end; ++t) {
        for (const auto& lsd : lsds) {
          const std::uint64_t n = rng.poisson(g.rate);
          for (std::uint64_t j = 0; j < n; ++j) {
            LookupQuery q;
            q.name_prefix = names[rng.pick(cumulative)];
            out.push_back({t, 3, index++, action::CustomerLookup{lsd, std::move(q)}});
          }
        }
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.tick, a.category, a.index) < std::tie(b.tick, b.category, b.index);
  });
  std::vector<SimEvent> events;
  events.reserve(out.size());
  for (auto& k : out) events.push_back(SimEvent{k.tick, 0, std::move(k.action)});
  return events;
}

}  // namespace sdnet
