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

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sdnet {

using Counter = std::uint64_t;

struct LayerCounters {
  Counter customer_lookups = 0;
  Counter served_locally = 0;
  Counter escalated = 0;
  Counter requests_received = 0;
  Counter requests_answered = 0;
  Counter requests_forwarded = 0;
  Counter requests_unresolved = 0;
  Counter messages_sent = 0;
  Counter messages_received = 0;
  Counter cache_hits = 0;
  Counter cache_misses = 0;
  Counter refreshes = 0;
  Counter volatile_stores = 0;
  Counter expirations = 0;
};

struct LsdCacheCounters {
  Counter hits = 0;
  Counter misses = 0;
  Counter refreshes = 0;
  Counter volatile_stores = 0;
  Counter expirations = 0;
};

struct SwitchEvent {
  Tick tick = 0;
  ServiceId service_id;
  std::string decision;
};

struct StalenessSample {
  ServiceId service_id;
  Tick deleted_at = 0;
  std::optional<Tick> last_seen;
  // max(0, last_seen - deleted_at); 0 when never seen after deletion.
  Tick delta = 0;
};

struct MetricsReport {
  std::map<LayerKind, LayerCounters> layers;
  std::map<NodeId, LsdCacheCounters> lsd_cache;
  std::map<std::string, Counter> messages_by_kind;
  // Keyed "<from layer>-><to layer>", e.g. "LSD->NSD".
  std::map<std::string, Counter> messages_by_crossing;
  Counter messages_sent = 0;
  Counter messages_delivered = 0;
  Counter requests_at_tsd = 0;
  Counter ignored_stores = 0;
  Counter rejected_registrations = 0;
  Counter rejected_deregistrations = 0;
  std::vector<StalenessSample> staleness;
  std::vector<SwitchEvent> switches;
  std::map<ServiceId, Counter> promotions;
  std::map<ServiceId, Counter> demotions;
  // service -> LSD -> customer lookups served with that service.
  std::map<ServiceId, std::map<NodeId, Counter>> demand;
  Tick final_tick = 0;

  Counter total_customer_lookups() const {
    Counter n = 0;
    for (const auto& [layer, c] : layers) n += c.customer_lookups;
    return n;
  }

  Counter in_flight() const { return messages_sent - messages_delivered; }

  /// Conservation identities that every emitted report must satisfy. Returns
  /// a description of each violated identity.
  std::vector<std::string> check_identities() const {
    std::vector<std::string> bad;
    for (const auto& [layer, c] : layers) {
      if (c.served_locally + c.escalated != c.customer_lookups)
        bad.push_back(std::string(to_string(layer)) + ": served_locally + escalated != customer_lookups");
      if (c.requests_answered + c.requests_forwarded + c.requests_unresolved != c.requests_received)
        bad.push_back(std::string(to_string(layer)) + ": request outcomes do not sum to requests_received");
    }
    if (messages_delivered > messages_sent) bad.push_back("more messages delivered than sent");
    Counter by_kind = 0;
    for (const auto& [k, n] : messages_by_kind) by_kind += n;
    if (by_kind != messages_sent) bad.push_back("messages_by_kind does not sum to messages_sent");
    Counter sent = 0, received = 0;
    for (const auto& [layer, c] : layers) {
      sent += c.messages_sent;
      received += c.messages_received;
    }
    if (sent != messages_sent) bad.push_back("per-layer messages_sent does not sum to messages_sent");
    if (received != messages_delivered) bad.push_back("per-layer messages_received does not sum to messages_delivered");
    Counter hits = 0, misses = 0;
    for (const auto& [lsd, c] : lsd_cache) {
      hits += c.hits;
      misses += c.misses;
    }
    const auto lsd = layers.find(LayerKind::LSD);
    const Counter lookups = lsd == layers.end() ? 0 : lsd->second.customer_lookups;
    if (hits + misses != lookups) bad.push_back("LSD cache hits + misses != customer lookups");
    return bad;
  }

  nlohmann::json to_json() const {
    using nlohmann::json;
    json j;
    j["final_tick"] = final_tick;
    json jl = json::object();
    for (const auto& [layer, c] : layers) {
      jl[std::string(to_string(layer))] = {
          {"customer_lookups", c.customer_lookups}, {"served_locally", c.served_locally},
          {"escalated", c.escalated},               {"requests_received", c.requests_received},
          {"requests_answered", c.requests_answered}, {"requests_forwarded", c.requests_forwarded},
          {"requests_unresolved", c.requests_unresolved}, {"messages_sent", c.messages_sent},
          {"messages_received", c.messages_received}, {"cache_hits", c.cache_hits},
          {"cache_misses", c.cache_misses},         {"refreshes", c.refreshes},
          {"volatile_stores", c.volatile_stores},   {"expirations", c.expirations},
      };
    }
    j["layers"] = jl;
    json jc = json::object();
    for (const auto& [lsd, c] : lsd_cache) {
      jc[lsd] = {{"hits", c.hits},
                 {"misses", c.misses},
                 {"refreshes", c.refreshes},
                 {"volatile_stores", c.volatile_stores},
                 {"expirations", c.expirations}};
    }
    j["lsd_cache"] = jc;
    j["messages"] = {{"sent", messages_sent},
                     {"delivered", messages_delivered},
                     {"in_flight", in_flight()},
                     {"by_kind", messages_by_kind},
                     {"by_crossing", messages_by_crossing}};
    j["requests_at_tsd"] = requests_at_tsd;
    j["ignored_stores"] = ignored_stores;
    j["rejected_registrations"] = rejected_registrations;
    j["rejected_deregistrations"] = rejected_deregistrations;
    j["total_customer_lookups"] = total_customer_lookups();
    json js = json::array();
    for (const auto& s : staleness) {
      js.push_back({{"service_id", s.service_id},
                    {"deleted_at", s.deleted_at},
                    {"last_seen", s.last_seen ? json(*s.last_seen) : json(nullptr)},
                    {"delta", s.delta}});
    }
    j["staleness"] = js;
    json jsw = json::array();
    for (const auto& s : switches)
      jsw.push_back({{"tick", s.tick}, {"service_id", s.service_id}, {"decision", s.decision}});
    j["switches"] = {{"events", jsw}, {"promotions", promotions}, {"demotions", demotions}};
    j["demand"] = demand;
    return j;
  }

  std::string to_json_text() const { return to_json().dump(2) + "\n"; }

  /// One row per layer.
  std::string summary_csv() const {
    std::ostringstream os;
    os << "layer,customer_lookups,served_locally,escalated,requests_received,requests_answered,"
          "requests_forwarded,requests_unresolved,messages_sent,messages_received,cache_hits,"
          "cache_misses,refreshes,volatile_stores,expirations\n";
    for (LayerKind layer : {LayerKind::TSD, LayerKind::NSD, LayerKind::LSD}) {
      auto it = layers.find(layer);
      const LayerCounters c = it == layers.end() ? LayerCounters{} : it->second;
      os << to_string(layer) << ',' << c.customer_lookups << ',' << c.served_locally << ',' << c.escalated << ','
         << c.requests_received << ',' << c.requests_answered << ',' << c.requests_forwarded << ','
         << c.requests_unresolved << ',' << c.messages_sent << ',' << c.messages_received << ','
         << c.cache_hits << ',' << c.cache_misses << ',' << c.refreshes << ',' << c.volatile_stores << ','
         << c.expirations << '\n';
    }
    return os.str();
  }
};

}  // namespace sdnet
