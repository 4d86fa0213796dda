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

#include <sdnet/sdnet.hpp>

#include <string>
#include <utility>
#include <vector>

namespace sdnet::testing {

class TopologyBuilder {
 public:
  TopologyBuilder& tsd(const NodeId& id) {
    spec_.nodes.push_back({id, LayerKind::TSD});
    return *this;
  }
  TopologyBuilder& nsd(const NodeId& id, const NodeId& parent, Tick latency = 0) {
    spec_.nodes.push_back({id, LayerKind::NSD});
    return edge(parent, id, latency);
  }
  TopologyBuilder& lsd(const NodeId& id, const NodeId& parent, GeoArea coverage, Tick latency = 0) {
    spec_.nodes.push_back({id, LayerKind::LSD});
    spec_.lsd_coverage[id] = coverage;
    return edge(parent, id, latency);
  }
  TopologyBuilder& edge(const NodeId& parent, const NodeId& child, Tick latency = 0) {
    spec_.edges.push_back({parent, child});
    if (latency > 0) spec_.latency[{parent, child}] = latency;
    return *this;
  }
  TopologyBuilder& peer_latency(const NodeId& a, const NodeId& b, Tick latency) {
    spec_.latency[std::minmax(a, b)] = latency;
    return *this;
  }

  const TopologySpec& spec() const { return spec_; }
  Topology build() const { return require_valid(spec_); }

 private:
  TopologySpec spec_;
};

// tsd -> nsd -> {lsd-a [0,0,10,10], lsd-b [10,0,20,10]}
inline Topology chain_topology() {
  return TopologyBuilder()
      .tsd("tsd")
      .nsd("nsd", "tsd")
      .lsd("lsd-a", "nsd", {0, 0, 10, 10})
      .lsd("lsd-b", "nsd", {10, 0, 20, 10})
      .build();
}

// One TSD, NSDs north/south, two LSDs each.
inline Topology two_region_topology() {
  return TopologyBuilder()
      .tsd("tsd")
      .nsd("north", "tsd")
      .nsd("south", "tsd")
      .lsd("north-1", "north", {0, 10, 10, 20})
      .lsd("north-2", "north", {10, 10, 20, 20})
      .lsd("south-1", "south", {0, 0, 10, 10})
      .lsd("south-2", "south", {10, 0, 20, 10})
      .build();
}

inline ServiceDescriptor global_service(const ServiceId& id, const NodeId& origin,
                                        PropagationStrategy strategy = PropagationStrategy::VRP, Tick ts = 0) {
  ServiceDescriptor d;
  d.service_id = id;
  d.provider_id = "sp-" + id;
  d.name = id;
  d.scope = ServiceScope::Global;
  d.origin_node = origin;
  d.version = {ts, origin};
  d.strategy = strategy;
  return d;
}

inline ServiceDescriptor local_service(const ServiceId& id, const NodeId& origin, GeoArea area,
                                       PropagationStrategy strategy = PropagationStrategy::VRP, Tick ts = 0) {
  ServiceDescriptor d = global_service(id, origin, strategy, ts);
  d.scope = ServiceScope::Local;
  d.relevance_area = area;
  return d;
}

inline LookupQuery by_name(const std::string& name) {
  LookupQuery q;
  q.name_prefix = name;
  return q;
}

inline std::string scenario_path(const std::string& name) {
  return std::string(SDNET_SCENARIO_DIR) + "/" + name + ".json";
}

inline ScenarioFile load_scenario(const std::string& name) {
  auto r = parse_scenario(scenario_path(name));
  if (auto* errs = std::get_if<std::vector<ScenarioError>>(&r)) {
    std::string msg = name + ":";
    for (const auto& e : *errs) msg += " " + e.location + " " + e.message + ";";
    throw std::runtime_error(msg);
  }
  return std::get<ScenarioFile>(std::move(r));
}

inline std::size_t count_kind(const Simulator& sim, MessageKind kind) {
  auto r = sim.report();
  auto it = r.messages_by_kind.find(std::string(to_string(kind)));
  return it == r.messages_by_kind.end() ? 0 : it->second;
}

}  // namespace sdnet::testing
