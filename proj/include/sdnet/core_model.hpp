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

// Shared domain model for the hierarchical service directory: layers,
// geographic areas, versions, service descriptors and the validated
// TSD/NSD/LSD topology.

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sdnet {

using NodeId = std::string;
using ServiceId = std::string;
using Tick = std::int64_t;

/// Directory layer. Declaration order gives LSD < NSD < TSD.
enum class LayerKind { LSD, NSD, TSD };

enum class ServiceScope { Global, Local };

enum class PropagationStrategy { PPP, VRP };

inline constexpr std::string_view to_string(LayerKind layer) {
  switch (layer) {
    case LayerKind::TSD: return "TSD";
    case LayerKind::NSD: return "NSD";
    case LayerKind::LSD: return "LSD";
  }
  return "?";
}

inline constexpr std::string_view to_string(ServiceScope scope) {
  return scope == ServiceScope::Global ? "Global" : "Local";
}

inline constexpr std::string_view to_string(PropagationStrategy strategy) {
  return strategy == PropagationStrategy::PPP ? "PPP" : "VRP";
}

inline std::optional<LayerKind> parse_layer(std::string_view s) {
  if (s == "TSD") return LayerKind::TSD;
  if (s == "NSD") return LayerKind::NSD;
  if (s == "LSD") return LayerKind::LSD;
  return std::nullopt;
}

inline std::optional<ServiceScope> parse_scope(std::string_view s) {
  if (s == "Global") return ServiceScope::Global;
  if (s == "Local") return ServiceScope::Local;
  return std::nullopt;
}

inline std::optional<PropagationStrategy> parse_strategy(std::string_view s) {
  if (s == "PPP") return PropagationStrategy::PPP;
  if (s == "VRP") return PropagationStrategy::VRP;
  return std::nullopt;
}

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle in planar simulation units.
struct GeoArea {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  static constexpr GeoArea full_plane() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {-inf, -inf, inf, inf};
  }

  constexpr bool valid() const { return x_min <= x_max && y_min <= y_max; }
  constexpr bool empty() const { return x_min == x_max || y_min == y_max; }
  constexpr bool is_full_plane() const { return *this == full_plane(); }

  // Closed containment; a point on the border is inside.
  constexpr bool contains(Point p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }

  constexpr bool contains(const GeoArea& other) const {
    return other.x_min >= x_min && other.x_max <= x_max &&
           other.y_min >= y_min && other.y_max <= y_max;
  }

  friend constexpr bool operator==(const GeoArea&, const GeoArea&) = default;
};

/// True iff the rectangles share a region of positive area. Touching edges
/// and empty rectangles never intersect.
inline constexpr bool area_intersects(const GeoArea& a, const GeoArea& b) {
  const double width = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double height = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  return width > 0.0 && height > 0.0;
}

/// Last-writer-wins version: logical timestamp first, origin node id as the
/// lexicographic tie-break.
struct Version {
  Tick timestamp = 0;
  NodeId node;

  friend std::strong_ordering operator<=>(const Version&, const Version&) = default;
  friend bool operator==(const Version&, const Version&) = default;
};

inline std::strong_ordering version_order(const Version& a, const Version& b) {
  return a <=> b;
}

struct ServiceDescriptor {
  ServiceId service_id;
  std::string provider_id;
  std::string name;
  std::set<std::string> tags;
  ServiceScope scope = ServiceScope::Global;
  GeoArea relevance_area = GeoArea::full_plane();
  // Opaque, never parsed (WSDL or similar).
  std::string access_description;
  Version version;
  NodeId origin_node;
  PropagationStrategy strategy = PropagationStrategy::VRP;

  friend bool operator==(const ServiceDescriptor&, const ServiceDescriptor&) = default;
};

/// Versioned deletion marker. Its version is strictly greater than the
/// version of the descriptor it deletes.
struct Tombstone {
  ServiceId service_id;
  Version version;
  NodeId origin_node;

  friend bool operator==(const Tombstone&, const Tombstone&) = default;
};

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

struct NodeDecl {
  NodeId id;
  LayerKind layer = LayerKind::LSD;

  friend bool operator==(const NodeDecl&, const NodeDecl&) = default;
};

struct EdgeDecl {
  NodeId parent;
  NodeId child;

  friend bool operator==(const EdgeDecl&, const EdgeDecl&) = default;
};

/// Unvalidated topology as authored in a scenario.
struct TopologySpec {
  std::vector<NodeDecl> nodes;
  std::vector<EdgeDecl> edges;
  // Empty means "derive from the TSD nodes"; otherwise it must list every TSD.
  std::set<NodeId> tsd_peers;
  std::map<NodeId, GeoArea> lsd_coverage;
  // Keyed by (parent, child) for tree edges, or by the ordered TSD pair
  // (min, max) for peer links.
  std::map<std::pair<NodeId, NodeId>, Tick> latency;
  Tick default_latency = 1;

  friend bool operator==(const TopologySpec&, const TopologySpec&) = default;
};

enum class ViolationKind {
  DuplicateNode,
  UnknownNode,
  LsdHasChildren,
  LsdParentNotNsd,
  NsdParentIsLsd,
  MultipleParents,
  Cycle,
  TsdHasParent,
  MissingParent,
  MissingCoverage,
  InvalidCoverage,
  CoverageOnNonLsd,
  PeerSetMismatch,
  InvalidLatency,
  NoTsd,
};

struct TopologyViolation {
  ViolationKind kind;
  // Offending node id, or "parent->child" for edges.
  std::string subject;
  std::string message;
};

class Topology;
using TopologyResult = std::variant<Topology, std::vector<TopologyViolation>>;
TopologyResult validate_topology(const TopologySpec& spec);

/// Validated, immutable TSD/NSD/LSD tree. Obtainable only through
/// validate_topology().
class Topology {
 public:
  const TopologySpec& spec() const { return spec_; }

  bool contains(const NodeId& id) const { return layers_.contains(id); }
  LayerKind layer(const NodeId& id) const { return layers_.at(id); }

  // Sorted node ids.
  const std::vector<NodeId>& nodes() const { return order_; }
  const std::vector<NodeId>& tsds() const { return tsds_; }
  std::vector<NodeId> nodes_of(LayerKind layer) const {
    std::vector<NodeId> out;
    for (const auto& id : order_)
      if (layers_.at(id) == layer) out.push_back(id);
    return out;
  }

  std::optional<NodeId> parent(const NodeId& id) const {
    auto it = parent_.find(id);
    if (it == parent_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<NodeId>& children(const NodeId& id) const { return children_.at(id); }

  // Number of parent hops to the owning TSD.
  int depth(const NodeId& id) const { return depth_.at(id); }
  const NodeId& root(const NodeId& id) const { return root_.at(id); }

  // Strict descendants in pre-order, children visited in sorted order.
  std::vector<NodeId> descendants(const NodeId& id) const {
    std::vector<NodeId> out;
    std::vector<NodeId> stack(children_.at(id).rbegin(), children_.at(id).rend());
    while (!stack.empty()) {
      NodeId n = std::move(stack.back());
      stack.pop_back();
      const auto& kids = children_.at(n);
      stack.insert(stack.end(), kids.rbegin(), kids.rend());
      out.push_back(std::move(n));
    }
    return out;
  }

  /// True iff `ancestor` lies strictly above `node` on its parent chain.
  bool is_ancestor(const NodeId& ancestor, const NodeId& node) const {
    for (auto p = parent(node); p; p = parent(*p))
      if (*p == ancestor) return true;
    return false;
  }

  const GeoArea& coverage(const NodeId& lsd) const { return spec_.lsd_coverage.at(lsd); }

  Tick latency(const NodeId& a, const NodeId& b) const {
    auto it = spec_.latency.find({a, b});
    if (it != spec_.latency.end()) return it->second;
    it = spec_.latency.find({b, a});
    if (it != spec_.latency.end()) return it->second;
    return spec_.default_latency;
  }

  Tick max_latency() const {
    Tick m = spec_.default_latency;
    for (const auto& [edge, ticks] : spec_.latency) m = std::max(m, ticks);
    return m;
  }

  friend bool operator==(const Topology& a, const Topology& b) { return a.spec_ == b.spec_; }

 private:
  friend TopologyResult validate_topology(const TopologySpec& spec);
  Topology() = default;

  TopologySpec spec_;
  std::map<NodeId, LayerKind> layers_;
  std::vector<NodeId> order_;
  std::vector<NodeId> tsds_;
  std::map<NodeId, NodeId> parent_;
  std::map<NodeId, std::vector<NodeId>> children_;
  std::map<NodeId, int> depth_;
  std::map<NodeId, NodeId> root_;
};

inline TopologyResult validate_topology(const TopologySpec& spec) {
  std::vector<TopologyViolation> errs;
  auto report = [&errs](ViolationKind k, std::string subject, std::string msg) {
    errs.push_back({k, std::move(subject), std::move(msg)});
  };
  auto edge_name = [](const EdgeDecl& e) { return e.parent + "->" + e.child; };

  Topology topo;
  topo.spec_ = spec;

  for (const auto& n : spec.nodes) {
    if (!topo.layers_.emplace(n.id, n.layer).second)
      report(ViolationKind::DuplicateNode, n.id, "node declared more than once");
  }
  for (const auto& [id, layer] : topo.layers_) {
    topo.order_.push_back(id);
    topo.children_[id];
    if (layer == LayerKind::TSD) topo.tsds_.push_back(id);
  }
  if (topo.tsds_.empty()) report(ViolationKind::NoTsd, "", "topology has no TSD");

  std::map<NodeId, std::vector<NodeId>> parents;
  for (const auto& e : spec.edges) {
    bool known = true;
    for (const auto* id : {&e.parent, &e.child}) {
      if (!topo.layers_.contains(*id)) {
        report(ViolationKind::UnknownNode, edge_name(e), "edge references undeclared node '" + *id + "'");
        known = false;
      }
    }
    if (!known) continue;
    parents[e.child].push_back(e.parent);
    const LayerKind pl = topo.layers_.at(e.parent);
    const LayerKind cl = topo.layers_.at(e.child);
    if (pl == LayerKind::LSD)
      report(ViolationKind::LsdHasChildren, edge_name(e), "LSD cannot have children");
    if (cl == LayerKind::TSD)
      report(ViolationKind::TsdHasParent, edge_name(e), "TSD cannot have a parent");
    if (cl == LayerKind::LSD && pl != LayerKind::NSD)
      report(ViolationKind::LsdParentNotNsd, edge_name(e), "LSD parent must be an NSD");
    if (cl == LayerKind::NSD && pl == LayerKind::LSD)
      report(ViolationKind::NsdParentIsLsd, edge_name(e), "NSD cannot be parented to an LSD");
  }

  for (const auto& [id, layer] : topo.layers_) {
    auto it = parents.find(id);
    const std::size_t count = it == parents.end() ? 0 : it->second.size();
    if (count > 1) report(ViolationKind::MultipleParents, id, "node has more than one parent");
    if (count == 0 && layer != LayerKind::TSD)
      report(ViolationKind::MissingParent, id, std::string(to_string(layer)) + " has no parent");
    if (count >= 1) topo.parent_[id] = it->second.front();
  }

  // Children lists mirror parent_ so a node with two parents is attached once.
  for (const auto& [child, parent] : topo.parent_) topo.children_[parent].push_back(child);

  // Cycle detection and root/depth resolution by walking parent links.
  for (const auto& id : topo.order_) {
    std::set<NodeId> seen{id};
    NodeId cur = id;
    int depth = 0;
    bool cyclic = false;
    while (auto p = topo.parent(cur)) {
      if (!seen.insert(*p).second) {
        cyclic = true;
        break;
      }
      cur = *p;
      ++depth;
    }
    if (cyclic) {
      report(ViolationKind::Cycle, id, "parent chain contains a cycle");
      continue;
    }
    topo.depth_[id] = depth;
    topo.root_[id] = cur;
  }

  for (const auto& [id, area] : spec.lsd_coverage) {
    auto it = topo.layers_.find(id);
    if (it == topo.layers_.end())
      report(ViolationKind::UnknownNode, id, "coverage declared for undeclared node");
    else if (it->second != LayerKind::LSD)
      report(ViolationKind::CoverageOnNonLsd, id, "coverage areas apply to LSDs only");
    if (!area.valid()) report(ViolationKind::InvalidCoverage, id, "coverage rectangle has min > max");
  }
  for (const auto& id : topo.order_) {
    if (topo.layers_.at(id) == LayerKind::LSD && !spec.lsd_coverage.contains(id))
      report(ViolationKind::MissingCoverage, id, "LSD missing coverage area");
  }

  if (!spec.tsd_peers.empty()) {
    std::set<NodeId> tsds(topo.tsds_.begin(), topo.tsds_.end());
    if (spec.tsd_peers != tsds)
      report(ViolationKind::PeerSetMismatch, "", "tsd_peers must list exactly the TSD nodes");
  }

  if (spec.default_latency < 1)
    report(ViolationKind::InvalidLatency, "", "default latency must be >= 1");
  for (const auto& [edge, ticks] : spec.latency) {
    const std::string name = edge.first + "->" + edge.second;
    if (ticks < 1) report(ViolationKind::InvalidLatency, name, "latency must be >= 1 tick");
    const bool tree_edge = topo.parent(edge.second) == edge.first || topo.parent(edge.first) == edge.second;
    const bool peer_edge = topo.layers_.contains(edge.first) && topo.layers_.contains(edge.second) &&
                           topo.layers_.at(edge.first) == LayerKind::TSD &&
                           topo.layers_.at(edge.second) == LayerKind::TSD && edge.first != edge.second;
    if (!tree_edge && !peer_edge)
      report(ViolationKind::UnknownNode, name, "latency declared for a link that does not exist");
  }

  if (!errs.empty()) return errs;
  for (auto& [id, kids] : topo.children_) std::sort(kids.begin(), kids.end());
  return topo;
}

/// Convenience for callers that treat an invalid topology as a programming
/// error (tests, generated scenarios).
inline Topology require_valid(const TopologySpec& spec) {
  auto result = validate_topology(spec);
  if (auto* errs = std::get_if<std::vector<TopologyViolation>>(&result)) {
    std::string msg = "invalid topology:";
    for (const auto& e : *errs) msg += " [" + e.subject + "] " + e.message + ";";
    throw std::invalid_argument(msg);
  }
  return std::get<Topology>(std::move(result));
}

}  // namespace sdnet
