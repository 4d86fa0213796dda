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

// Scenario files (JSON): reading with located diagnostics, writing, and
// executing a scenario into trace / metrics / summary outputs. The schema is
// documented in README.md.

#pragma once

#include <sdnet/core_model.hpp>
#include <sdnet/metrics.hpp>
#include <sdnet/simulation.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace sdnet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInvariant = 2;

struct ScenarioParams {
  Tick base_ttl = DirectoryState::kDefaultBaseTtl;
  Tick peer_sync_period = 50;
  Tick window_length = 50;
  SwitchPolicy policy;
  std::uint64_t seed = 0;

  friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

struct RunSpec {
  Tick until = 0;
  bool adaptive = false;

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct ScenarioFile {
  TopologySpec topology;
  ScenarioParams params;
  WorkloadSpec workload;
  RunSpec run;

  SimParams sim_params() const {
    return SimParams{params.base_ttl, params.peer_sync_period, params.window_length, params.policy, run.adaptive};
  }

  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

struct ScenarioError {
  // JSON pointer into the document ("" for the whole file).
  std::string location;
  std::string message;
};

using ScenarioResult = std::variant<ScenarioFile, std::vector<ScenarioError>>;

namespace detail {

using nlohmann::json;

class ScenarioReader {
 public:
  std::vector<ScenarioError> errors;

  void error(const std::string& at, std::string msg) { errors.push_back({at, std::move(msg)}); }

  bool object(const json& j, const std::string& at, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
      error(at, "expected an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) error(at + "/" + key, "unknown field");
    }
    return true;
  }

  const json* field(const json& j, std::string_view key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  }

  template <class T>
  std::optional<T> number(const json& j, std::string_view key, const std::string& at, bool required,
                          std::optional<T> fallback = std::nullopt) {
    const json* v = field(j, key);
    const std::string here = at + "/" + std::string(key);
    if (!v) {
      if (required) error(here, "missing required field");
      return fallback;
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!v->is_number()) {
        error(here, "expected a number");
        return fallback;
      }
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v->is_number_unsigned()) {
        error(here, "expected a non-negative integer");
        return fallback;
      }
    } else {
      if (!v->is_number_integer()) {
        error(here, "expected an integer");
        return fallback;
      }
    }
    return v->get<T>();
  }

  std::optional<std::string> string(const json& j, std::string_view key, const std::string& at, bool required) {
    const json* v = field(j, key);
    const std::string here = at + "/" + std::string(key);
    if (!v) {
      if (required) error(here, "missing required field");
      return std::nullopt;
    }
    if (!v->is_string()) {
      error(here, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<bool> boolean(const json& j, std::string_view key, const std::string& at) {
    const json* v = field(j, key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      error(at + "/" + std::string(key), "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::set<std::string> string_set(const json& j, std::string_view key, const std::string& at) {
    std::set<std::string> out;
    const json* v = field(j, key);
    if (!v) return out;
    const std::string here = at + "/" + std::string(key);
    if (!v->is_array()) {
      error(here, "expected an array of strings");
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_string())
        error(here + "/" + std::to_string(i), "expected a string");
      else
        out.insert((*v)[i].get<std::string>());
    }
    return out;
  }

  std::optional<std::vector<double>> numbers(const json& j, std::string_view key, const std::string& at,
                                             std::size_t count) {
    const json* v = field(j, key);
    if (!v) return std::nullopt;
    const std::string here = at + "/" + std::string(key);
    if (!v->is_array() || v->size() != count) {
      error(here, "expected an array of " + std::to_string(count) + " numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& x : *v) {
      if (!x.is_number()) {
        error(here, "expected numbers");
        return std::nullopt;
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::optional<GeoArea> area(const json& j, std::string_view key, const std::string& at) {
    auto v = numbers(j, key, at, 4);
    if (!v) return std::nullopt;
    GeoArea a{(*v)[0], (*v)[1], (*v)[2], (*v)[3]};
    if (!a.valid()) {
      error(at + "/" + std::string(key), "rectangle must satisfy x_min <= x_max and y_min <= y_max");
      return std::nullopt;
    }
    return a;
  }

  const json* array(const json& j, std::string_view key, const std::string& at) {
    const json* v = field(j, key);
    if (!v) return nullptr;
    if (!v->is_array()) {
      error(at + "/" + std::string(key), "expected an array");
      return nullptr;
    }
    return v;
  }

  void read_topology(const json& j, const std::string& at, TopologySpec& topo) {
    if (!object(j, at, {"nodes", "edges", "tsd_peers", "peer_links"})) return;
    if (const json* nodes = array(j, "nodes", at)) {
      for (std::size_t i = 0; i < nodes->size(); ++i) {
        const json& n = (*nodes)[i];
        const std::string here = at + "/nodes/" + std::to_string(i);
        if (!object(n, here, {"id", "layer", "coverage"})) continue;
        auto id = string(n, "id", here, true);
        auto layer_name = string(n, "layer", here, true);
        std::optional<LayerKind> layer;
        if (layer_name) {
          layer = parse_layer(*layer_name);
          if (!layer) error(here + "/layer", "expected one of TSD, NSD, LSD");
        }
        if (!id || !layer) continue;
        topo.nodes.push_back({*id, *layer});
        if (auto cov = area(n, "coverage", here)) topo.lsd_coverage[*id] = *cov;
      }
    } else {
      error(at + "/nodes", "missing required field");
    }
    if (const json* edges = array(j, "edges", at)) {
      for (std::size_t i = 0; i < edges->size(); ++i) {
        const json& e = (*edges)[i];
        const std::string here = at + "/edges/" + std::to_string(i);
        if (!object(e, here, {"parent", "child", "latency"})) continue;
        auto parent = string(e, "parent", here, true);
        auto child = string(e, "child", here, true);
        auto latency = number<Tick>(e, "latency", here, false);
        if (!parent || !child) continue;
        topo.edges.push_back({*parent, *child});
        if (latency) topo.latency[{*parent, *child}] = *latency;
      }
    }
    topo.tsd_peers = string_set(j, "tsd_peers", at);
    if (const json* links = array(j, "peer_links", at)) {
      for (std::size_t i = 0; i < links->size(); ++i) {
        const json& l = (*links)[i];
        const std::string here = at + "/peer_links/" + std::to_string(i);
        if (!object(l, here, {"a", "b", "latency"})) continue;
        auto a = string(l, "a", here, true);
        auto b = string(l, "b", here, true);
        auto latency = number<Tick>(l, "latency", here, true);
        if (a && b && latency) topo.latency[std::minmax(*a, *b)] = *latency;
      }
    }
  }

  void read_params(const json& j, const std::string& at, ScenarioFile& s) {
    if (!object(j, at, {"base_ttl", "peer_sync_period", "window_length", "default_latency", "seed", "switch_policy"}))
      return;
    ScenarioParams& p = s.params;
    p.base_ttl = *number<Tick>(j, "base_ttl", at, false, p.base_ttl);
    p.peer_sync_period = *number<Tick>(j, "peer_sync_period", at, false, p.peer_sync_period);
    p.window_length = *number<Tick>(j, "window_length", at, false, p.window_length);
    p.seed = *number<std::uint64_t>(j, "seed", at, false, p.seed);
    s.topology.default_latency = *number<Tick>(j, "default_latency", at, false, s.topology.default_latency);
    if (p.base_ttl < 1) error(at + "/base_ttl", "must be >= 1");
    if (p.peer_sync_period < 1) error(at + "/peer_sync_period", "must be >= 1");
    if (p.window_length < 1) error(at + "/window_length", "must be >= 1");
    if (const json* sp = field(j, "switch_policy")) {
      const std::string here = at + "/switch_policy";
      if (object(*sp, here, {"promote_threshold", "demote_threshold", "cooldown"})) {
        p.policy.promote_threshold =
            *number<std::uint64_t>(*sp, "promote_threshold", here, false, p.policy.promote_threshold);
        p.policy.demote_threshold =
            *number<std::uint64_t>(*sp, "demote_threshold", here, false, p.policy.demote_threshold);
        p.policy.cooldown = *number<Tick>(*sp, "cooldown", here, false, p.policy.cooldown);
        if (!p.policy.valid()) error(here, "promote_threshold must exceed demote_threshold and cooldown be >= 0");
      }
    }
  }

  std::optional<LookupQuery> read_query(const json& j, const std::string& at) {
    if (!object(j, at, {"tags", "name_prefix", "position"})) return std::nullopt;
    LookupQuery q;
    q.tags = string_set(j, "tags", at);
    q.name_prefix = string(j, "name_prefix", at, false);
    if (auto pos = numbers(j, "position", at, 2)) q.position = Point{(*pos)[0], (*pos)[1]};
    return q;
  }

  std::optional<ServiceDescriptor> read_service(const json& j, const std::string& at) {
    if (!object(j, at, {"id", "provider", "name", "tags", "scope", "area", "access_description", "strategy",
                        "version", "origin"}))
      return std::nullopt;
    ServiceDescriptor d;
    const std::size_t before = errors.size();
    auto id = string(j, "id", at, true);
    auto name = string(j, "name", at, true);
    auto scope = string(j, "scope", at, true);
    auto strategy = string(j, "strategy", at, true);
    d.provider_id = string(j, "provider", at, false).value_or("");
    d.access_description = string(j, "access_description", at, false).value_or("");
    d.origin_node = string(j, "origin", at, false).value_or("");
    d.tags = string_set(j, "tags", at);
    if (id) d.service_id = *id;
    if (name) d.name = *name;
    if (scope) {
      if (auto s = parse_scope(*scope))
        d.scope = *s;
      else
        error(at + "/scope", "expected Global or Local");
    }
    if (strategy) {
      if (auto s = parse_strategy(*strategy))
        d.strategy = *s;
      else
        error(at + "/strategy", "expected PPP or VRP");
    }
    auto a = area(j, "area", at);
    if (d.scope == ServiceScope::Local) {
      if (a)
        d.relevance_area = *a;
      else if (!field(j, "area"))
        error(at + "/area", "Local services require a relevance area");
    } else if (field(j, "area")) {
      error(at + "/area", "Global services are relevant everywhere and take no area");
    }
    if (const json* v = field(j, "version")) {
      const std::string here = at + "/version";
      if (object(*v, here, {"timestamp", "node"})) {
        auto ts = number<Tick>(*v, "timestamp", here, true);
        auto node = string(*v, "node", here, true);
        if (ts && node) d.version = Version{*ts, *node};
      }
    }
    if (errors.size() != before) return std::nullopt;
    return d;
  }

  void read_workload(const json& j, const std::string& at, WorkloadSpec& w) {
    if (!object(j, at, {"registrations", "deregistrations", "lookups", "generator"})) return;
    if (const json* regs = array(j, "registrations", at)) {
      for (std::size_t i = 0; i < regs->size(); ++i) {
        const json& r = (*regs)[i];
        const std::string here = at + "/registrations/" + std::to_string(i);
        if (!object(r, here, {"tick", "node", "service"})) continue;
        auto tick = number<Tick>(r, "tick", here, true);
        auto node = string(r, "node", here, true);
        const json* svc = field(r, "service");
        if (!svc) error(here + "/service", "missing required field");
        std::optional<ServiceDescriptor> d;
        if (svc) d = read_service(*svc, here + "/service");
        if (tick && node && d) {
          if (!d->origin_node.empty() && d->origin_node != *node)
            error(here + "/service/origin", "origin must equal the registering node");
          w.registrations.push_back({*tick, *node, *d});
        }
      }
    }
    if (const json* deregs = array(j, "deregistrations", at)) {
      for (std::size_t i = 0; i < deregs->size(); ++i) {
        const json& r = (*deregs)[i];
        const std::string here = at + "/deregistrations/" + std::to_string(i);
        if (!object(r, here, {"tick", "node", "service_id"})) continue;
        auto tick = number<Tick>(r, "tick", here, true);
        auto node = string(r, "node", here, true);
        auto id = string(r, "service_id", here, true);
        if (tick && node && id) w.deregistrations.push_back({*tick, *node, *id});
      }
    }
    if (const json* lookups = array(j, "lookups", at)) {
      for (std::size_t i = 0; i < lookups->size(); ++i) {
        const json& r = (*lookups)[i];
        const std::string here = at + "/lookups/" + std::to_string(i);
        if (!object(r, here, {"tick", "node", "query"})) continue;
        auto tick = number<Tick>(r, "tick", here, true);
        auto node = string(r, "node", here, true);
        std::optional<LookupQuery> q = LookupQuery{};
        if (const json* qj = field(r, "query")) q = read_query(*qj, here + "/query");
        if (tick && node && q) w.lookups.push_back({*tick, *node, *q});
      }
    }
    if (const json* g = field(j, "generator")) {
      const std::string here = at + "/generator";
      if (object(*g, here, {"rate", "skew", "seed", "start", "end"})) {
        GeneratorSpec gen;
        gen.rate = *number<double>(*g, "rate", here, true, 0.0);
        gen.skew = *number<double>(*g, "skew", here, false, gen.skew);
        gen.seed = number<std::uint64_t>(*g, "seed", here, false);
        gen.start = *number<Tick>(*g, "start", here, true, 0);
        gen.end = *number<Tick>(*g, "end", here, true, 0);
        if (gen.rate < 0.0) error(here + "/rate", "must be >= 0");
        if (gen.skew < 0.0) error(here + "/skew", "must be >= 0");
        if (gen.end < gen.start) error(here, "end must not precede start");
        w.generator = gen;
      }
    }
  }

  void check_references(const ScenarioFile& s) {
    std::map<NodeId, LayerKind> layers;
    for (const auto& n : s.topology.nodes) layers.emplace(n.id, n.layer);
    auto check = [&](const NodeId& id, const std::string& at) {
      if (!layers.contains(id)) {
        error(at, "dangling node reference '" + id + "'");
        return false;
      }
      return true;
    };
    for (std::size_t i = 0; i < s.workload.registrations.size(); ++i)
      check(s.workload.registrations[i].node, "/workload/registrations/" + std::to_string(i) + "/node");
    for (std::size_t i = 0; i < s.workload.deregistrations.size(); ++i)
      check(s.workload.deregistrations[i].node, "/workload/deregistrations/" + std::to_string(i) + "/node");
    for (std::size_t i = 0; i < s.workload.lookups.size(); ++i) {
      const auto& l = s.workload.lookups[i];
      const std::string at = "/workload/lookups/" + std::to_string(i) + "/node";
      if (check(l.node, at) && layers.at(l.node) != LayerKind::LSD)
        error(at, "customer lookups must target an LSD, got " + std::string(to_string(layers.at(l.node))));
    }
  }
};

}  // namespace detail

/// Parses and fully validates a scenario document.
inline ScenarioResult parse_scenario_text(const std::string& text) {
  using nlohmann::json;
  detail::ScenarioReader rd;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return std::vector<ScenarioError>{{"", std::string("syntax error: ") + e.what()}};
  }
  ScenarioFile s;
  if (!rd.object(doc, "", {"topology", "params", "workload", "run"})) return rd.errors;
  if (const json* p = rd.field(doc, "params")) rd.read_params(*p, "/params", s);
  if (const json* t = rd.field(doc, "topology"))
    rd.read_topology(*t, "/topology", s.topology);
  else
    rd.error("/topology", "missing required field");
  if (const json* w = rd.field(doc, "workload")) rd.read_workload(*w, "/workload", s.workload);
  if (const json* r = rd.field(doc, "run")) {
    if (rd.object(*r, "/run", {"until", "adaptive"})) {
      s.run.until = *rd.number<Tick>(*r, "until", "/run", true, 0);
      s.run.adaptive = rd.boolean(*r, "adaptive", "/run").value_or(false);
      if (s.run.until < 0) rd.error("/run/until", "must be >= 0");
    }
  } else {
    rd.error("/run", "missing required field");
  }

  if (rd.errors.empty()) {
    auto topo = validate_topology(s.topology);
    if (auto* errs = std::get_if<std::vector<TopologyViolation>>(&topo)) {
      for (const auto& v : *errs)
        rd.error("/topology", "topology violation" + (v.subject.empty() ? "" : " at '" + v.subject + "'") + ": " +
                                  v.message);
    }
    rd.check_references(s);
  }
  if (!rd.errors.empty()) return rd.errors;
  return s;
}

inline ScenarioResult parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::vector<ScenarioError>{{"", "cannot read '" + path.string() + "'"}};
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

/// Serializes a scenario in the same schema parse_scenario_text() reads.
inline nlohmann::json scenario_to_json(const ScenarioFile& s) {
  using nlohmann::json;
  auto rect = [](const GeoArea& a) { return json::array({a.x_min, a.y_min, a.x_max, a.y_max}); };
  json topo;
  json nodes = json::array();
  for (const auto& n : s.topology.nodes) {
    json jn = {{"id", n.id}, {"layer", std::string(to_string(n.layer))}};
    if (auto it = s.topology.lsd_coverage.find(n.id); it != s.topology.lsd_coverage.end())
      jn["coverage"] = rect(it->second);
    nodes.push_back(jn);
  }
  topo["nodes"] = nodes;
  json edges = json::array();
  std::set<std::pair<NodeId, NodeId>> tree_edges;
  for (const auto& e : s.topology.edges) {
    json je = {{"parent", e.parent}, {"child", e.child}};
    if (auto it = s.topology.latency.find({e.parent, e.child}); it != s.topology.latency.end())
      je["latency"] = it->second;
    tree_edges.insert({e.parent, e.child});
    edges.push_back(je);
  }
  topo["edges"] = edges;
  if (!s.topology.tsd_peers.empty()) topo["tsd_peers"] = s.topology.tsd_peers;
  json links = json::array();
  for (const auto& [edge, ticks] : s.topology.latency)
    if (!tree_edges.contains(edge)) links.push_back({{"a", edge.first}, {"b", edge.second}, {"latency", ticks}});
  if (!links.empty()) topo["peer_links"] = links;

  json params = {{"base_ttl", s.params.base_ttl},
                 {"peer_sync_period", s.params.peer_sync_period},
                 {"window_length", s.params.window_length},
                 {"default_latency", s.topology.default_latency},
                 {"seed", s.params.seed},
                 {"switch_policy",
                  {{"promote_threshold", s.params.policy.promote_threshold},
                   {"demote_threshold", s.params.policy.demote_threshold},
                   {"cooldown", s.params.policy.cooldown}}}};

  auto query = [](const LookupQuery& q) {
    json jq = json::object();
    if (!q.tags.empty()) jq["tags"] = q.tags;
    if (q.name_prefix) jq["name_prefix"] = *q.name_prefix;
    if (q.position) jq["position"] = json::array({q.position->x, q.position->y});
    return jq;
  };

  json regs = json::array();
  for (const auto& r : s.workload.registrations) {
    const ServiceDescriptor& d = r.descriptor;
    json svc = {{"id", d.service_id},
                {"name", d.name},
                {"scope", std::string(to_string(d.scope))},
                {"strategy", std::string(to_string(d.strategy))}};
    if (!d.provider_id.empty()) svc["provider"] = d.provider_id;
    if (!d.tags.empty()) svc["tags"] = d.tags;
    if (d.scope == ServiceScope::Local) svc["area"] = rect(d.relevance_area);
    if (!d.access_description.empty()) svc["access_description"] = d.access_description;
    if (!d.version.node.empty()) svc["version"] = {{"timestamp", d.version.timestamp}, {"node", d.version.node}};
    if (!d.origin_node.empty()) svc["origin"] = d.origin_node;
    regs.push_back({{"tick", r.tick}, {"node", r.node}, {"service", svc}});
  }
  json deregs = json::array();
  for (const auto& d : s.workload.deregistrations)
    deregs.push_back({{"tick", d.tick}, {"node", d.node}, {"service_id", d.service_id}});
  json lookups = json::array();
  for (const auto& l : s.workload.lookups) lookups.push_back({{"tick", l.tick}, {"node", l.node}, {"query", query(l.query)}});
  json workload = {{"registrations", regs}, {"deregistrations", deregs}, {"lookups", lookups}};
  if (const auto& g = s.workload.generator) {
    json jg = {{"rate", g->rate}, {"skew", g->skew}, {"start", g->start}, {"end", g->end}};
    if (g->seed) jg["seed"] = *g->seed;
    workload["generator"] = jg;
  }
  return json{{"topology", topo},
              {"params", params},
              {"workload", workload},
              {"run", {{"until", s.run.until}, {"adaptive", s.run.adaptive}}}};
}

inline std::string write_scenario(const ScenarioFile& s) { return scenario_to_json(s).dump(2) + "\n"; }

struct RunArtifacts {
  std::string trace;
  std::string metrics_json;
  std::string summary_csv;
  MetricsReport report;
};

/// Builds the network, expands the workload and runs to `run.until`.
/// Throws InvariantViolation on any internal invariant failure.
inline RunArtifacts execute_scenario(const ScenarioFile& s, std::optional<std::uint64_t> seed_override = std::nullopt) {
  Topology topo = require_valid(s.topology);
  const std::uint64_t seed = seed_override.value_or(s.params.seed);
  auto events = generate_workload(s.workload, topo, seed);
  if (auto* err = std::get_if<WorkloadError>(&events)) throw std::invalid_argument(err->message);
  Simulator sim(std::move(topo), s.sim_params());
  sim.schedule_all(std::get<std::vector<SimEvent>>(events));
  sim.run(s.run.until);
  RunArtifacts out;
  out.report = sim.report();
  if (auto bad = out.report.check_identities(); !bad.empty()) throw InvariantViolation("metrics identity: " + bad.front());
  out.trace = trace_text(sim.trace());
  out.metrics_json = out.report.to_json_text();
  out.summary_csv = out.report.summary_csv();
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

inline constexpr const char* kTraceFile = "trace.txt";
inline constexpr const char* kMetricsFile = "metrics.json";
inline constexpr const char* kSummaryFile = "summary.csv";

/// Runs a validated scenario and writes trace.txt, metrics.json and
/// summary.csv into `output_dir`. Returns a process exit status.
inline int run_scenario(const ScenarioFile& s, const std::filesystem::path& output_dir, std::ostream& diag,
                        std::optional<std::uint64_t> seed_override = std::nullopt) {
  RunArtifacts out;
  try {
    out = execute_scenario(s, seed_override);
  } catch (const InvariantViolation& e) {
    diag << "internal invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    diag << "invalid scenario: " << e.what() << '\n';
    return kExitValidation;
  }
  std::filesystem::create_directories(output_dir);
  write_text_file(output_dir / kTraceFile, out.trace);
  write_text_file(output_dir / kMetricsFile, out.metrics_json);
  write_text_file(output_dir / kSummaryFile, out.summary_csv);
  return kExitOk;
}

}  // namespace sdnet
