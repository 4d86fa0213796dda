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

// sdnet: validate and run service-directory scenarios, compare reports.
//
//   sdnet validate <scenario.json>
//   sdnet run <scenario.json> --out <dir> [--sweep N] [--until T] [--adaptive on|off]
//   sdnet compare <metrics_a.json> <metrics_b.json>
//
// Exit codes: 0 success, 1 validation failure, 2 internal invariant violation.

#include <sdnet/scenario.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::optional<sdnet::ScenarioFile> load(const std::string& path) {
  auto result = sdnet::parse_scenario(path);
  if (auto* errs = std::get_if<std::vector<sdnet::ScenarioError>>(&result)) {
    for (const auto& e : *errs)
      std::cerr << path << ":" << (e.location.empty() ? "" : " " + e.location + ":") << " " << e.message << '\n';
    return std::nullopt;
  }
  return std::get<sdnet::ScenarioFile>(std::move(result));
}

int cmd_validate(const std::string& path) {
  auto s = load(path);
  if (!s) return sdnet::kExitValidation;
  auto topo = sdnet::require_valid(s->topology);
  std::cout << path << ": ok (" << topo.nodes_of(sdnet::LayerKind::TSD).size() << " TSD, "
            << topo.nodes_of(sdnet::LayerKind::NSD).size() << " NSD, "
            << topo.nodes_of(sdnet::LayerKind::LSD).size() << " LSD)\n";
  return sdnet::kExitOk;
}

int cmd_run(const std::string& path, const std::filesystem::path& out, unsigned sweep, std::optional<sdnet::Tick> until,
            const std::string& adaptive) {
  auto s = load(path);
  if (!s) return sdnet::kExitValidation;
  if (until) s->run.until = *until;
  if (adaptive == "on") s->run.adaptive = true;
  if (adaptive == "off") s->run.adaptive = false;

  if (sweep <= 1) {
    const int rc = sdnet::run_scenario(*s, out, std::cerr);
    if (rc == sdnet::kExitOk) std::cout << "wrote " << (out / sdnet::kMetricsFile).string() << '\n';
    return rc;
  }

  // Independent seeds, one directory each; runs share nothing.
  std::vector<std::future<std::pair<int, std::string>>> runs;
  for (unsigned i = 0; i < sweep; ++i) {
    const std::uint64_t seed = s->params.seed + i;
    runs.push_back(std::async(std::launch::async, [scenario = *s, dir = out / ("seed-" + std::to_string(seed)), seed] {
      std::ostringstream diag;
      const int rc = sdnet::run_scenario(scenario, dir, diag, seed);
      return std::make_pair(rc, diag.str());
    }));
  }
  int worst = sdnet::kExitOk;
  for (auto& f : runs) {
    auto [rc, diag] = f.get();
    std::cerr << diag;
    worst = std::max(worst, rc);
  }
  if (worst == sdnet::kExitOk) std::cout << "wrote " << sweep << " runs under " << out.string() << '\n';
  return worst;
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::map<std::string, double>& out) {
  if (j.is_number()) {
    out[prefix] = j.get<double>();
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    out[prefix + ".count"] = static_cast<double>(j.size());
  }
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
  nlohmann::json a, b;
  try {
    std::ifstream fa(a_path), fb(b_path);
    if (!fa || !fb) {
      std::cerr << "cannot read reports\n";
      return sdnet::kExitValidation;
    }
    a = nlohmann::json::parse(fa);
    b = nlohmann::json::parse(fb);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed report: " << e.what() << '\n';
    return sdnet::kExitValidation;
  }
  std::map<std::string, double> fa, fb;
  flatten(a, "", fa);
  flatten(b, "", fb);
  std::set<std::string> keys;
  for (const auto& [k, v] : fa) keys.insert(k);
  for (const auto& [k, v] : fb) keys.insert(k);
  std::cout << "metric\ta\tb\tdelta\n";
  std::size_t differing = 0;
  for (const auto& k : keys) {
    const double va = fa.contains(k) ? fa[k] : 0.0;
    const double vb = fb.contains(k) ? fb[k] : 0.0;
    if (va == vb) continue;
    ++differing;
    std::cout << k << '\t' << va << '\t' << vb << '\t' << (vb - va) << '\n';
  }
  std::cout << differing << " metric(s) differ\n";
  return sdnet::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical service directory simulator"};
  app.require_subcommand(1);

  std::string scenario;
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate->add_option("scenario", scenario, "Scenario JSON")->required();

  std::string run_scenario;
  std::string out_dir;
  unsigned sweep = 1;
  std::optional<sdnet::Tick> until;
  std::string adaptive;
  auto* run = app.add_subcommand("run", "Run a scenario and write trace, metrics and summary");
  run->add_option("scenario", run_scenario, "Scenario JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--sweep", sweep, "Run N consecutive seeds in parallel")->check(CLI::PositiveNumber);
  run->add_option("--until", until, "Override run.until");
  run->add_option("--adaptive", adaptive, "Override run.adaptive")->check(CLI::IsMember({"on", "off"}));

  std::string report_a, report_b;
  auto* compare = app.add_subcommand("compare", "Diff two metrics reports");
  compare->add_option("report_a", report_a, "First metrics.json")->required();
  compare->add_option("report_b", report_b, "Second metrics.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sdnet::kExitValidation;
  }

  try {
    if (*validate) return cmd_validate(scenario);
    if (*run) return cmd_run(run_scenario, out_dir, sweep, until, adaptive);
    if (*compare) return cmd_compare(report_a, report_b);
  } catch (const sdnet::InvariantViolation& e) {
    std::cerr << "internal invariant violated: " << e.what() << '\n';
    return sdnet::kExitInvariant;
  }
  return sdnet::kExitValidation;
}
