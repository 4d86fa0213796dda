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

// Utilization-driven switching between persistent push (PPP) and reactive
// caching (VRP). Everything here is a pure function; Simulator schedules the
// evaluations and applies the decisions.

#pragma once

#include <sdnet/core_model.hpp>
#include <sdnet/directory.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>

namespace sdnet {

/// Hysteresis band: promote at or above `promote_threshold` requests per
/// window, demote at or below `demote_threshold`.
struct SwitchPolicy {
  std::uint64_t promote_threshold = 10;
  std::uint64_t demote_threshold = 2;
  Tick cooldown = 100;

  bool valid() const { return promote_threshold > demote_threshold && cooldown >= 0; }

  friend bool operator==(const SwitchPolicy&, const SwitchPolicy&) = default;
};

enum class SwitchDecision { NoChange, PromoteToPPP, DemoteToVRP };

inline constexpr std::string_view to_string(SwitchDecision d) {
  switch (d) {
    case SwitchDecision::NoChange: return "NoChange";
    case SwitchDecision::PromoteToPPP: return "PromoteToPPP";
    case SwitchDecision::DemoteToVRP: return "DemoteToVRP";
  }
  return "?";
}

struct Hotness {
  std::uint64_t total = 0;
  std::map<NodeId, std::uint64_t> per_lsd;

  friend bool operator==(const Hotness&, const Hotness&) = default;
};

/// Requests for `service` with tick in (now - window_length, now].
inline Hotness hotness(std::span<const UtilizationRecord> log, const ServiceId& service, Tick now,
                       Tick window_length) {
  Hotness h;
  const Tick lower = now - window_length;
  for (const auto& r : log) {
    if (r.service_id != service || r.tick <= lower || r.tick > now) continue;
    ++h.total;
    ++h.per_lsd[r.node];
  }
  return h;
}

/// `last_switch` is empty when the service has never switched, which always
/// satisfies the cooldown.
inline SwitchDecision recommend(const ServiceDescriptor& service, LayerKind origin_layer, const Hotness& hot,
                                const SwitchPolicy& policy, std::optional<Tick> last_switch, Tick now) {
  if (origin_layer == LayerKind::LSD) return SwitchDecision::NoChange;
  const bool cooled = !last_switch || now - *last_switch >= policy.cooldown;
  if (!cooled) return SwitchDecision::NoChange;
  if (service.strategy == PropagationStrategy::VRP && hot.total >= policy.promote_threshold)
    return SwitchDecision::PromoteToPPP;
  if (service.strategy == PropagationStrategy::PPP && hot.total <= policy.demote_threshold)
    return SwitchDecision::DemoteToVRP;
  return SwitchDecision::NoChange;
}

}  // namespace sdnet
