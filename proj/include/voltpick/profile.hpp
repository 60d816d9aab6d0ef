// Copyright 2026 The voltpick Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Energy profiles: per (implementation, operation) mean energy and time
// scores for one scenario, plus the dominance relation over them.
//
// Implementation A dominates B when, for every operation of their API kind,
// both entries are measured and A's mean energy is strictly lower. An
// implementation with any unsupported or discarded entry never dominates and
// is never dominated.

#ifndef VOLTPICK_PROFILE_HPP_
#define VOLTPICK_PROFILE_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "voltpick/event_log.hpp"
#include "voltpick/groups.hpp"
#include "voltpick/harness.hpp"
#include "voltpick/meter.hpp"

namespace voltpick {

inline constexpr int kProfileSchemaVersion = 1;

struct ProfileEntry {
  std::string api_kind;
  SeriesStatus status = SeriesStatus::kUnsupported;
  // Present iff status == kMeasured.
  std::optional<double> mean_joules;
  std::optional<double> mean_seconds;

  bool measured() const { return status == SeriesStatus::kMeasured; }
  bool operator==(const ProfileEntry&) const = default;
};

struct MeterInfo {
  std::string backend_id;
  std::string domain;
  bool estimator = false;
  bool operator==(const MeterInfo&) const = default;
};

using EntryKey = std::pair<std::string, std::string>;  // (impl_id, op_id)

struct EnergyProfile {
  int schema_version = kProfileSchemaVersion;
  std::string device_fingerprint;
  Scenario scenario;
  std::string created_at;
  std::map<EntryKey, ProfileEntry> entries;
  std::optional<MeterInfo> meter;
  std::optional<RunPlan> plan;
  std::string environment_note;

  const ProfileEntry* find(std::string_view impl_id,
                           std::string_view op_id) const;
  bool has_implementation(std::string_view impl_id) const;
  // Throws Error(kUnknownImplementation).
  const std::string& api_kind_of(std::string_view impl_id) const;
  bool covers(std::string_view api_kind) const;
  std::vector<std::string> api_kinds() const;
  std::vector<std::string> implementations(std::string_view api_kind) const;
  std::vector<std::string> operations(std::string_view api_kind) const;
  // True when every entry of impl_id is measured.
  bool fully_measured(std::string_view impl_id) const;

  bool operator==(const EnergyProfile&) const = default;
};

struct BuildOptions {
  std::string device_fingerprint;
  std::string created_at;
  std::string environment_note;
  EventLog log;
};

// Runs the harness over the full implementation x operation grid of every
// group, summarizes, applies the time threshold per operation and
// assembles the profile. Throws Error(kEmptyGroup) for an empty group list
// or a group without implementations.
EnergyProfile build_profile(const std::vector<ConstructGroup>& groups,
                            const Scenario& scenario, Meter& meter,
                            const RunPlan& plan,
                            const BuildOptions& options = {});

// Throws Error(kUnknownImplementation) or Error(kApiKindMismatch).
bool dominates(const EnergyProfile& profile, std::string_view a,
               std::string_view b);

// Every implementation of api_kind not dominated by another, sorted by id.
// Throws Error(kUnknownApiKind).
std::vector<std::string> prune_dominated(const EnergyProfile& profile,
                                         std::string_view api_kind);

// All (dominator, dominated) pairs for api_kind, sorted.
std::vector<std::pair<std::string, std::string>> dominance_pairs(
    const EnergyProfile& profile, std::string_view api_kind);

nlohmann::json profile_to_json(const EnergyProfile& profile);
// Throws Error(kSchemaVersionMismatch) or Error(kMalformedProfile).
EnergyProfile profile_from_json(const nlohmann::json& doc);

std::string serialize_profile(const EnergyProfile& profile);
EnergyProfile parse_profile(std::string_view text);

void save_profile(const EnergyProfile& profile,
                  const std::filesystem::path& path);
EnergyProfile load_profile(const std::filesystem::path& path);

// Host descriptor: OS, kernel, machine, CPU model, logical CPU count.
std::string host_fingerprint();

// RFC 3339 UTC ("2026-01-02T03:04:05Z").
std::string format_rfc3339(std::int64_t unix_seconds);
// $SOURCE_DATE_EPOCH when set, else the current time.
std::string creation_timestamp();

}  // namespace voltpick

#endif  // VOLTPICK_PROFILE_HPP_
