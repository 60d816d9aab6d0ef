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

#ifndef VOLTPICK_RECOMMENDER_HPP_
#define VOLTPICK_RECOMMENDER_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "voltpick/groups.hpp"
#include "voltpick/profile.hpp"
#include "voltpick/usage.hpp"

namespace voltpick {

// Linear estimate of a site's energy under one implementation. Estimates
// are profile-relative scores, not predictions of real consumption.
struct Estimate {
  double joules = 0.0;
  // False when some used operation has no measured entry. joules then sums
  // the measured operations only.
  bool comparable = true;
  std::vector<std::string> missing_ops;
};

// Sum over used ops of count * mean_joules, in op_id order. Throws
// Error(kApiKindMismatch) when impl_id belongs to another api_kind.
Estimate estimate_site(const UsageSite& site, std::string_view impl_id,
                       const EnergyProfile& profile);

struct Constraints {
  // A thread-safe site only receives thread-safe implementations.
  bool respect_thread_safety = true;
};

struct Recommendation {
  std::string site_id;
  std::string file;
  std::size_t line = 0;
  std::string api_kind;
  std::string current_impl;
  std::string recommended_impl;
  double estimated_current_joules = 0.0;
  double estimated_recommended_joules = 0.0;
  double savings_fraction = 0.0;
  // The current estimate covers measured operations only.
  bool current_estimate_partial = false;
  std::vector<std::string> rationale;

  bool changed() const { return recommended_impl != current_impl; }
  bool operator==(const Recommendation&) const = default;
};

inline constexpr int kRecommendationSchemaVersion = 1;

struct RecommendationSet {
  int schema_version = kRecommendationSchemaVersion;
  std::string profile_fingerprint;
  std::string scenario_id;
  bool respect_thread_safety = true;
  std::vector<Recommendation> recommendations;
  double aggregate_current_joules = 0.0;
  double aggregate_recommended_joules = 0.0;
  std::vector<std::string> diagnostics;

  double aggregate_savings_fraction() const;
  bool operator==(const RecommendationSet&) const = default;
};

// Throws Error(kNoCandidates) when no implementation can be estimated and
// Error(kApiCoverageError) when the profile lacks the site's api_kind.
Recommendation recommend_site(const UsageSite& site,
                              const EnergyProfile& profile,
                              const Constraints& constraints = {},
                              const Registry& registry = builtin_registry());

// Sites without candidates are reported in diagnostics and left out of the
// aggregates.
RecommendationSet recommend_program(
    const UsageReport& report, const EnergyProfile& profile,
    const Constraints& constraints = {},
    const Registry& registry = builtin_registry());

struct ChoiceDiff {
  std::string site_id;
  // Recommended impl per profile, "" where the site had no candidates.
  std::vector<std::string> choices;
  bool operator==(const ChoiceDiff&) const = default;
};

struct ProfileComparison {
  std::vector<RecommendationSet> sets;
  std::vector<ChoiceDiff> diff;
};

// Throws Error(kInvalidConfig) for fewer than two profiles.
ProfileComparison compare_profiles(
    const UsageReport& report, const std::vector<EnergyProfile>& profiles,
    const Constraints& constraints = {},
    const Registry& registry = builtin_registry());

nlohmann::json recommendations_to_json(const RecommendationSet& set);
// Throws Error(kMalformedReport).
RecommendationSet recommendations_from_json(const nlohmann::json& doc);
RecommendationSet load_recommendations(const std::filesystem::path& path);

}  // namespace voltpick

#endif  // VOLTPICK_RECOMMENDER_HPP_
