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

#include "voltpick/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "voltpick/error.hpp"
#include "voltpick/io.hpp"

namespace voltpick {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

Estimate estimate_site(const UsageSite& site, std::string_view impl_id,
                       const EnergyProfile& profile) {
  if (profile.has_implementation(impl_id) &&
      profile.api_kind_of(impl_id) != site.api_kind) {
    throw Error(ErrorCode::kApiKindMismatch,
                std::string(impl_id) + " is not a " + site.api_kind);
  }
  Estimate est;
  for (const auto& [op, count] : site.op_counts) {
    if (!(count > 0.0)) continue;
    const ProfileEntry* entry = profile.find(impl_id, op);
    if (entry == nullptr || !entry->measured()) {
      est.comparable = false;
      est.missing_ops.push_back(op);
      continue;
    }
    est.joules += count * *entry->mean_joules;
  }
  return est;
}

double RecommendationSet::aggregate_savings_fraction() const {
  if (aggregate_current_joules == 0.0) return 0.0;
  return 1.0 - aggregate_recommended_joules / aggregate_current_joules;
}

Recommendation recommend_site(const UsageSite& site,
                              const EnergyProfile& profile,
                              const Constraints& constraints,
                              const Registry& registry) {
  if (!profile.covers(site.api_kind)) {
    throw Error(ErrorCode::kApiCoverageError,
                "profile has no entries for api_kind " + site.api_kind);
  }
  const auto* current_desc = registry.find_implementation(site.current_impl);
  const bool safe_only = constraints.respect_thread_safety &&
                         current_desc != nullptr && current_desc->thread_safe;

  const Estimate current = estimate_site(site, site.current_impl, profile);

  std::map<std::string, Estimate> choices;
  std::vector<std::string> excluded;
  for (const auto& impl : prune_dominated(profile, site.api_kind)) {
    if (impl == site.current_impl) continue;
    if (safe_only) {
      const auto* desc = registry.find_implementation(impl);
      if (desc == nullptr || !desc->thread_safe) {
        excluded.push_back(impl + " excluded: not thread-safe");
        continue;
      }
    }
    Estimate est = estimate_site(site, impl, profile);
    if (!est.comparable) {
      std::string line = impl + " excluded: no measured entry for";
      for (const auto& op : est.missing_ops) line += " " + op;
      excluded.push_back(std::move(line));
      continue;
    }
    choices.emplace(impl, std::move(est));
  }
  if (choices.empty() && !current.comparable) {
    throw Error(ErrorCode::kNoCandidates,
                site.site_id + ": no implementation of " + site.api_kind +
                    " has measured entries for every used operation");
  }

  // Current wins ties. If its estimate is partial, it is a lower bound on
  // its full cost, so a strictly cheaper candidate is still a saving.
  std::string best = site.current_impl;
  double best_joules = current.joules;
  bool have_best = current.comparable;
  for (const auto& [impl, est] : choices) {
    if (!have_best || est.joules < best_joules) {
      best = impl;
      best_joules = est.joules;
      have_best = true;
    }
  }
  if (!current.comparable && !(best_joules < current.joules)) {
    best = site.current_impl;
    best_joules = current.joules;
  }

  Recommendation rec;
  rec.site_id = site.site_id;
  rec.file = site.file;
  rec.line = site.line;
  rec.api_kind = site.api_kind;
  rec.current_impl = site.current_impl;
  rec.recommended_impl = best;
  rec.estimated_current_joules = current.joules;
  rec.estimated_recommended_joules = best_joules;
  rec.current_estimate_partial = !current.comparable;
  rec.savings_fraction = current.joules > 0.0 && best != site.current_impl
                             ? 1.0 - best_joules / current.joules
                             : 0.0;

  for (const auto& [op, count] : site.op_counts) {
    if (!(count > 0.0)) continue;
    std::string line = op + ": " + fmt(count) + " x ";
    const ProfileEntry* cur = profile.find(site.current_impl, op);
    line += cur != nullptr && cur->measured()
                ? fmt(*cur->mean_joules) + " = " + fmt(count * *cur->mean_joules)
                : std::string("unmeasured");
    if (best != site.current_impl) {
      const ProfileEntry* next = profile.find(best, op);
      line += " -> " + fmt(*next->mean_joules) + " = " +
              fmt(count * *next->mean_joules);
    }
    rec.rationale.push_back(std::move(line));
  }
  for (auto& line : excluded) rec.rationale.push_back(std::move(line));
  return rec;
}

RecommendationSet recommend_program(const UsageReport& report,
                                    const EnergyProfile& profile,
                                    const Constraints& constraints,
                                    const Registry& registry) {
  std::set<std::string> missing;
  for (const auto& site : report.sites) {
    if (!profile.covers(site.api_kind)) missing.insert(site.api_kind);
  }
  if (!missing.empty()) {
    std::string kinds;
    for (const auto& k : missing) kinds += (kinds.empty() ? "" : ", ") + k;
    throw Error(ErrorCode::kApiCoverageError,
                "profile has no entries for api_kind " + kinds);
  }
  RecommendationSet set;
  set.profile_fingerprint = profile.device_fingerprint;
  set.scenario_id = to_string(profile.scenario.scenario_id);
  set.respect_thread_safety = constraints.respect_thread_safety;
  for (const auto& site : report.sites) {
    try {
      auto rec = recommend_site(site, profile, constraints, registry);
      set.aggregate_current_joules += rec.estimated_current_joules;
      set.aggregate_recommended_joules += rec.estimated_recommended_joules;
      set.recommendations.push_back(std::move(rec));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoCandidates) throw;
      set.diagnostics.push_back(e.what());
    }
  }
  return set;
}

ProfileComparison compare_profiles(const UsageReport& report,
                                   const std::vector<EnergyProfile>& profiles,
                                   const Constraints& constraints,
                                   const Registry& registry) {
  if (profiles.size() < 2) {
    throw Error(ErrorCode::kInvalidConfig, "compare needs at least two profiles");
  }
  ProfileComparison out;
  for (const auto& p : profiles) {
    out.sets.push_back(recommend_program(report, p, constraints, registry));
  }
  for (const auto& site : report.sites) {
    ChoiceDiff row;
    row.site_id = site.site_id;
    for (const auto& set : out.sets) {
      auto it = std::find_if(
          set.recommendations.begin(), set.recommendations.end(),
          [&](const Recommendation& r) { return r.site_id == site.site_id; });
      row.choices.push_back(it == set.recommendations.end()
                                ? std::string()
                                : it->recommended_impl);
    }
    if (std::adjacent_find(row.choices.begin(), row.choices.end(),
                           std::not_equal_to<>()) != row.choices.end()) {
      out.diff.push_back(std::move(row));
    }
  }
  return out;
}

// ------------------------------------------------------------ JSON

json recommendations_to_json(const RecommendationSet& set) {
  json recs = json::array();
  for (const auto& r : set.recommendations) {
    recs.push_back({{"site_id", r.site_id},
                    {"file", r.file},
                    {"line", r.line},
                    {"api_kind", r.api_kind},
                    {"current_impl", r.current_impl},
                    {"recommended_impl", r.recommended_impl},
                    {"estimated_current_joules", r.estimated_current_joules},
                    {"estimated_recommended_joules", r.estimated_recommended_joules},
                    {"savings_fraction", r.savings_fraction},
                    {"current_estimate_partial", r.current_estimate_partial},
                    {"rationale", r.rationale}});
  }
  return {{"schema_version", set.schema_version},
          {"profile_fingerprint", set.profile_fingerprint},
          {"scenario_id", set.scenario_id},
          {"respect_thread_safety", set.respect_thread_safety},
          {"estimate_unit", "profile-relative score (J)"},
          {"recommendations", std::move(recs)},
          {"aggregate_current_joules", set.aggregate_current_joules},
          {"aggregate_recommended_joules", set.aggregate_recommended_joules},
          {"diagnostics", set.diagnostics}};
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedReport, "recommendations: " + what);
}

void expect_keys(const json& obj, const std::set<std::string>& keys,
                 const std::string& where) {
  if (!obj.is_object()) malformed(where + " is not an object");
  for (const auto& [key, value] : obj.items()) {
    if (keys.count(key) == 0) malformed("unknown field '" + key + "' in " + where);
  }
  for (const auto& key : keys) {
    if (!obj.contains(key)) malformed("missing field '" + key + "' in " + where);
  }
}

template <class T>
T get_as(const json& obj, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    malformed("field '" + std::string(key) + "' has the wrong type");
  }
}

double get_number(const json& obj, const char* key) {
  if (!obj.at(key).is_number()) malformed(std::string(key) + " is not a number");
  return obj.at(key).get<double>();
}

}  // namespace

RecommendationSet recommendations_from_json(const json& doc) {
  expect_keys(doc,
              {"schema_version", "profile_fingerprint", "scenario_id",
               "respect_thread_safety", "estimate_unit", "recommendations",
               "aggregate_current_joules", "aggregate_recommended_joules",
               "diagnostics"},
              "document");
  RecommendationSet set;
  set.schema_version = get_as<int>(doc, "schema_version");
  if (set.schema_version != kRecommendationSchemaVersion) {
    malformed("unsupported schema_version " + std::to_string(set.schema_version));
  }
  set.profile_fingerprint = get_as<std::string>(doc, "profile_fingerprint");
  set.scenario_id = get_as<std::string>(doc, "scenario_id");
  set.respect_thread_safety = get_as<bool>(doc, "respect_thread_safety");
  set.aggregate_current_joules = get_number(doc, "aggregate_current_joules");
  set.aggregate_recommended_joules = get_number(doc, "aggregate_recommended_joules");
  set.diagnostics = get_as<std::vector<std::string>>(doc, "diagnostics");
  if (!doc.at("recommendations").is_array()) malformed("recommendations is not an array");
  std::set<std::string> ids;
  for (const auto& jr : doc.at("recommendations")) {
    expect_keys(jr,
                {"site_id", "file", "line", "api_kind", "current_impl",
                 "recommended_impl", "estimated_current_joules",
                 "estimated_recommended_joules", "savings_fraction",
                 "current_estimate_partial", "rationale"},
                "recommendation");
    Recommendation r;
    r.site_id = get_as<std::string>(jr, "site_id");
    if (!ids.insert(r.site_id).second) malformed("duplicate site_id " + r.site_id);
    r.file = get_as<std::string>(jr, "file");
    r.line = get_as<std::size_t>(jr, "line");
    r.api_kind = get_as<std::string>(jr, "api_kind");
    r.current_impl = get_as<std::string>(jr, "current_impl");
    r.recommended_impl = get_as<std::string>(jr, "recommended_impl");
    r.estimated_current_joules = get_number(jr, "estimated_current_joules");
    r.estimated_recommended_joules = get_number(jr, "estimated_recommended_joules");
    r.savings_fraction = get_number(jr, "savings_fraction");
    r.current_estimate_partial = get_as<bool>(jr, "current_estimate_partial");
    r.rationale = get_as<std::vector<std::string>>(jr, "rationale");
    set.recommendations.push_back(std::move(r));
  }
  return set;
}

RecommendationSet load_recommendations(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    malformed(path.string() + " is not valid JSON: " + e.what());
  }
  return recommendations_from_json(doc);
}

}  // namespace voltpick
