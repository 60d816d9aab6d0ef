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

#include "voltpick/profile.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <thread>

#include "voltpick/error.hpp"
#include "voltpick/io.hpp"

namespace voltpick {

using nlohmann::json;

const ProfileEntry* EnergyProfile::find(std::string_view impl_id,
                                        std::string_view op_id) const {
  auto it = entries.find(EntryKey{impl_id, op_id});
  return it == entries.end() ? nullptr : &it->second;
}

bool EnergyProfile::has_implementation(std::string_view impl_id) const {
  auto it = entries.lower_bound(EntryKey{impl_id, ""});
  return it != entries.end() && it->first.first == impl_id;
}

const std::string& EnergyProfile::api_kind_of(std::string_view impl_id) const {
  auto it = entries.lower_bound(EntryKey{impl_id, ""});
  if (it == entries.end() || it->first.first != impl_id) {
    throw Error(ErrorCode::kUnknownImplementation,
                "profile has no implementation '" + std::string(impl_id) +
                    "'");
  }
  return it->second.api_kind;
}

bool EnergyProfile::covers(std::string_view api_kind) const {
  return std::any_of(entries.begin(), entries.end(), [&](const auto& kv) {
    return kv.second.api_kind == api_kind;
  });
}

std::vector<std::string> EnergyProfile::api_kinds() const {
  std::set<std::string> kinds;
  for (const auto& [key, e] : entries) kinds.insert(e.api_kind);
  return {kinds.begin(), kinds.end()};
}

std::vector<std::string> EnergyProfile::implementations(
    std::string_view api_kind) const {
  std::vector<std::string> out;
  for (const auto& [key, e] : entries) {
    if (e.api_kind == api_kind && (out.empty() || out.back() != key.first)) {
      out.push_back(key.first);
    }
  }
  return out;
}

std::vector<std::string> EnergyProfile::operations(
    std::string_view api_kind) const {
  std::set<std::string> ops;
  for (const auto& [key, e] : entries) {
    if (e.api_kind == api_kind) ops.insert(key.second);
  }
  return {ops.begin(), ops.end()};
}

bool EnergyProfile::fully_measured(std::string_view impl_id) const {
  const std::string& kind = api_kind_of(impl_id);
  for (const auto& op : operations(kind)) {
    const auto* e = find(impl_id, op);
    if (e == nullptr || !e->measured()) return false;
  }
  return true;
}

EnergyProfile build_profile(const std::vector<ConstructGroup>& groups,
                            const Scenario& scenario, Meter& meter,
                            const RunPlan& plan,
                            const BuildOptions& options) {
  if (groups.empty()) {
    throw Error(ErrorCode::kEmptyGroup, "no construct groups to profile");
  }
  plan.validate();

  EnergyProfile profile;
  profile.device_fingerprint = options.device_fingerprint.empty()
                                   ? host_fingerprint()
                                   : options.device_fingerprint;
  profile.scenario = scenario;
  profile.created_at = options.created_at.empty() ? creation_timestamp()
                                                  : options.created_at;
  profile.meter = MeterInfo{meter.backend_id(),
                            std::string(to_string(meter.domain())),
                            meter.is_estimator()};
  profile.plan = plan;
  profile.environment_note = options.environment_note;

  for (const auto& group : groups) {
    if (group.implementations.empty()) {
      throw Error(ErrorCode::kEmptyGroup,
                  "group '" + group.api_kind + "' has no implementations");
    }
    for (const auto& op : group.operations) {
      std::vector<SeriesSummary> summaries;
      for (const auto& impl : group.implementations) {
        const auto series =
            run_operation(impl, op, scenario, meter, plan, options.log);
        summaries.push_back(summarize_series(series, plan.warmup_discard));
      }
      const bool any_measured =
          std::any_of(summaries.begin(), summaries.end(), [](const auto& s) {
            return s.status == SeriesStatus::kMeasured;
          });
      if (any_measured) {
        summaries = apply_time_threshold(std::move(summaries),
                                         plan.time_threshold_factor,
                                         options.log);
      }
      for (const auto& s : summaries) {
        ProfileEntry entry;
        entry.api_kind = group.api_kind;
        entry.status = s.status;
        if (s.status == SeriesStatus::kMeasured) {
          if (!(s.mean_joules > 0.0) || !(s.mean_seconds > 0.0)) {
            throw Error(ErrorCode::kMeterFailure,
                        s.impl_id + " " + s.op_id +
                            " measured no energy or time; the span is below "
                            "the meter's resolution (raise "
                            "min_metered_seconds)");
          }
          entry.mean_joules = s.mean_joules;
          entry.mean_seconds = s.mean_seconds;
        }
        profile.entries.emplace(EntryKey{s.impl_id, s.op_id},
                                std::move(entry));
      }
    }
  }
  return profile;
}

bool dominates(const EnergyProfile& profile, std::string_view a,
               std::string_view b) {
  const std::string& kind_a = profile.api_kind_of(a);
  const std::string& kind_b = profile.api_kind_of(b);
  if (kind_a != kind_b) {
    throw Error(ErrorCode::kApiKindMismatch,
                std::string(a) + " is a " + kind_a + " but " +
                    std::string(b) + " is a " + kind_b);
  }
  if (a == b) return false;
  const auto ops = profile.operations(kind_a);
  if (ops.empty()) return false;
  for (const auto& op : ops) {
    const auto* ea = profile.find(a, op);
    const auto* eb = profile.find(b, op);
    if (ea == nullptr || eb == nullptr || !ea->measured() || !eb->measured()) {
      return false;
    }
    if (!(*ea->mean_joules < *eb->mean_joules)) return false;
  }
  return true;
}

std::vector<std::string> prune_dominated(const EnergyProfile& profile,
                                         std::string_view api_kind) {
  const auto impls = profile.implementations(api_kind);
  if (impls.empty()) {
    throw Error(ErrorCode::kUnknownApiKind,
                "profile has no '" + std::string(api_kind) + "' entries");
  }
  std::vector<std::string> kept;
  for (const auto& x : impls) {
    const bool dominated =
        std::any_of(impls.begin(), impls.end(), [&](const std::string& y) {
          return dominates(profile, y, x);
        });
    if (!dominated) kept.push_back(x);
  }
  return kept;
}

std::vector<std::pair<std::string, std::string>> dominance_pairs(
    const EnergyProfile& profile, std::string_view api_kind) {
  std::vector<std::pair<std::string, std::string>> pairs;
  const auto impls = profile.implementations(api_kind);
  for (const auto& a : impls) {
    for (const auto& b : impls) {
      if (dominates(profile, a, b)) pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

// ------------------------------------------------------------ JSON

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedProfile, what);
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::set<std::string>& required,
                  const std::string& where) {
  if (!obj.is_object()) malformed(where + " is not an object");
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) {
      malformed("unknown field '" + key + "' in " + where);
    }
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) malformed("missing field '" + key + "' in " + where);
  }
}

const std::string& get_string(const json& obj, const char* key,
                              const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) malformed(std::string(key) + " in " + where +
                                " is not a string");
  return v.get_ref<const std::string&>();
}

std::uint64_t get_count(const json& obj, const char* key,
                        const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    malformed(std::string(key) + " in " + where +
              " is not a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double get_positive(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) malformed(std::string(key) + " in " + where +
                                " is not a number");
  const double d = v.get<double>();
  if (!std::isfinite(d) || !(d > 0.0)) {
    malformed(std::string(key) + " in " + where + " must be > 0");
  }
  return d;
}

json scenario_to_json(const Scenario& s) {
  return {{"id", to_string(s.scenario_id)},
          {"element_count", s.element_count},
          {"op_repetitions", s.op_repetitions}};
}

Scenario scenario_from_json(const json& j) {
  require_keys(j, {"id", "element_count", "op_repetitions"},
               {"id", "element_count", "op_repetitions"}, "scenario");
  Scenario s;
  try {
    s.scenario_id = parse_scenario_id(get_string(j, "id", "scenario"));
  } catch (const Error& e) {
    malformed(e.what());
  }
  s.element_count = get_count(j, "element_count", "scenario");
  s.op_repetitions = get_count(j, "op_repetitions", "scenario");
  if (s.op_repetitions == 0) malformed("scenario op_repetitions must be >= 1");
  return s;
}

}  // namespace

json profile_to_json(const EnergyProfile& profile) {
  json doc;
  doc["schema_version"] = profile.schema_version;
  doc["device_fingerprint"] = profile.device_fingerprint;
  doc["scenario"] = scenario_to_json(profile.scenario);
  doc["created_at"] = profile.created_at;
  json entries = json::array();
  for (const auto& [key, e] : profile.entries) {
    json je = {{"impl", key.first},
               {"op", key.second},
               {"api_kind", e.api_kind},
               {"status", to_string(e.status)}};
    if (e.mean_joules) je["mean_joules"] = *e.mean_joules;
    if (e.mean_seconds) je["mean_seconds"] = *e.mean_seconds;
    entries.push_back(std::move(je));
  }
  doc["entries"] = std::move(entries);
  if (profile.meter) {
    doc["meter"] = {{"backend_id", profile.meter->backend_id},
                    {"domain", profile.meter->domain},
                    {"estimator", profile.meter->estimator}};
  }
  if (profile.plan) {
    doc["plan"] = {{"total_runs", profile.plan->total_runs},
                   {"warmup_discard", profile.plan->warmup_discard},
                   {"time_threshold_factor",
                    profile.plan->time_threshold_factor},
                   {"rng_seed", profile.plan->rng_seed},
                   {"min_metered_seconds", profile.plan->min_metered_seconds}};
  }
  if (!profile.environment_note.empty()) {
    doc["environment_note"] = profile.environment_note;
  }
  return doc;
}

EnergyProfile profile_from_json(const json& doc) {
  if (!doc.is_object()) malformed("profile is not a JSON object");
  if (!doc.contains("schema_version") ||
      !doc.at("schema_version").is_number_integer()) {
    malformed("missing integer schema_version");
  }
  const auto version = doc.at("schema_version").get<std::int64_t>();
  if (version != kProfileSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "profile schema_version " + std::to_string(version) +
                    " (expected " + std::to_string(kProfileSchemaVersion) +
                    ")");
  }
  require_keys(doc,
               {"schema_version", "device_fingerprint", "scenario",
                "created_at", "entries", "meter", "plan", "environment_note"},
               {"schema_version", "device_fingerprint", "scenario",
                "created_at", "entries"},
               "profile");

  EnergyProfile p;
  p.schema_version = static_cast<int>(version);
  p.device_fingerprint = get_string(doc, "device_fingerprint", "profile");
  p.scenario = scenario_from_json(doc.at("scenario"));
  p.created_at = get_string(doc, "created_at", "profile");
  if (doc.contains("environment_note")) {
    p.environment_note = get_string(doc, "environment_note", "profile");
  }
  if (doc.contains("meter")) {
    const auto& m = doc.at("meter");
    require_keys(m, {"backend_id", "domain", "estimator"},
                 {"backend_id", "domain", "estimator"}, "meter");
    if (!m.at("estimator").is_boolean()) malformed("meter.estimator not bool");
    p.meter = MeterInfo{get_string(m, "backend_id", "meter"),
                        get_string(m, "domain", "meter"),
                        m.at("estimator").get<bool>()};
  }
  if (doc.contains("plan")) {
    const auto& j = doc.at("plan");
    const std::set<std::string> keys{"total_runs", "warmup_discard",
                                     "time_threshold_factor", "rng_seed",
                                     "min_metered_seconds"};
    require_keys(j, keys, keys, "plan");
    RunPlan plan;
    plan.total_runs = get_count(j, "total_runs", "plan");
    plan.warmup_discard = get_count(j, "warmup_discard", "plan");
    plan.rng_seed = get_count(j, "rng_seed", "plan");
    if (!j.at("time_threshold_factor").is_number() ||
        !j.at("min_metered_seconds").is_number()) {
      malformed("plan factor/min_metered_seconds must be numbers");
    }
    plan.time_threshold_factor = j.at("time_threshold_factor").get<double>();
    plan.min_metered_seconds = j.at("min_metered_seconds").get<double>();
    try {
      plan.validate();
    } catch (const Error& e) {
      malformed(e.what());
    }
    p.plan = plan;
  }

  const auto& entries = doc.at("entries");
  if (!entries.is_array()) malformed("entries is not an array");
  std::map<std::string, std::string> kind_of_impl;
  for (const auto& je : entries) {
    require_keys(je,
                 {"impl", "op", "api_kind", "status", "mean_joules",
                  "mean_seconds"},
                 {"impl", "op", "api_kind", "status"}, "entry");
    const std::string& impl = get_string(je, "impl", "entry");
    const std::string& op = get_string(je, "op", "entry");
    const std::string where = "entry " + impl + "/" + op;
    ProfileEntry e;
    e.api_kind = get_string(je, "api_kind", where);
    try {
      e.status = parse_series_status(get_string(je, "status", where));
    } catch (const Error& err) {
      malformed(err.what());
    }
    if (e.measured()) {
      if (!je.contains("mean_joules") || !je.contains("mean_seconds")) {
        malformed(where + " is measured but lacks scores");
      }
      e.mean_joules = get_positive(je, "mean_joules", where);
      e.mean_seconds = get_positive(je, "mean_seconds", where);
    } else if (je.contains("mean_joules") || je.contains("mean_seconds")) {
      malformed(where + " is not measured but carries scores");
    }
    auto [it, fresh] = kind_of_impl.emplace(impl, e.api_kind);
    if (!fresh && it->second != e.api_kind) {
      malformed("implementation " + impl + " appears under two api kinds");
    }
    if (!p.entries.emplace(EntryKey{impl, op}, std::move(e)).second) {
      malformed("duplicate " + where);
    }
  }
  for (const auto& kind : p.api_kinds()) {
    const auto ops = p.operations(kind);
    for (const auto& impl : p.implementations(kind)) {
      for (const auto& op : ops) {
        if (p.find(impl, op) == nullptr) {
          malformed("grid gap: " + impl + " has no entry for " + op);
        }
      }
    }
  }
  return p;
}

std::string serialize_profile(const EnergyProfile& profile) {
  return profile_to_json(profile).dump(2) + "\n";
}

EnergyProfile parse_profile(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    malformed(std::string("not valid JSON: ") + e.what());
  }
  return profile_from_json(doc);
}

void save_profile(const EnergyProfile& profile,
                  const std::filesystem::path& path) {
  write_file_atomic(path, serialize_profile(profile));
}

EnergyProfile load_profile(const std::filesystem::path& path) {
  return parse_profile(read_file(path));
}

std::string host_fingerprint() {
  std::string fp;
  struct utsname u {};
  if (::uname(&u) == 0) {
    fp = std::string(u.sysname) + " " + u.release + " " + u.machine;
  } else {
    fp = "unknown-os";
  }
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      auto colon = line.find(':');
      if (colon != std::string::npos) {
        auto model = line.substr(colon + 1);
        model.erase(0, model.find_first_not_of(" \t"));
        fp += "; " + model;
      }
      break;
    }
  }
  fp += "; " + std::to_string(std::thread::hardware_concurrency()) + " cpus";
  return fp;
}

std::string format_rfc3339(std::int64_t unix_seconds) {
  const std::time_t t = static_cast<std::time_t>(unix_seconds);
  std::tm tm {};
  ::gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string creation_timestamp() {
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    try {
      return format_rfc3339(std::stoll(env));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig,
                  "SOURCE_DATE_EPOCH is not an integer");
    }
  }
  return format_rfc3339(static_cast<std::int64_t>(std::time(nullptr)));
}

}  // namespace voltpick
