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

// Acceptance suite: one PASS/FAIL/SKIP line per criterion.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "voltpick/error.hpp"
#include "voltpick/harness.hpp"
#include "voltpick/io.hpp"
#include "voltpick/meter.hpp"
#include "voltpick/patcher.hpp"
#include "voltpick/profile.hpp"
#include "voltpick/recommender.hpp"
#include "voltpick/report.hpp"
#include "voltpick/usage.hpp"

using namespace voltpick;
namespace fs = std::filesystem;
using testsupport::put;

namespace {

struct Outcome {
  enum Kind { kPass, kFail, kSkip } kind;
  std::string detail;
};

Outcome pass(std::string d = {}) { return {Outcome::kPass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::kFail, std::move(d)}; }
Outcome skip(std::string d) { return {Outcome::kSkip, std::move(d)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream o;
  o << v;
  return o.str();
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---- criteria

Outcome estimation_model() {
  EnergyProfile p;
  put(p, "list", "std::vector", "insert(value)", 10.0);
  UsageSite s;
  s.site_id = "a:1:1";
  s.current_impl = "std::vector";
  s.api_kind = "list";
  s.op_counts["insert(value)"] = 100;
  const double j = estimate_site(s, "std::vector", p).joules;
  return j == 1000.0 ? pass("100 x 10 J = " + fmt(j) + " J") : fail("got " + fmt(j));
}

Outcome time_power_energy() {
  MeterConfig c;
  c.backend_kind = BackendKind::kTimePower;
  c.assumed_power_watts = 5.0;
  auto calls = std::make_shared<int>(0);
  Meter m = open_meter(c, [calls] {
    return (*calls)++ == 0 ? std::chrono::nanoseconds(0) : std::chrono::seconds(10);
  });
  const auto r = m.span_end(m.span_begin());
  if (r.elapsed_seconds != 10.0) return fail("elapsed " + fmt(r.elapsed_seconds));
  return r.joules == 50.0 ? pass("5 W x 10 s = " + fmt(r.joules) + " J")
                          : fail("got " + fmt(r.joules));
}

Outcome run_discipline() {
  MeterConfig c;
  c.backend_kind = BackendKind::kSynthetic;
  for (double j : {9, 8, 7, 5, 5, 5, 5, 5, 5, 5}) {
    c.script.push_back(0);
    c.script.push_back(static_cast<Microjoules>(j * 1e6));
  }
  Meter m = open_meter(c);
  const auto& reg = builtin_registry();
  RunPlan plan;  // N = 10, W = 3
  const auto series =
      run_operation(reg.implementation("std::vector"), reg.group("list").operations.front(),
                    Scenario{ScenarioId::kSmall, 100, 10}, m, plan);
  const double mean = summarize(series, plan.warmup_discard).first;
  return mean == 5.0 ? pass("mean of runs 4..10 = " + fmt(mean) + " J")
                     : fail("got " + fmt(mean));
}

Outcome threshold_rule() {
  std::vector<SeriesSummary> in;
  for (auto [id, t] : std::vector<std::pair<std::string, double>>{
           {"a", 0.001}, {"b", 0.050}, {"c", 0.150}}) {
    SeriesSummary s;
    s.impl_id = id;
    s.op_id = "op";
    s.status = SeriesStatus::kMeasured;
    s.mean_joules = 1.0;
    s.mean_seconds = t;
    in.push_back(s);
  }
  const auto out = apply_time_threshold(in, 100.0);
  std::string discarded;
  for (const auto& s : out) {
    if (s.status == SeriesStatus::kDiscardedThreshold) discarded += s.impl_id;
  }
  return discarded == "c" ? pass("only the 150 ms series discarded")
                          : fail("discarded: '" + discarded + "'");
}

Outcome dominance_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  testsupport::InstanceShape shape;
  shape.max_impls = 8;
  shape.max_ops = 6;
  shape.max_joules = 6;
  int matched = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = testsupport::random_instance(rng, shape);
    matched += prune_dominated(in.profile, "k") ==
               testsupport::oracle_prune(in.profile, in.impls, in.ops);
  }
  const double dt = seconds_since(t0);
  if (matched != 200) return fail(std::to_string(matched) + "/200 trials matched");
  if (dt >= 10.0) return fail("took " + fmt(dt) + " s");
  return pass("200/200 trials in " + fmt(dt) + " s");
}

Outcome recommender_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1002);
  int matched = 0, sites = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = testsupport::random_instance(rng, {});
    UsageReport report;
    report.sites = testsupport::random_sites(rng, in, 20);
    const auto set = recommend_program(report, in.profile, {}, in.registry);
    bool ok = true;
    std::size_t k = 0;
    for (const auto& s : report.sites) {
      ++sites;
      const auto expect = testsupport::oracle_recommend(s, in, true);
      if (expect.no_candidates) {
        ok = ok && std::any_of(set.diagnostics.begin(), set.diagnostics.end(),
                               [&](const std::string& d) {
                                 return d.find(s.site_id) != std::string::npos;
                               });
        continue;
      }
      ok = ok && k < set.recommendations.size() &&
           set.recommendations[k].site_id == s.site_id &&
           set.recommendations[k].recommended_impl == expect.impl;
      ++k;
    }
    matched += ok && k == set.recommendations.size();
  }
  const double dt = seconds_since(t0);
  if (matched != 100) return fail(std::to_string(matched) + "/100 instances matched");
  if (dt >= 30.0) return fail("took " + fmt(dt) + " s");
  return pass("100/100 instances (" + std::to_string(sites) + " sites) in " + fmt(dt) + " s");
}

Outcome scaling_invariance() {
  std::mt19937_64 rng(1003);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = testsupport::random_instance(rng, {});
    UsageReport report;
    report.sites = testsupport::random_sites(rng, in, 20);
    const auto base = recommend_program(report, in.profile, {}, in.registry);
    for (double k : {0.5, 3.0, 1e6}) {
      EnergyProfile scaled = in.profile;
      for (auto& [key, e] : scaled.entries) {
        if (e.mean_joules) *e.mean_joules *= k;
      }
      const auto s = recommend_program(report, scaled, {}, in.registry);
      if (s.recommendations.size() != base.recommendations.size()) {
        return fail("site count changed at k = " + fmt(k));
      }
      for (std::size_t i = 0; i < s.recommendations.size(); ++i, ++checked) {
        if (s.recommendations[i].recommended_impl != base.recommendations[i].recommended_impl) {
          return fail(s.recommendations[i].site_id + " changed at k = " + fmt(k));
        }
      }
    }
  }
  return pass(std::to_string(checked) + " scaled site choices identical");
}

Outcome thread_safety() {
  std::mt19937_64 rng(1004);
  int safe_sites = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto in = testsupport::random_instance(rng, {});
    ConstructGroup g = in.registry.group("k");
    ImplementationDescriptor cheap;
    cheap.impl_id = "k_cheap";
    cheap.api_kind = "k";
    g.implementations.push_back(cheap);
    Registry reg;
    reg.add_group(g);
    for (const auto& op : in.ops) put(in.profile, "k", cheap.impl_id, op, 0.5);
    in.impls.push_back(cheap.impl_id);
    in.registry = reg;
    UsageReport report;
    report.sites = testsupport::random_sites(rng, in, 20);
    const auto set = recommend_program(report, in.profile, Constraints{true}, reg);
    for (const auto& r : set.recommendations) {
      if (!reg.implementation(r.current_impl).thread_safe) continue;
      ++safe_sites;
      if (!reg.implementation(r.recommended_impl).thread_safe) {
        return fail(r.site_id + " moved to " + r.recommended_impl);
      }
    }
  }
  if (safe_sites == 0) return fail("no thread-safe sites generated");
  return pass(std::to_string(safe_sites) + " thread-safe sites kept safe");
}

Outcome wraparound() {
  const bool ok = correct_wraparound(2, 7, 10) == 5 && correct_wraparound(5, 3, 10) == 8 &&
                  correct_wraparound(4, 4, 10) == 0;
  return ok ? pass("(2,7,10)->5 (5,3,10)->8 (4,4,10)->0") : fail("vector mismatch");
}

Outcome end_to_end_determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path base = fs::temp_directory_path() / ("voltpick_accept_" + std::to_string(::getpid()));
  fs::remove_all(base);
  std::vector<std::vector<std::string>> outputs;
  for (const char* run : {"run1", "run2"}) {
    const fs::path dir = base / run;
    fs::create_directories(dir);
    fs::copy(testsupport::fixture_dir() / "minilang/src", dir / "src", fs::copy_options::recursive);
    const std::string cli = std::string("'") + VOLTPICK_CLI + "'";
    const std::string cmd =
        "cd '" + dir.string() + "' && " + cli +
        " profile build --backend synthetic --script 0,2000000,2000000,5000000 --seed 7"
        " --created-at 2026-01-01T00:00:00Z --out profile.json && " +
        cli + " analyze --lang minilang --loop-weight 10 --out usage.json src && " + cli +
        " recommend --profile profile.json --usage usage.json --format json --out recs.json && " +
        cli + " apply --recommendations recs.json --lang minilang --dry-run > patch.diff";
    if (shell(cmd) != 0) {
      fs::remove_all(base);
      return fail("pipeline failed in " + std::string(run));
    }
    std::vector<std::string> files;
    for (const char* f : {"profile.json", "usage.json", "recs.json", "patch.diff"}) {
      files.push_back(read_file(dir / f));
    }
    outputs.push_back(files);
  }
  fs::remove_all(base);
  const double dt = seconds_since(t0);
  if (outputs[0] != outputs[1]) return fail("outputs differ between runs");
  if (dt >= 10.0) return fail("took " + fmt(dt) + " s");
  return pass("profile, report, recommendations and diff byte-identical (" + fmt(dt) + " s)");
}

Outcome fixture_fidelity() {
  const fs::path fx = testsupport::fixture_dir() / "minilang";
  const auto& lang = builtin_language("minilang");
  const auto oracle = nlohmann::json::parse(read_file(fx / "expected_counts.json"));
  const double L = oracle.at("loop_weight").get<double>();
  SourceMap sources;
  UsageReport report;
  for (const auto& e : fs::directory_iterator(fx / "src")) {
    sources["src/" + e.path().filename().string()] = read_file(e.path());
  }
  for (const auto& [file, text] : sources) {
    for (auto& s : scan_file(text, lang, file, L)) report.sites.push_back(s);
  }
  const auto& expected = oracle.at("sites");
  if (expected.size() != report.sites.size()) {
    return fail("site count " + std::to_string(report.sites.size()) + " vs " +
                std::to_string(expected.size()));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& x = expected[i];
    const auto& s = report.sites[i];
    std::map<std::string, double> counts;
    for (const auto& [op, v] : x.at("counts").items()) counts[op] = v.get<double>();
    std::map<std::string, std::uint64_t> raw;
    for (const auto& [op, v] : x.at("raw_counts").items()) raw[op] = v.get<std::uint64_t>();
    if (s.site_id != x.at("site_id") || s.current_impl != x.at("impl") ||
        s.op_counts != counts || s.raw_counts != raw ||
        s.max_loop_depth != x.at("max_loop_depth").get<std::size_t>()) {
      return fail("site " + s.site_id + " differs from the oracle table");
    }
  }
  const auto profile = load_profile(fx / "profile.json");
  const auto recs = recommend_program(report, profile);
  const auto patches = plan_patches(recs, sources, lang);
  if (render_diff(patches, sources) != read_file(fx / "expected.diff")) {
    return fail("diff differs from expected.diff");
  }
  SourceMap next = sources;
  for (auto& [file, text] : patched_sources(patches, sources)) next[file] = text;
  UsageReport again;
  for (const auto& [file, text] : next) {
    for (auto& s : scan_file(text, lang, file, L)) again.sites.push_back(s);
  }
  for (const auto& r : recommend_program(again, profile).recommendations) {
    if (r.changed()) return fail("patched corpus still changes " + r.site_id);
  }
  return pass(std::to_string(report.sites.size()) + " sites match the oracle; " +
              std::to_string(patches.size()) + " patches reach a fixpoint");
}

Outcome round_trips() {
  MeterConfig c;
  c.backend_kind = BackendKind::kSynthetic;
  c.script = {0, 1234567, 2000000, 2100001};
  Meter m = open_meter(c);
  BuildOptions opt;
  opt.created_at = "2026-01-01T00:00:00Z";
  const auto profile = build_profile(builtin_registry().groups(),
                                     Scenario{ScenarioId::kSmall, 64, 16}, m,
                                     RunPlan::screening(), opt);
  const fs::path dir = fs::temp_directory_path() / ("voltpick_rt_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  save_profile(profile, dir / "p.json");
  const bool profile_ok = load_profile(dir / "p.json") == profile;

  const auto report = analyze_corpus({testsupport::fixture_dir() / "minilang/src"},
                                     builtin_language("minilang"), 10.0, "fixture");
  save_usage_report(report, dir / "u.json");
  const bool report_ok = load_usage_report(dir / "u.json") == report;

  const auto recs = recommend_program(
      report, load_profile(testsupport::fixture_dir() / "minilang/profile.json"));
  const std::string json = render_report(recs, ReportFormat::kJson);
  const bool recs_ok = recommendations_from_json(nlohmann::json::parse(json)) == recs;
  fs::remove_all(dir);
  if (!profile_ok) return fail("profile round-trip mismatch");
  if (!report_ok) return fail("usage report round-trip mismatch");
  if (!recs_ok) return fail("recommendation JSON mismatch");
  return pass("profile, usage report and recommendation JSON");
}

Outcome hardware_smoke() {
  MeterConfig c;
  c.backend_kind = BackendKind::kRaplPowercap;
  const std::string root = rapl_root_for(c);
  if (!rapl_available(root)) return skip("no readable powercap package counter under " + root);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Meter m = open_meter(c);
    RunPlan plan;
    // Counter resolution is coarse; accumulate a few ms per run.
    plan.min_metered_seconds = 0.005;
    const auto profile = build_profile({builtin_registry().group("list")},
                                       Scenario::preset(ScenarioId::kSmall), m, plan);
    for (const auto& [key, e] : profile.entries) {
      if (e.measured() && !(*e.mean_joules > 0.0 && *e.mean_seconds > 0.0)) {
        return fail(key.first + " " + key.second + " has a non-positive score");
      }
    }
    const std::string shown = render_profile(profile, true);
    const bool rendered = shown.find(" dominates ") != std::string::npos ||
                          shown.find("no dominance pairs") != std::string::npos;
    if (!rendered) return fail("no dominance report rendered");
    return pass("list/small profiled on RAPL in " + fmt(seconds_since(t0)) + " s");
  } catch (const Error& e) {
    return fail(e.what());
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"estimation model exactness", estimation_model},
      {"time-power energy backend", time_power_energy},
      {"run discipline", run_discipline},
      {"time threshold rule", threshold_rule},
      {"dominance oracle equivalence", dominance_oracle},
      {"recommender oracle equivalence", recommender_oracle},
      {"scaling invariance", scaling_invariance},
      {"thread-safety constraint", thread_safety},
      {"wraparound", wraparound},
      {"end-to-end determinism", end_to_end_determinism},
      {"fixture fidelity", fixture_fidelity},
      {"round-trips", round_trips},
      {"hardware-conditional smoke", hardware_smoke},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.kind == Outcome::kPass ? "PASS" : o.kind == Outcome::kFail ? "FAIL" : "SKIP";
    failures += o.kind == Outcome::kFail;
    std::cout << tag << " " << (i + 1) << " " << criteria[i].first;
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << "\n";
  }
  return failures == 0 ? 0 : 1;
}
