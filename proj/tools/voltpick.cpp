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

// voltpick command-line interface.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "voltpick/error.hpp"
#include "voltpick/harness.hpp"
#include "voltpick/io.hpp"
#include "voltpick/meter.hpp"
#include "voltpick/patcher.hpp"
#include "voltpick/profile.hpp"
#include "voltpick/recommender.hpp"
#include "voltpick/report.hpp"
#include "voltpick/usage.hpp"

namespace {

using namespace voltpick;

struct MeterOptions {
  std::string backend = "time-power";
  double power_watts = 15.0;
  std::string script;
  double tick_seconds = 1e-3;
  std::string domain = "package";
  std::uint64_t counter_max = 0;
  std::string rapl_root;
};

void add_meter_options(CLI::App* cmd, MeterOptions& m) {
  cmd->add_option("--backend", m.backend,
                  "rapl-powercap, time-power or synthetic (VOLTPICK_BACKEND "
                  "overrides)")
      ->capture_default_str();
  cmd->add_option("--power", m.power_watts,
                  "assumed power in watts for the time-power estimator")
      ->capture_default_str();
  cmd->add_option("--script", m.script,
                  "synthetic counter readings in microjoules, comma separated, "
                  "or @FILE");
  cmd->add_option("--tick", m.tick_seconds,
                  "synthetic clock step in seconds per reading")
      ->capture_default_str();
  cmd->add_option("--domain", m.domain, "package, core, uncore, dram")
      ->capture_default_str();
  cmd->add_option("--counter-max", m.counter_max,
                  "counter modulus in microjoules when the host does not "
                  "provide one");
  cmd->add_option("--rapl-root", m.rapl_root,
                  "powercap tree root (default $VOLTPICK_RAPL_ROOT or "
                  "/sys/class/powercap)");
}

std::vector<Microjoules> parse_script(std::string text) {
  if (!text.empty() && text.front() == '@') text = read_file(text.substr(1));
  std::vector<Microjoules> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    std::istringstream line(token);
    std::string word;
    while (line >> word) {
      try {
        std::size_t used = 0;
        out.push_back(std::stoull(word, &used));
        if (used != word.size()) throw std::invalid_argument(word);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidConfig, "bad script value '" + word + "'");
      }
    }
  }
  return out;
}

MeterConfig meter_config(const MeterOptions& m) {
  MeterConfig c;
  c.backend_kind = parse_backend_kind(m.backend);
  apply_environment_overrides(c);
  c.assumed_power_watts = m.power_watts;
  c.synthetic_tick_seconds = m.tick_seconds;
  c.domain = parse_domain(m.domain);
  c.counter_max_microjoules = m.counter_max;
  c.rapl_root = m.rapl_root;
  if (!m.script.empty()) c.script = parse_script(m.script);
  return c;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
  } else {
    write_file_atomic(path, text);
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void warn_fingerprint(const EnergyProfile& profile) {
  const std::string host = host_fingerprint();
  if (profile.device_fingerprint != host) {
    std::cerr << "warning: profile was built on '" << profile.device_fingerprint
              << "', this host is '" << host << "'\n";
  }
}

std::string diagnostic_lines(const std::vector<std::string>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) out += "warning: " + d + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware container selection: profile, analyze, recommend, apply."};
  app.require_subcommand(1);

  // profile build / show
  auto* profile_cmd = app.add_subcommand("profile", "build or inspect energy profiles");
  profile_cmd->require_subcommand(1);

  auto* build_cmd = profile_cmd->add_subcommand("build", "measure an energy profile");
  MeterOptions build_meter;
  add_meter_options(build_cmd, build_meter);
  std::string groups_arg = "list,map,set", scenario_arg = "small", build_out;
  RunPlan plan;
  std::size_t elements = 0, repetitions = 0;
  std::string created_at, note, fingerprint, events_path;
  build_cmd->add_option("--group", groups_arg, "comma separated api kinds")
      ->capture_default_str();
  build_cmd->add_option("--scenario", scenario_arg, "small, medium or big")
      ->capture_default_str();
  build_cmd->add_option("--runs", plan.total_runs, "runs per series (N)")
      ->capture_default_str();
  build_cmd->add_option("--warmups", plan.warmup_discard,
                        "leading runs discarded (W)")
      ->capture_default_str();
  build_cmd->add_option("--threshold", plan.time_threshold_factor,
                        "discard series slower than this factor times the fastest")
      ->capture_default_str();
  build_cmd->add_option("--seed", plan.rng_seed, "workload seed")->capture_default_str();
  build_cmd->add_option("--min-span", plan.min_metered_seconds,
                        "repeat each run until this many metered seconds accumulate")
      ->capture_default_str();
  build_cmd->add_option("--elements", elements, "override the scenario element count");
  build_cmd->add_option("--repetitions", repetitions,
                        "override the scenario operation repetitions");
  build_cmd->add_option("--created-at", created_at,
                        "RFC 3339 timestamp (default $SOURCE_DATE_EPOCH or now)");
  build_cmd->add_option("--fingerprint", fingerprint, "device fingerprint override");
  build_cmd->add_option("--note", note, "free-form environment note");
  build_cmd->add_option("--events", events_path,
                        "write JSON-lines measurement events to FILE ('-' for stderr)");
  build_cmd->add_option("--out", build_out, "profile file (default stdout)");

  auto* show_cmd = profile_cmd->add_subcommand("show", "render a profile");
  std::string show_path;
  bool show_dominance = false;
  show_cmd->add_option("FILE", show_path, "profile file")->required();
  show_cmd->add_flag("--dominance", show_dominance, "list dominance pairs and candidates");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "count container operations per usage site");
  std::string lang_arg = "c-like", analyze_out, corpus_label;
  double loop_weight = 1.0;
  std::vector<std::string> analyze_paths;
  analyze_cmd->add_option("--lang", lang_arg,
                          "minilang, c-like, or a JSON language profile")
      ->capture_default_str();
  analyze_cmd->add_option("--loop-weight", loop_weight,
                          "count multiplier per loop nesting level")
      ->capture_default_str();
  analyze_cmd->add_option("--label", corpus_label, "corpus label");
  analyze_cmd->add_option("--out", analyze_out, "usage report file (default stdout)");
  analyze_cmd->add_option("PATH", analyze_paths, "files or directories")->required();

  // recommend
  auto* recommend_cmd = app.add_subcommand("recommend", "choose implementations per site");
  std::string rec_profile, rec_usage, rec_format = "table", rec_out;
  bool respect_safety = true;
  recommend_cmd->add_option("--profile", rec_profile, "profile file")->required();
  recommend_cmd->add_option("--usage", rec_usage, "usage report file")->required();
  recommend_cmd->add_flag("--respect-thread-safety,!--no-respect-thread-safety",
                          respect_safety,
                          "keep thread-safe sites on thread-safe implementations "
                          "(default on)");
  recommend_cmd->add_option("--format", rec_format, "table, csv or json")
      ->capture_default_str();
  recommend_cmd->add_option("--out", rec_out, "output file (default stdout)");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "compare recommendations across profiles");
  std::string cmp_usage, cmp_format = "table", cmp_out;
  std::vector<std::string> cmp_profiles;
  compare_cmd->add_option("--usage", cmp_usage, "usage report file")->required();
  compare_cmd->add_option("--profile", cmp_profiles, "two or more profile files")
      ->required();
  compare_cmd->add_flag("--respect-thread-safety,!--no-respect-thread-safety",
                        respect_safety, "as for recommend");
  compare_cmd->add_option("--format", cmp_format, "table, csv or json")
      ->capture_default_str();
  compare_cmd->add_option("--out", cmp_out, "output file (default stdout)");

  // apply
  auto* apply_cmd = app.add_subcommand("apply", "rewrite constructor tokens");
  std::string apply_recs, apply_lang = "c-like", apply_out;
  bool in_place = false, dry_run = false;
  apply_cmd->add_option("--recommendations", apply_recs,
                        "recommendations JSON from 'recommend --format json'")
      ->required();
  apply_cmd->add_option("--lang", apply_lang, "language the sources are written in")
      ->capture_default_str();
  auto* dry_flag = apply_cmd->add_flag("--dry-run", dry_run,
                                       "print a unified diff only (default)");
  apply_cmd->add_flag("--in-place", in_place, "write the patched files")
      ->excludes(dry_flag);
  apply_cmd->add_option("--out", apply_out, "diff file (default stdout)");

  // meter selftest
  auto* meter_cmd = app.add_subcommand("meter", "energy meter utilities");
  meter_cmd->require_subcommand(1);
  auto* selftest_cmd = meter_cmd->add_subcommand("selftest", "meter a short busy span");
  MeterOptions selftest_meter;
  add_meter_options(selftest_cmd, selftest_meter);
  double selftest_seconds = 0.2;
  selftest_cmd->add_option("--seconds", selftest_seconds, "span length")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (build_cmd->parsed()) {
      ScenarioId id = parse_scenario_id(scenario_arg);
      Scenario scenario = Scenario::preset(id);
      if (elements > 0) scenario.element_count = elements;
      if (repetitions > 0) scenario.op_repetitions = repetitions;
      plan.validate();
      const Registry& registry = builtin_registry();
      std::vector<ConstructGroup> groups;
      for (const auto& kind : split_list(groups_arg)) groups.push_back(registry.group(kind));
      Meter meter = open_meter(meter_config(build_meter));

      std::ofstream events_file;
      std::ostream* events = nullptr;
      if (events_path == "-") {
        events = &std::cerr;
      } else if (!events_path.empty()) {
        events_file.open(events_path);
        if (!events_file) throw Error(ErrorCode::kIoError, "cannot open " + events_path);
        events = &events_file;
      }
      BuildOptions options;
      options.device_fingerprint = fingerprint.empty() ? host_fingerprint() : fingerprint;
      options.created_at = created_at.empty() ? creation_timestamp() : created_at;
      options.environment_note = note;
      options.log = EventLog(events);
      const EnergyProfile profile = build_profile(groups, scenario, meter, plan, options);
      write_output(build_out, serialize_profile(profile));
    } else if (show_cmd->parsed()) {
      std::cout << render_profile(load_profile(show_path), show_dominance);
    } else if (analyze_cmd->parsed()) {
      const LanguageProfile lang = resolve_language(lang_arg);
      std::vector<std::filesystem::path> paths(analyze_paths.begin(), analyze_paths.end());
      const UsageReport report = analyze_corpus(paths, lang, loop_weight, corpus_label);
      std::cerr << diagnostic_lines(report.diagnostics);
      write_output(analyze_out, serialize_usage_report(report));
    } else if (recommend_cmd->parsed()) {
      const ReportFormat format = parse_report_format(rec_format);
      const EnergyProfile profile = load_profile(rec_profile);
      warn_fingerprint(profile);
      const UsageReport report = load_usage_report(rec_usage);
      const RecommendationSet recs =
          recommend_program(report, profile, Constraints{respect_safety});
      if (format != ReportFormat::kTable) std::cerr << diagnostic_lines(recs.diagnostics);
      write_output(rec_out, render_report(recs, format));
    } else if (compare_cmd->parsed()) {
      const ReportFormat format = parse_report_format(cmp_format);
      const UsageReport report = load_usage_report(cmp_usage);
      std::vector<EnergyProfile> profiles;
      for (const auto& p : cmp_profiles) profiles.push_back(load_profile(p));
      const ProfileComparison cmp =
          compare_profiles(report, profiles, Constraints{respect_safety});
      write_output(cmp_out, render_comparison(cmp, cmp_profiles, format));
    } else if (apply_cmd->parsed()) {
      const LanguageProfile lang = resolve_language(apply_lang);
      const RecommendationSet recs = load_recommendations(apply_recs);
      const SourceMap sources = read_sources(recs);
      const auto patches = plan_patches(recs, sources, lang);
      const std::string diff = apply_patches(
          patches, sources, in_place ? ApplyMode::kInPlace : ApplyMode::kDryRun);
      if (in_place) {
        std::cerr << patches.size() << " construction site(s) rewritten\n";
        if (!apply_out.empty()) write_output(apply_out, diff);
      } else {
        write_output(apply_out, diff);
      }
    } else if (selftest_cmd->parsed()) {
      const MeterConfig config = meter_config(selftest_meter);
      if (config.backend_kind == BackendKind::kRaplPowercap) {
        std::cout << "powercap root " << rapl_root_for(config) << "\n";
      }
      Meter meter = open_meter(config);
      const SpanToken token = meter.span_begin();
      const auto until = std::chrono::steady_clock::now() +
                         std::chrono::duration<double>(selftest_seconds);
      volatile std::uint64_t spin = 0;
      while (std::chrono::steady_clock::now() < until) spin = spin + 1;
      const EnergyReading r = meter.span_end(token);
      std::cout << "backend " << r.backend_id << " domain " << to_string(r.domain)
                << (r.estimated ? " (estimate)" : "") << "\n"
                << "joules " << r.joules << "\nseconds " << r.elapsed_seconds
                << "\nwatts " << (r.elapsed_seconds > 0 ? r.joules / r.elapsed_seconds : 0.0)
                << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "voltpick: " << e.what() << "\n";
    return is_environment_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "voltpick: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
