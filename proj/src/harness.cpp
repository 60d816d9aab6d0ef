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

#include "voltpick/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <tuple>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "voltpick/error.hpp"

namespace voltpick {

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::kSmall: return "small";
    case ScenarioId::kMedium: return "medium";
    case ScenarioId::kBig: return "big";
  }
  return "unknown";
}

ScenarioId parse_scenario_id(std::string_view text) {
  for (auto id : {ScenarioId::kSmall, ScenarioId::kMedium, ScenarioId::kBig}) {
    if (to_string(id) == text) return id;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown scenario '" + std::string(text) + "'");
}

Scenario Scenario::preset(ScenarioId id) {
  switch (id) {
    case ScenarioId::kSmall: return {id, 1000, 1000};
    case ScenarioId::kMedium: return {id, 100000, 1000};
    case ScenarioId::kBig: return {id, 1000000, 100};
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown scenario");
}

std::string_view to_string(SeriesStatus status) {
  switch (status) {
    case SeriesStatus::kMeasured: return "measured";
    case SeriesStatus::kDiscardedThreshold: return "discarded-threshold";
    case SeriesStatus::kUnsupported: return "unsupported";
  }
  return "unknown";
}

SeriesStatus parse_series_status(std::string_view text) {
  for (auto s : {SeriesStatus::kMeasured, SeriesStatus::kDiscardedThreshold,
                 SeriesStatus::kUnsupported}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown status '" + std::string(text) + "'");
}

void RunPlan::validate() const {
  if (total_runs == 0) {
    throw Error(ErrorCode::kInvalidConfig, "total_runs must be >= 1");
  }
  if (warmup_discard >= total_runs) {
    throw Error(ErrorCode::kInvalidConfig,
                "warmup_discard must be < total_runs");
  }
  if (!(time_threshold_factor > 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "time_threshold_factor must be > 1");
  }
  if (!(min_metered_seconds >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "min_metered_seconds must be >= 0");
  }
}

namespace {

std::atomic<bool> g_metering{false};

class MeteringLease {
 public:
  MeteringLease() {
    if (g_metering.exchange(true)) {
      throw Error(ErrorCode::kConcurrentMeasurement,
                  "another metered series is already running");
    }
  }
  ~MeteringLease() { g_metering.store(false); }
  MeteringLease(const MeteringLease&) = delete;
  MeteringLease& operator=(const MeteringLease&) = delete;
};

void quiesce_allocator() {
#if defined(__GLIBC__)
  ::malloc_trim(0);
#endif
}

constexpr std::size_t kMaxRoundsPerRun = 1u << 20;

}  // namespace

MeasurementSeries run_operation(const ImplementationDescriptor& impl,
                                const OperationSpec& op,
                                const Scenario& scenario, Meter& meter,
                                const RunPlan& plan, const EventLog& log) {
  plan.validate();
  if (scenario.op_repetitions == 0) {
    throw Error(ErrorCode::kInvalidConfig, "op_repetitions must be >= 1");
  }
  if (op.api_kind != impl.api_kind) {
    throw Error(ErrorCode::kApiKindMismatch,
                impl.impl_id + " is not a " + op.api_kind);
  }

  MeasurementSeries series;
  series.impl_id = impl.impl_id;
  series.op_id = op.op_id;
  series.scenario_id = scenario.scenario_id;

  if (!impl.supports(op.op_id)) {
    series.status = SeriesStatus::kUnsupported;
    log.emit({{"event", "series"},
              {"impl", impl.impl_id},
              {"op", op.op_id},
              {"scenario", to_string(scenario.scenario_id)},
              {"status", to_string(series.status)}});
    return series;
  }
  if (!impl.factory) {
    throw Error(ErrorCode::kInvalidConfig,
                impl.impl_id + " has no benchmark on this host");
  }

  MeteringLease lease;
  auto bench = impl.factory();
  series.runs.reserve(plan.total_runs);
  for (std::size_t run = 0; run < plan.total_runs; ++run) {
    const Workload workload =
        make_workload(scenario.element_count, scenario.op_repetitions,
                      op.op_id, plan.rng_seed, run);
    double joules = 0.0;
    double seconds = 0.0;
    std::size_t rounds = 0;
    do {
      bench->populate(workload);
      quiesce_allocator();
      EnergyReading reading;
      try {
        const SpanToken token = meter.span_begin();
        bench->execute(op.op_id, workload);
        reading = meter.span_end(token);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kInvalidConfig) throw;
        throw Error(ErrorCode::kMeterFailure, e.what());
      }
      if (!std::isfinite(reading.joules) || reading.joules < 0.0 ||
          !std::isfinite(reading.elapsed_seconds) ||
          reading.elapsed_seconds < 0.0) {
        throw Error(ErrorCode::kMeterFailure, "meter returned invalid reading");
      }
      joules += reading.joules;
      seconds += reading.elapsed_seconds;
      ++rounds;
    } while (seconds < plan.min_metered_seconds && rounds < kMaxRoundsPerRun);
    const auto n = static_cast<double>(rounds);
    series.runs.push_back({joules / n, seconds / n});
  }
  bench.reset();
  quiesce_allocator();

  series.status = SeriesStatus::kMeasured;
  if (log.enabled()) {
    const auto [mj, ms] = summarize(series, plan.warmup_discard);
    log.emit({{"event", "series"},
              {"impl", impl.impl_id},
              {"op", op.op_id},
              {"scenario", to_string(scenario.scenario_id)},
              {"status", to_string(series.status)},
              {"mean_joules", mj},
              {"mean_seconds", ms}});
  }
  return series;
}

std::pair<double, double> summarize(const MeasurementSeries& series,
                                    std::size_t warmup_discard) {
  if (series.status != SeriesStatus::kMeasured) {
    throw Error(ErrorCode::kNotMeasured,
                series.impl_id + " " + series.op_id + " is " +
                    std::string(to_string(series.status)));
  }
  if (warmup_discard >= series.runs.size()) {
    throw Error(ErrorCode::kInvalidConfig,
                "warmup_discard must be < number of runs");
  }
  double joules = 0.0;
  double seconds = 0.0;
  for (std::size_t i = warmup_discard; i < series.runs.size(); ++i) {
    joules += series.runs[i].joules;
    seconds += series.runs[i].seconds;
  }
  const auto kept = static_cast<double>(series.runs.size() - warmup_discard);
  return {joules / kept, seconds / kept};
}

SeriesSummary summarize_series(const MeasurementSeries& series,
                               std::size_t warmup_discard) {
  SeriesSummary s;
  s.impl_id = series.impl_id;
  s.op_id = series.op_id;
  s.scenario_id = series.scenario_id;
  s.status = series.status;
  if (series.status == SeriesStatus::kMeasured) {
    std::tie(s.mean_joules, s.mean_seconds) =
        summarize(series, warmup_discard);
  }
  return s;
}

std::vector<SeriesSummary> apply_time_threshold(
    std::vector<SeriesSummary> group_results, double factor,
    const EventLog& log) {
  double fastest = std::numeric_limits<double>::infinity();
  std::string fastest_impl;
  for (const auto& s : group_results) {
    if (s.status == SeriesStatus::kMeasured && s.mean_seconds < fastest) {
      fastest = s.mean_seconds;
      fastest_impl = s.impl_id;
    }
  }
  if (fastest_impl.empty()) {
    throw Error(ErrorCode::kEmptyGroup, "no measured series to threshold");
  }
  const double limit = factor * fastest;
  for (auto& s : group_results) {
    if (s.status == SeriesStatus::kMeasured && s.mean_seconds > limit) {
      s.status = SeriesStatus::kDiscardedThreshold;
      log.emit({{"event", "discard"},
                {"impl", s.impl_id},
                {"op", s.op_id},
                {"scenario", to_string(s.scenario_id)},
                {"mean_seconds", s.mean_seconds},
                {"limit_seconds", limit},
                {"fastest_impl", fastest_impl}});
    }
  }
  return group_results;
}

}  // namespace voltpick
