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

// Metered micro-benchmark execution for (implementation, operation) pairs.
//
// Run discipline: every series has N independent runs. Each run rebuilds
// the structure outside the metered span and then meters the operation
// applied op_repetitions times. The first W runs are warm-up and excluded
// from the summary. Within one (operation, scenario), any series whose mean
// time exceeds factor x the fastest measured mean is discarded.

#ifndef VOLTPICK_HARNESS_HPP_
#define VOLTPICK_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "voltpick/event_log.hpp"
#include "voltpick/groups.hpp"
#include "voltpick/meter.hpp"

namespace voltpick {

enum class ScenarioId { kSmall, kMedium, kBig };

std::string_view to_string(ScenarioId id);
ScenarioId parse_scenario_id(std::string_view text);

struct Scenario {
  ScenarioId scenario_id = ScenarioId::kSmall;
  std::size_t element_count = 1000;
  std::size_t op_repetitions = 1000;

  // small 1000/1000, medium 100000/1000, big 1000000/100.
  static Scenario preset(ScenarioId id);
  bool operator==(const Scenario&) const = default;
};

struct RunPlan {
  std::size_t total_runs = 10;
  std::size_t warmup_discard = 3;
  double time_threshold_factor = 100.0;
  std::uint64_t rng_seed = 0;
  // Each run repeats rebuild+metered body until this much metered time has
  // accumulated and reports the per-round average. 0 means one round.
  double min_metered_seconds = 0.0;

  // Throws Error(kInvalidConfig) unless W < N, N >= 1, factor > 1.
  void validate() const;

  static RunPlan standard() { return {}; }
  // Three runs, no warm-up: a quick screen before full profiling.
  static RunPlan screening() {
    RunPlan p;
    p.total_runs = 3;
    p.warmup_discard = 0;
    return p;
  }
  bool operator==(const RunPlan&) const = default;
};

enum class SeriesStatus { kMeasured, kDiscardedThreshold, kUnsupported };

std::string_view to_string(SeriesStatus status);
SeriesStatus parse_series_status(std::string_view text);

struct RunSample {
  double joules = 0.0;
  double seconds = 0.0;
  bool operator==(const RunSample&) const = default;
};

struct MeasurementSeries {
  std::string impl_id;
  std::string op_id;
  ScenarioId scenario_id = ScenarioId::kSmall;
  std::vector<RunSample> runs;
  SeriesStatus status = SeriesStatus::kUnsupported;
  bool operator==(const MeasurementSeries&) const = default;
};

struct SeriesSummary {
  std::string impl_id;
  std::string op_id;
  ScenarioId scenario_id = ScenarioId::kSmall;
  SeriesStatus status = SeriesStatus::kUnsupported;
  double mean_joules = 0.0;
  double mean_seconds = 0.0;
};

// Runs one series. Unsupported operations yield status kUnsupported with no
// runs. Meter errors surface as Error(kMeterFailure); a second concurrent
// call anywhere in the process throws Error(kConcurrentMeasurement).
MeasurementSeries run_operation(const ImplementationDescriptor& impl,
                                const OperationSpec& op,
                                const Scenario& scenario, Meter& meter,
                                const RunPlan& plan,
                                const EventLog& log = EventLog{});

// (mean_joules, mean_seconds) over runs[W..]. Throws Error(kNotMeasured).
std::pair<double, double> summarize(const MeasurementSeries& series,
                                    std::size_t warmup_discard);

SeriesSummary summarize_series(const MeasurementSeries& series,
                               std::size_t warmup_discard);

// Re-marks every measured series with mean_seconds > factor * t_min as
// kDiscardedThreshold. Throws Error(kEmptyGroup) when nothing is measured.
std::vector<SeriesSummary> apply_time_threshold(
    std::vector<SeriesSummary> group_results, double factor,
    const EventLog& log = EventLog{});

}  // namespace voltpick

#endif  // VOLTPICK_HARNESS_HPP_
