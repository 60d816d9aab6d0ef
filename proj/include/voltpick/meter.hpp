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

// Span-based energy measurement. A span is a begin/end pair of counter
// snapshots; its energy is the wraparound-corrected difference between them.
//
// Three backends are available:
//   rapl-powercap  reads the powercap sysfs counter tree (microjoules)
//   time-power     estimates E = P * t from an assumed constant power draw
//   synthetic      replays a scripted sequence of raw counter values
//
// Only a single counter wraparound per span is corrected. Spans must stay
// shorter than one counter period (minutes on typical RAPL hardware).

#ifndef VOLTPICK_METER_HPP_
#define VOLTPICK_METER_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace voltpick {

using Microjoules = std::uint64_t;

enum class BackendKind { kRaplPowercap, kTimePower, kSynthetic };
enum class Domain { kPackage, kCore, kUncore, kDram, kWholeDevice };

std::string_view to_string(BackendKind kind);
std::string_view to_string(Domain domain);
// Both throw Error(kInvalidConfig) on unknown labels.
BackendKind parse_backend_kind(std::string_view text);
Domain parse_domain(std::string_view text);

struct EnergyReading {
  double joules = 0.0;
  double elapsed_seconds = 0.0;
  std::string backend_id;
  Domain domain = Domain::kPackage;
  // True when joules were derived from elapsed time rather than a counter.
  bool estimated = false;

  bool operator==(const EnergyReading&) const = default;
};

struct MeterConfig {
  BackendKind backend_kind = BackendKind::kTimePower;
  // time-power only; must be > 0.
  double assumed_power_watts = 0.0;
  // rapl-powercap: fallback modulus when max_energy_range_uj is absent.
  // synthetic: 0 means the full 64-bit range.
  Microjoules counter_max_microjoules = 0;
  // synthetic only: raw counter values consumed one per read, cycling.
  std::vector<Microjoules> script;
  // synthetic only: the virtual clock advances this much per clock read.
  double synthetic_tick_seconds = 1e-3;
  Domain domain = Domain::kPackage;
  // rapl-powercap only; empty means $VOLTPICK_RAPL_ROOT, else
  // /sys/class/powercap.
  std::string rapl_root;
};

// Returns nanoseconds since an arbitrary fixed origin. Must be monotonic.
using MonotonicClock = std::function<std::chrono::nanoseconds()>;

MonotonicClock steady_clock_source();

struct SpanToken {
  Microjoules raw_start_microjoules = 0;
  std::chrono::nanoseconds start_instant{0};
  std::uint64_t serial = 0;
  const void* owner = nullptr;
};

// (cur_raw - prev_raw) mod counter_max. Throws Error(kInvalidConfig) when
// counter_max is zero or either raw value is out of range.
Microjoules correct_wraparound(Microjoules prev_raw, Microjoules cur_raw,
                               Microjoules counter_max);

class CounterSource;

// A meter bound to one backend. Single owner: spans on one meter must not
// interleave across threads.
class Meter {
 public:
  Meter(Meter&&) noexcept;
  Meter& operator=(Meter&&) noexcept;
  ~Meter();

  SpanToken span_begin();
  EnergyReading span_end(const SpanToken& token);

  BackendKind backend_kind() const noexcept { return kind_; }
  Domain domain() const noexcept { return domain_; }
  const std::string& backend_id() const noexcept { return backend_id_; }
  bool is_estimator() const noexcept {
    return kind_ == BackendKind::kTimePower;
  }
  // Modulus applied to counter differences; 0 means native 64-bit wrap.
  Microjoules counter_max() const noexcept { return counter_max_; }

 private:
  friend Meter open_meter(const MeterConfig&, MonotonicClock);
  Meter(BackendKind kind, Domain domain, std::string backend_id,
        std::unique_ptr<CounterSource> source, MonotonicClock clock,
        Microjoules counter_max, double watts);

  BackendKind kind_;
  Domain domain_;
  std::string backend_id_;
  std::unique_ptr<CounterSource> source_;
  MonotonicClock clock_;
  Microjoules counter_max_;
  double watts_;
  std::uint64_t next_serial_ = 1;
  std::set<std::uint64_t> open_spans_;
};

// Opens a meter; `clock` overrides the monotonic clock (the synthetic
// backend defaults to a virtual clock so its readings are reproducible).
// Throws Error(kInvalidConfig) or Error(kBackendUnavailable).
Meter open_meter(const MeterConfig& config, MonotonicClock clock = {});

// Applies $VOLTPICK_BACKEND, when set, to config.backend_kind.
void apply_environment_overrides(MeterConfig& config);

// Directory root searched by the rapl-powercap backend for `config`.
std::string rapl_root_for(const MeterConfig& config);

// True when a readable powercap counter for `domain` exists beneath `root`.
bool rapl_available(const std::string& root, Domain domain = Domain::kPackage);

}  // namespace voltpick

#endif  // VOLTPICK_METER_HPP_
