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

#include "voltpick/meter.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <utility>

#include "voltpick/error.hpp"

namespace voltpick {

namespace fs = std::filesystem;

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kRaplPowercap: return "rapl-powercap";
    case BackendKind::kTimePower: return "time-power";
    case BackendKind::kSynthetic: return "synthetic";
  }
  return "unknown";
}

std::string_view to_string(Domain domain) {
  switch (domain) {
    case Domain::kPackage: return "package";
    case Domain::kCore: return "core";
    case Domain::kUncore: return "uncore";
    case Domain::kDram: return "dram";
    case Domain::kWholeDevice: return "whole-device";
  }
  return "unknown";
}

BackendKind parse_backend_kind(std::string_view text) {
  for (auto kind : {BackendKind::kRaplPowercap, BackendKind::kTimePower,
                    BackendKind::kSynthetic}) {
    if (to_string(kind) == text) return kind;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown backend '" + std::string(text) + "'");
}

Domain parse_domain(std::string_view text) {
  for (auto d : {Domain::kPackage, Domain::kCore, Domain::kUncore,
                 Domain::kDram, Domain::kWholeDevice}) {
    if (to_string(d) == text) return d;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown domain '" + std::string(text) + "'");
}

MonotonicClock steady_clock_source() {
  return [] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now().time_since_epoch());
  };
}

Microjoules correct_wraparound(Microjoules prev_raw, Microjoules cur_raw,
                               Microjoules counter_max) {
  if (counter_max == 0) {
    throw Error(ErrorCode::kInvalidConfig, "counter_max must be > 0");
  }
  if (prev_raw >= counter_max || cur_raw >= counter_max) {
    throw Error(ErrorCode::kInvalidConfig,
                "raw counter value exceeds counter_max");
  }
  if (cur_raw >= prev_raw) return cur_raw - prev_raw;
  return (counter_max - prev_raw) + cur_raw;
}

class CounterSource {
 public:
  virtual ~CounterSource() = default;
  virtual Microjoules read() = 0;
};

namespace {

class ZeroSource final : public CounterSource {
 public:
  Microjoules read() override { return 0; }
};

class ScriptSource final : public CounterSource {
 public:
  explicit ScriptSource(std::vector<Microjoules> script)
      : script_(std::move(script)) {}

  Microjoules read() override {
    Microjoules value = script_[pos_];
    pos_ = (pos_ + 1) % script_.size();
    return value;
  }

 private:
  std::vector<Microjoules> script_;
  std::size_t pos_ = 0;
};

std::optional<Microjoules> read_microjoules(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string text;
  in >> text;
  if (!in || text.empty() ||
      !std::all_of(text.begin(), text.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  try {
    return static_cast<Microjoules>(std::stoull(text));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

class PowercapSource final : public CounterSource {
 public:
  explicit PowercapSource(fs::path energy_file)
      : energy_file_(std::move(energy_file)) {}

  Microjoules read() override {
    auto value = read_microjoules(energy_file_);
    if (!value) {
      throw Error(ErrorCode::kReadFailure,
                  "cannot read " + energy_file_.string());
    }
    return *value;
  }

 private:
  fs::path energy_file_;
};

bool zone_matches(const std::string& name, Domain domain) {
  switch (domain) {
    case Domain::kPackage: return name.rfind("package", 0) == 0;
    case Domain::kCore: return name == "core";
    case Domain::kUncore: return name == "uncore";
    case Domain::kDram: return name == "dram";
    case Domain::kWholeDevice: return false;
  }
  return false;
}

// Finds the first zone (sorted by directory name, one nesting level deep)
// whose `name` entry matches the domain.
std::optional<fs::path> find_zone(const fs::path& root, Domain domain) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return std::nullopt;
  std::vector<fs::path> zones;
  for (const auto& top : fs::directory_iterator(root, ec)) {
    zones.push_back(top.path());
    if (!fs::is_directory(top.path(), ec)) continue;
    for (const auto& sub : fs::directory_iterator(top.path(), ec)) {
      if (sub.path().filename().string().find(':') != std::string::npos) {
        zones.push_back(sub.path());
      }
    }
  }
  std::sort(zones.begin(), zones.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename() < b.filename();
            });
  for (const auto& zone : zones) {
    std::ifstream name_file(zone / "name");
    std::string name;
    if (!(name_file >> name)) continue;
    if (zone_matches(name, domain) && fs::exists(zone / "energy_uj", ec)) {
      return zone;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string rapl_root_for(const MeterConfig& config) {
  if (!config.rapl_root.empty()) return config.rapl_root;
  if (const char* env = std::getenv("VOLTPICK_RAPL_ROOT"); env && *env) {
    return env;
  }
  return "/sys/class/powercap";
}

bool rapl_available(const std::string& root, Domain domain) {
  auto zone = find_zone(root, domain);
  return zone && read_microjoules(*zone / "energy_uj").has_value();
}

void apply_environment_overrides(MeterConfig& config) {
  if (const char* env = std::getenv("VOLTPICK_BACKEND"); env && *env) {
    config.backend_kind = parse_backend_kind(env);
  }
}

Meter::Meter(BackendKind kind, Domain domain, std::string backend_id,
             std::unique_ptr<CounterSource> source, MonotonicClock clock,
             Microjoules counter_max, double watts)
    : kind_(kind),
      domain_(domain),
      backend_id_(std::move(backend_id)),
      source_(std::move(source)),
      clock_(std::move(clock)),
      counter_max_(counter_max),
      watts_(watts) {}

Meter::Meter(Meter&&) noexcept = default;
Meter& Meter::operator=(Meter&&) noexcept = default;
Meter::~Meter() = default;

SpanToken Meter::span_begin() {
  SpanToken token;
  token.raw_start_microjoules = source_->read();
  token.start_instant = clock_();
  token.serial = next_serial_++;
  token.owner = this;
  open_spans_.insert(token.serial);
  return token;
}

EnergyReading Meter::span_end(const SpanToken& token) {
  if (token.owner != this || open_spans_.erase(token.serial) == 0) {
    throw Error(ErrorCode::kTokenReuse,
                "span token already consumed or not issued by this meter");
  }
  const auto end_instant = clock_();
  const Microjoules raw_end = source_->read();

  EnergyReading reading;
  reading.backend_id = backend_id_;
  reading.domain = domain_;
  const auto elapsed = end_instant - token.start_instant;
  reading.elapsed_seconds =
      elapsed.count() > 0 ? static_cast<double>(elapsed.count()) / 1e9 : 0.0;

  if (kind_ == BackendKind::kTimePower) {
    reading.joules = watts_ * reading.elapsed_seconds;
    reading.estimated = true;
    return reading;
  }

  Microjoules delta = 0;
  if (counter_max_ == 0) {
    delta = raw_end - token.raw_start_microjoules;
  } else {
    try {
      delta = correct_wraparound(token.raw_start_microjoules, raw_end,
                                 counter_max_);
    } catch (const Error& e) {
      throw Error(ErrorCode::kReadFailure, e.what());
    }
  }
  reading.joules = static_cast<double>(delta) / 1e6;
  return reading;
}

Meter open_meter(const MeterConfig& config, MonotonicClock clock) {
  switch (config.backend_kind) {
    case BackendKind::kTimePower: {
      if (!(config.assumed_power_watts > 0.0)) {
        throw Error(ErrorCode::kInvalidConfig,
                    "time-power backend requires assumed_power_watts > 0");
      }
      return Meter(BackendKind::kTimePower, Domain::kWholeDevice,
                   "time-power", std::make_unique<ZeroSource>(),
                   clock ? std::move(clock) : steady_clock_source(), 0,
                   config.assumed_power_watts);
    }
    case BackendKind::kSynthetic: {
      if (config.script.empty()) {
        throw Error(ErrorCode::kInvalidConfig,
                    "synthetic backend requires a non-empty script");
      }
      if (config.counter_max_microjoules != 0 &&
          std::any_of(config.script.begin(), config.script.end(),
                      [&](Microjoules v) {
                        return v >= config.counter_max_microjoules;
                      })) {
        throw Error(ErrorCode::kInvalidConfig,
                    "synthetic script value exceeds counter_max");
      }
      if (!clock) {
        if (!(config.synthetic_tick_seconds >= 0.0)) {
          throw Error(ErrorCode::kInvalidConfig,
                      "synthetic tick must be non-negative");
        }
        const auto tick = std::chrono::nanoseconds(
            static_cast<std::int64_t>(config.synthetic_tick_seconds * 1e9));
        auto now = std::make_shared<std::chrono::nanoseconds>(0);
        clock = [now, tick] {
          *now += tick;
          return *now;
        };
      }
      return Meter(BackendKind::kSynthetic, config.domain, "synthetic",
                   std::make_unique<ScriptSource>(config.script),
                   std::move(clock), config.counter_max_microjoules, 0.0);
    }
    case BackendKind::kRaplPowercap: {
      if (config.domain == Domain::kWholeDevice) {
        throw Error(ErrorCode::kInvalidConfig,
                    "rapl-powercap has no whole-device domain");
      }
      const fs::path root = rapl_root_for(config);
      auto zone = find_zone(root, config.domain);
      if (!zone) {
        throw Error(ErrorCode::kBackendUnavailable,
                    "no powercap zone for domain '" +
                        std::string(to_string(config.domain)) + "' under " +
                        root.string());
      }
      if (!read_microjoules(*zone / "energy_uj")) {
        throw Error(ErrorCode::kBackendUnavailable,
                    "cannot read " + (*zone / "energy_uj").string() +
                        " (insufficient privilege?)");
      }
      Microjoules modulus = config.counter_max_microjoules;
      if (auto range = read_microjoules(*zone / "max_energy_range_uj")) {
        // The counter takes values in [0, max_energy_range_uj].
        modulus = *range + 1;
      }
      if (modulus == 0) {
        throw Error(ErrorCode::kInvalidConfig,
                    "rapl backend requires counter_max_microjoules > 0");
      }
      return Meter(BackendKind::kRaplPowercap, config.domain,
                   "rapl-powercap:" + zone->filename().string(),
                   std::make_unique<PowercapSource>(*zone / "energy_uj"),
                   clock ? std::move(clock) : steady_clock_source(), modulus,
                   0.0);
    }
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown backend kind");
}

}  // namespace voltpick
