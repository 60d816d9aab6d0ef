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

#ifndef VOLTPICK_REPORT_HPP_
#define VOLTPICK_REPORT_HPP_

#include <string>
#include <string_view>

#include "voltpick/profile.hpp"
#include "voltpick/recommender.hpp"

namespace voltpick {

enum class ReportFormat { kTable, kCsv, kJson };

// Throws Error(kInvalidConfig).
ReportFormat parse_report_format(std::string_view text);

std::string render_report(const RecommendationSet& recs, ReportFormat format);

// Aggregates per profile followed by the sites whose choice differs.
std::string render_comparison(const ProfileComparison& cmp,
                              const std::vector<std::string>& labels,
                              ReportFormat format);

// Entry grid of a profile; with `dominance`, the dominance pairs and
// candidate set of every api kind.
std::string render_profile(const EnergyProfile& profile, bool dominance);

}  // namespace voltpick

#endif  // VOLTPICK_REPORT_HPP_
