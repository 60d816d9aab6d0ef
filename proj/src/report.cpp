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

#include "voltpick/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "voltpick/error.hpp"

namespace voltpick {

namespace {

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string percent(double fraction) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

// Left-aligned text columns; numeric columns right-aligned.
class Table {
 public:
  explicit Table(std::vector<std::string> header, std::vector<bool> numeric)
      : numeric_(std::move(numeric)) {
    rows_.push_back(std::move(header));
  }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string str() const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        width[i] = std::max(width[i], row[i].size());
      }
    }
    std::string out;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) line += "  ";
        const std::string pad(width[i] - row[i].size(), ' ');
        line += numeric_[i] ? pad + row[i] : row[i] + pad;
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
    }
    return out;
  }

 private:
  std::vector<bool> numeric_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "table") return ReportFormat::kTable;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown format '" + std::string(text) + "' (table, csv, json)");
}

std::string render_report(const RecommendationSet& recs, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    return recommendations_to_json(recs).dump(2) + "\n";
  }
  if (format == ReportFormat::kCsv) {
    std::string out = csv_row({"site_id", "file", "line", "api_kind",
                               "current_impl", "recommended_impl",
                               "estimated_current_joules",
                               "estimated_recommended_joules",
                               "savings_fraction", "current_estimate_partial"});
    for (const auto& r : recs.recommendations) {
      out += csv_row({r.site_id, r.file, std::to_string(r.line), r.api_kind,
                      r.current_impl, r.recommended_impl,
                      number(r.estimated_current_joules),
                      number(r.estimated_recommended_joules),
                      number(r.savings_fraction),
                      r.current_estimate_partial ? "true" : "false"});
    }
    out += csv_row({"TOTAL", "", "", "", "", "",
                    number(recs.aggregate_current_joules),
                    number(recs.aggregate_recommended_joules),
                    number(recs.aggregate_savings_fraction()), ""});
    return out;
  }

  Table table({"SITE", "KIND", "CURRENT", "RECOMMENDED", "CURRENT SCORE",
               "RECOMMENDED SCORE", "SAVINGS"},
              {false, false, false, false, true, true, true});
  for (const auto& r : recs.recommendations) {
    table.add({r.site_id, r.api_kind, r.current_impl,
               r.changed() ? r.recommended_impl : "(keep)",
               number(r.estimated_current_joules) +
                   (r.current_estimate_partial ? "*" : ""),
               number(r.estimated_recommended_joules),
               percent(r.savings_fraction)});
  }
  table.add({"TOTAL", "", "", "", number(recs.aggregate_current_joules),
             number(recs.aggregate_recommended_joules),
             percent(recs.aggregate_savings_fraction())});
  std::string out = table.str();
  out += "scores are profile-relative estimates in joules (scenario " +
         recs.scenario_id + ")\n";
  const bool partial = std::any_of(
      recs.recommendations.begin(), recs.recommendations.end(),
      [](const Recommendation& r) { return r.current_estimate_partial; });
  if (partial) out += "* current score covers measured operations only\n";
  for (const auto& d : recs.diagnostics) out += "note: " + d + "\n";
  return out;
}

std::string render_comparison(const ProfileComparison& cmp,
                              const std::vector<std::string>& labels,
                              ReportFormat format) {
  auto label = [&](std::size_t i) {
    return i < labels.size() ? labels[i] : "profile " + std::to_string(i + 1);
  };
  if (format == ReportFormat::kJson) {
    nlohmann::json doc = {{"profiles", nlohmann::json::array()},
                          {"diff", nlohmann::json::array()}};
    for (std::size_t i = 0; i < cmp.sets.size(); ++i) {
      doc["profiles"].push_back({{"label", label(i)},
                                 {"recommendations",
                                  recommendations_to_json(cmp.sets[i])}});
    }
    for (const auto& row : cmp.diff) {
      doc["diff"].push_back({{"site_id", row.site_id}, {"choices", row.choices}});
    }
    return doc.dump(2) + "\n";
  }
  std::vector<std::string> header{"SITE"};
  for (std::size_t i = 0; i < cmp.sets.size(); ++i) header.push_back(label(i));
  if (format == ReportFormat::kCsv) {
    std::string out = csv_row(header);
    for (const auto& row : cmp.diff) {
      std::vector<std::string> fields{row.site_id};
      fields.insert(fields.end(), row.choices.begin(), row.choices.end());
      out += csv_row(fields);
    }
    return out;
  }
  Table totals({"PROFILE", "SCENARIO", "CURRENT SCORE", "RECOMMENDED SCORE",
                "SAVINGS", "CHANGES"},
               {false, false, true, true, true, true});
  for (std::size_t i = 0; i < cmp.sets.size(); ++i) {
    const auto& s = cmp.sets[i];
    const auto changes = std::count_if(
        s.recommendations.begin(), s.recommendations.end(),
        [](const Recommendation& r) { return r.changed(); });
    totals.add({label(i), s.scenario_id, number(s.aggregate_current_joules),
                number(s.aggregate_recommended_joules),
                percent(s.aggregate_savings_fraction()), std::to_string(changes)});
  }
  std::string out = totals.str() + "\n";
  if (cmp.diff.empty()) return out + "all profiles agree on every site\n";
  Table diff(header, std::vector<bool>(header.size(), false));
  for (const auto& row : cmp.diff) {
    std::vector<std::string> fields{row.site_id};
    for (const auto& c : row.choices) fields.push_back(c.empty() ? "-" : c);
    diff.add(std::move(fields));
  }
  return out + diff.str();
}

std::string render_profile(const EnergyProfile& profile, bool dominance) {
  std::string out = "scenario " + std::string(to_string(profile.scenario.scenario_id)) +
                    " (" + std::to_string(profile.scenario.element_count) +
                    " elements, " +
                    std::to_string(profile.scenario.op_repetitions) +
                    " repetitions)\ndevice " + profile.device_fingerprint +
                    "\ncreated " + profile.created_at + "\n";
  if (profile.meter) {
    out += "meter " + profile.meter->backend_id + " domain " +
           profile.meter->domain +
           (profile.meter->estimator ? " (time-power estimate)" : "") + "\n";
  }
  if (!profile.environment_note.empty()) {
    out += "note " + profile.environment_note + "\n";
  }
  for (const auto& kind : profile.api_kinds()) {
    out += "\n[" + kind + "]\n";
    Table table({"IMPLEMENTATION", "OPERATION", "STATUS", "MEAN J", "MEAN S"},
                {false, false, false, true, true});
    for (const auto& impl : profile.implementations(kind)) {
      for (const auto& op : profile.operations(kind)) {
        const ProfileEntry* e = profile.find(impl, op);
        if (e == nullptr) continue;
        table.add({impl, op, std::string(to_string(e->status)),
                   e->mean_joules ? number(*e->mean_joules) : "-",
                   e->mean_seconds ? number(*e->mean_seconds) : "-"});
      }
    }
    out += table.str();
    if (!dominance) continue;
    const auto pairs = dominance_pairs(profile, kind);
    if (pairs.empty()) {
      out += "no dominance pairs: all implementations are incomparable\n";
    }
    for (const auto& [a, b] : pairs) out += a + " dominates " + b + "\n";
    out += "candidates:";
    for (const auto& c : prune_dominated(profile, kind)) out += " " + c;
    out += "\n";
  }
  return out;
}

}  // namespace voltpick
