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

// Shared test helpers: random instance generators and brute-force oracles.

#ifndef VOLTPICK_TESTS_SUPPORT_HPP_
#define VOLTPICK_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "voltpick/groups.hpp"
#include "voltpick/profile.hpp"
#include "voltpick/recommender.hpp"
#include "voltpick/usage.hpp"

namespace testsupport {

using namespace voltpick;

inline std::filesystem::path fixture_dir() { return VOLTPICK_FIXTURE_DIR; }

inline void put(EnergyProfile& p, const std::string& kind,
                const std::string& impl, const std::string& op,
                std::optional<double> joules,
                SeriesStatus status = SeriesStatus::kMeasured) {
  ProfileEntry e;
  e.api_kind = kind;
  e.status = joules ? status : (status == SeriesStatus::kMeasured
                                    ? SeriesStatus::kDiscardedThreshold
                                    : status);
  if (joules) {
    e.mean_joules = *joules;
    e.mean_seconds = 0.001;
  }
  p.entries[{impl, op}] = e;
}

// One api kind "k" with impls "i0".. and ops "o0"...
struct Instance {
  EnergyProfile profile;
  Registry registry;
  std::vector<std::string> impls;
  std::vector<std::string> ops;
  std::set<std::string> safe;
};

struct InstanceShape {
  std::size_t max_impls = 6;
  std::size_t max_ops = 8;
  // Probability that an entry is not measured.
  double gap_rate = 0.1;
  // Integer energies in [1, max_joules] make exact ties common.
  int max_joules = 12;
  double safe_rate = 0.4;
};

inline Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape,
                                const std::string& kind = "k") {
  Instance in;
  std::uniform_int_distribution<std::size_t> n_impls(1, shape.max_impls);
  std::uniform_int_distribution<std::size_t> n_ops(1, shape.max_ops);
  std::uniform_int_distribution<int> joules(1, shape.max_joules);
  std::bernoulli_distribution gap(shape.gap_rate), safe(shape.safe_rate),
      unsupported(0.5);
  const std::size_t ni = n_impls(rng), no = n_ops(rng);
  ConstructGroup g;
  g.api_kind = kind;
  for (std::size_t o = 0; o < no; ++o) {
    in.ops.push_back("o" + std::to_string(o));
    g.operations.push_back({in.ops.back(), kind, WorkloadRole::kQuery});
  }
  for (std::size_t i = 0; i < ni; ++i) {
    const std::string id = kind + "_i" + std::to_string(i);
    in.impls.push_back(id);
    ImplementationDescriptor d;
    d.impl_id = id;
    d.api_kind = kind;
    d.thread_safe = safe(rng);
    if (d.thread_safe) in.safe.insert(id);
    g.implementations.push_back(d);
    for (const auto& op : in.ops) {
      if (gap(rng)) {
        put(in.profile, kind, id, op, std::nullopt,
            unsupported(rng) ? SeriesStatus::kUnsupported
                             : SeriesStatus::kDiscardedThreshold);
      } else {
        put(in.profile, kind, id, op, static_cast<double>(joules(rng)));
      }
    }
  }
  in.registry.add_group(g);
  in.profile.device_fingerprint = "test";
  return in;
}

inline std::vector<UsageSite> random_sites(std::mt19937_64& rng, const Instance& in,
                                           std::size_t max_sites) {
  std::uniform_int_distribution<std::size_t> n_sites(0, max_sites);
  std::uniform_int_distribution<std::size_t> pick_impl(0, in.impls.size() - 1);
  std::uniform_int_distribution<int> count(0, 30);
  std::bernoulli_distribution used(0.5);
  std::vector<UsageSite> sites;
  const std::size_t ns = n_sites(rng);
  for (std::size_t s = 0; s < ns; ++s) {
    UsageSite u;
    u.file = "f.ml";
    u.line = s + 1;
    u.column = 1;
    u.site_id = "f.ml:" + std::to_string(s + 1) + ":1";
    u.current_impl = in.impls[pick_impl(rng)];
    u.api_kind = in.registry.implementation(u.current_impl).api_kind;
    for (const auto& op : in.ops) {
      if (!used(rng)) continue;
      const int c = count(rng);
      u.op_counts[op] = c;
      u.raw_counts[op] = static_cast<std::uint64_t>(c);
    }
    sites.push_back(std::move(u));
  }
  return sites;
}

// ---- oracles

inline bool oracle_dominates(const EnergyProfile& p, const std::string& a,
                             const std::string& b,
                             const std::vector<std::string>& ops) {
  if (a == b) return false;
  for (const auto& op : ops) {
    const auto ea = p.entries.find({a, op});
    const auto eb = p.entries.find({b, op});
    if (ea == p.entries.end() || eb == p.entries.end()) return false;
    if (!ea->second.measured() || !eb->second.measured()) return false;
    if (!(*ea->second.mean_joules < *eb->second.mean_joules)) return false;
  }
  return true;
}

inline std::vector<std::string> oracle_prune(const EnergyProfile& p,
                                             const std::vector<std::string>& impls,
                                             const std::vector<std::string>& ops) {
  std::vector<std::string> out;
  for (const auto& x : impls) {
    bool dominated = false;
    for (const auto& y : impls) dominated = dominated || oracle_dominates(p, y, x, ops);
    if (!dominated) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct OracleChoice {
  bool no_candidates = false;
  std::string impl;
  double joules = 0.0;
};

// Exhaustive argmin over every implementation of the site's kind.
inline OracleChoice oracle_recommend(const UsageSite& site, const Instance& in,
                                     bool respect_thread_safety) {
  auto estimate = [&](const std::string& impl, bool& comparable) {
    double total = 0.0;
    comparable = true;
    for (const auto& [op, c] : site.op_counts) {
      if (c <= 0) continue;
      const auto e = in.profile.entries.find({impl, op});
      if (e == in.profile.entries.end() || !e->second.measured()) {
        comparable = false;
      } else {
        total += c * *e->second.mean_joules;
      }
    }
    return total;
  };
  const auto pruned = oracle_prune(in.profile, in.impls, in.ops);
  const bool safe_only = respect_thread_safety && in.safe.count(site.current_impl);
  bool cur_ok = false;
  const double cur = estimate(site.current_impl, cur_ok);

  std::vector<std::pair<std::string, double>> pool;
  if (cur_ok) pool.push_back({site.current_impl, cur});
  for (const auto& impl : in.impls) {
    if (impl == site.current_impl) continue;
    if (std::find(pruned.begin(), pruned.end(), impl) == pruned.end()) continue;
    if (safe_only && !in.safe.count(impl)) continue;
    bool ok = false;
    const double est = estimate(impl, ok);
    if (ok) pool.push_back({impl, est});
  }
  if (pool.empty()) return {true, "", 0.0};
  double best = pool.front().second;
  for (const auto& [impl, est] : pool) best = std::min(best, est);
  OracleChoice choice;
  if (cur_ok && cur == best) {
    choice = {false, site.current_impl, cur};
  } else {
    std::string smallest;
    for (const auto& [impl, est] : pool) {
      if (est == best && (smallest.empty() || impl < smallest)) smallest = impl;
    }
    choice = {false, smallest, best};
  }
  if (!cur_ok && !(choice.joules < cur)) choice = {false, site.current_impl, cur};
  return choice;
}

}  // namespace testsupport

#endif  // VOLTPICK_TESTS_SUPPORT_HPP_
