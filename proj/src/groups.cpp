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

#include "voltpick/groups.hpp"

#include <numeric>
#include <random>
#include <utility>

#include "voltpick/error.hpp"

namespace voltpick {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer; a bijection on 64-bit values.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(WorkloadRole role) {
  switch (role) {
    case WorkloadRole::kBuild: return "build";
    case WorkloadRole::kQuery: return "query";
    case WorkloadRole::kMutate: return "mutate";
    case WorkloadRole::kIterate: return "iterate";
  }
  return "unknown";
}

Workload make_workload(std::size_t element_count, std::size_t repetitions,
                       std::string_view op_id, std::uint64_t seed,
                       std::size_t run_index) {
  std::mt19937_64 rng(mix64(seed) ^ mix64(fnv1a(op_id)) ^
                      mix64(element_count * 0x10001ULL + run_index));
  const std::uint64_t base = rng();

  Workload w;
  w.elements.reserve(element_count);
  for (std::size_t i = 0; i < element_count; ++i) {
    w.elements.push_back(static_cast<std::int64_t>(mix64(base + i)));
  }
  w.fresh.reserve(repetitions);
  for (std::size_t k = 0; k < repetitions; ++k) {
    w.fresh.push_back(
        static_cast<std::int64_t>(mix64(base + element_count + k)));
  }

  if (element_count == 0) {
    w.hits = w.fresh;
  } else {
    std::vector<std::size_t> order(element_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t distinct = std::min(repetitions, element_count);
    for (std::size_t i = 0; i < distinct; ++i) {
      const std::size_t j = i + rng() % (element_count - i);
      std::swap(order[i], order[j]);
    }
    w.hits.reserve(repetitions);
    for (std::size_t k = 0; k < repetitions; ++k) {
      w.hits.push_back(w.elements[order[k % distinct]]);
    }
  }

  w.probes.reserve(repetitions);
  for (std::size_t k = 0; k < repetitions; ++k) {
    w.probes.push_back(k % 2 == 0 ? w.hits[k] : w.fresh[k]);
  }
  w.picks.reserve(repetitions);
  for (std::size_t k = 0; k < repetitions; ++k) w.picks.push_back(rng());
  return w;
}

bool ConstructGroup::has_operation(std::string_view op_id) const {
  for (const auto& op : operations) {
    if (op.op_id == op_id) return true;
  }
  return false;
}

void Registry::add_group(ConstructGroup group) {
  if (group.api_kind.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "group api_kind is empty");
  }
  if (has_api_kind(group.api_kind)) {
    throw Error(ErrorCode::kInvalidConfig,
                "duplicate api_kind '" + group.api_kind + "'");
  }
  std::set<std::string> ops;
  for (const auto& op : group.operations) {
    if (op.api_kind != group.api_kind) {
      throw Error(ErrorCode::kInvalidConfig,
                  "operation '" + op.op_id + "' has api_kind '" +
                      op.api_kind + "' in group '" + group.api_kind + "'");
    }
    if (!ops.insert(op.op_id).second) {
      throw Error(ErrorCode::kInvalidConfig,
                  "duplicate op_id '" + op.op_id + "'");
    }
  }
  std::set<std::string> ids;
  for (const auto& impl : group.implementations) {
    if (impl.api_kind != group.api_kind) {
      throw Error(ErrorCode::kInvalidConfig,
                  "implementation '" + impl.impl_id + "' has api_kind '" +
                      impl.api_kind + "' in group '" + group.api_kind + "'");
    }
    if (!ids.insert(impl.impl_id).second ||
        impl_index_.count(impl.impl_id) != 0) {
      throw Error(ErrorCode::kInvalidConfig,
                  "duplicate impl_id '" + impl.impl_id + "'");
    }
    for (const auto& op : impl.unsupported_ops) {
      if (ops.count(op) == 0) {
        throw Error(ErrorCode::kInvalidConfig,
                    "implementation '" + impl.impl_id +
                        "' marks unknown op '" + op + "' unsupported");
      }
    }
  }
  const std::size_t g = groups_.size();
  for (std::size_t i = 0; i < group.implementations.size(); ++i) {
    impl_index_.emplace(group.implementations[i].impl_id, std::pair{g, i});
  }
  groups_.push_back(std::move(group));
}

bool Registry::has_api_kind(std::string_view api_kind) const {
  for (const auto& g : groups_) {
    if (g.api_kind == api_kind) return true;
  }
  return false;
}

const ConstructGroup& Registry::group(std::string_view api_kind) const {
  for (const auto& g : groups_) {
    if (g.api_kind == api_kind) return g;
  }
  throw Error(ErrorCode::kUnknownApiKind,
              "unknown api_kind '" + std::string(api_kind) + "'");
}

const ImplementationDescriptor* Registry::find_implementation(
    std::string_view impl_id) const {
  auto it = impl_index_.find(impl_id);
  if (it == impl_index_.end()) return nullptr;
  return &groups_[it->second.first].implementations[it->second.second];
}

const ImplementationDescriptor& Registry::implementation(
    std::string_view impl_id) const {
  if (const auto* impl = find_implementation(impl_id)) return *impl;
  throw Error(ErrorCode::kUnknownImplementation,
              "unknown implementation '" + std::string(impl_id) + "'");
}

bool Registry::has_operation(std::string_view api_kind,
                             std::string_view op_id) const {
  return has_api_kind(api_kind) && group(api_kind).has_operation(op_id);
}

std::vector<std::string> Registry::api_kinds() const {
  std::vector<std::string> kinds;
  for (const auto& g : groups_) kinds.push_back(g.api_kind);
  return kinds;
}

const Registry& builtin_registry() {
  static const Registry registry = [] {
    Registry r;
    r.add_group(builtin_list_group());
    r.add_group(builtin_map_group());
    r.add_group(builtin_set_group());
    return r;
  }();
  return registry;
}

}  // namespace voltpick
