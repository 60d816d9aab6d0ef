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

// Construct groups: an API kind, its interchangeable implementations, and
// the operations every implementation is benchmarked on.

#ifndef VOLTPICK_GROUPS_HPP_
#define VOLTPICK_GROUPS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace voltpick {

enum class WorkloadRole { kBuild, kQuery, kMutate, kIterate };

std::string_view to_string(WorkloadRole role);

struct OperationSpec {
  std::string op_id;
  std::string api_kind;
  WorkloadRole workload_role = WorkloadRole::kQuery;
};

// Pre-generated operands for one measured run. Generated outside the
// metered span; all vectors have one entry per repetition except
// `elements`, which holds the pre-population contents (distinct values).
struct Workload {
  std::vector<std::int64_t> elements;
  // Existing elements, distinct while repetitions <= element count.
  std::vector<std::int64_t> hits;
  // Values guaranteed absent from `elements`.
  std::vector<std::int64_t> fresh;
  // Alternates hits (even positions) and fresh values (odd positions).
  std::vector<std::int64_t> probes;
  // Uniform random numbers for position selection (taken modulo size).
  std::vector<std::uint64_t> picks;

  bool operator==(const Workload&) const = default;
};

// Deterministic in all arguments.
Workload make_workload(std::size_t element_count, std::size_t repetitions,
                       std::string_view op_id, std::uint64_t seed,
                       std::size_t run_index);

// One live instance of an implementation under test.
class Workbench {
 public:
  virtual ~Workbench() = default;
  // Re-creates the structure from scratch. Not metered.
  virtual void populate(const Workload& workload) = 0;
  // Applies `op_id` once per repetition. This is the metered body.
  virtual void execute(std::string_view op_id, const Workload& workload) = 0;
  virtual std::size_t size() const = 0;
};

using WorkbenchFactory = std::function<std::unique_ptr<Workbench>()>;

struct ImplementationDescriptor {
  std::string impl_id;
  std::string api_kind;
  bool thread_safe = false;
  std::string source_label;
  // Operations of the api_kind this implementation cannot perform.
  std::set<std::string> unsupported_ops;
  // Empty for catalog-only descriptors (e.g. implementations known from a
  // profile but not runnable on this host).
  WorkbenchFactory factory;

  bool supports(std::string_view op_id) const {
    return unsupported_ops.count(std::string(op_id)) == 0;
  }
};

struct ConstructGroup {
  std::string api_kind;
  std::vector<ImplementationDescriptor> implementations;
  std::vector<OperationSpec> operations;

  bool has_operation(std::string_view op_id) const;
};

// Immutable once populated; descriptors are only handed out by const
// reference.
class Registry {
 public:
  // Throws Error(kInvalidConfig) on duplicate ids or inconsistent kinds.
  void add_group(ConstructGroup group);

  bool has_api_kind(std::string_view api_kind) const;
  // Throws Error(kUnknownApiKind).
  const ConstructGroup& group(std::string_view api_kind) const;
  // Throws Error(kUnknownImplementation).
  const ImplementationDescriptor& implementation(
      std::string_view impl_id) const;
  const ImplementationDescriptor* find_implementation(
      std::string_view impl_id) const;
  bool has_operation(std::string_view api_kind, std::string_view op_id) const;

  std::vector<std::string> api_kinds() const;
  const std::vector<ConstructGroup>& groups() const { return groups_; }

 private:
  std::vector<ConstructGroup> groups_;
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>>
      impl_index_;
};

// list (12 ops), map (4 ops) and set (3 ops) over the host's containers.
ConstructGroup builtin_list_group();
ConstructGroup builtin_map_group();
ConstructGroup builtin_set_group();
const Registry& builtin_registry();

}  // namespace voltpick

#endif  // VOLTPICK_GROUPS_HPP_
