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

// The built-in implementation pool and its benchmark adapters.

#include <algorithm>
#include <array>
#include <boost/container/flat_map.hpp>
#include <boost/container/flat_set.hpp>
#include <boost/container/small_vector.hpp>
#include <boost/container/stable_vector.hpp>
#include <deque>
#include <forward_list>
#include <list>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "voltpick/containers.hpp"
#include "voltpick/error.hpp"
#include "voltpick/groups.hpp"

namespace voltpick {

namespace {

using Value = std::int64_t;

inline void keep(Value v) { asm volatile("" : : "r"(v) : "memory"); }

constexpr std::string_view kStd = "c++ standard library";
constexpr std::string_view kBoost = "boost.container";
constexpr std::string_view kOwn = "voltpick";

std::size_t mid(std::size_t size) { return size / 2; }

[[noreturn]] void unknown_op(std::string_view api_kind, std::string_view op) {
  throw Error(ErrorCode::kInvalidConfig, "no " + std::string(api_kind) +
                                             " operation '" + std::string(op) +
                                             "'");
}

// ---------------------------------------------------------------- list

enum class ListOp {
  kInsertStart,
  kInsertMiddle,
  kInsertEnd,
  kInsertValue,
  kRemoveStart,
  kRemoveMiddle,
  kRemoveEnd,
  kRemoveValue,
  kGetRandomIndex,
  kIterateIterator,
  kIterateRandom,
  kContainsValue,
};

struct ListOpInfo {
  std::string_view id;
  ListOp op;
  WorkloadRole role;
};

constexpr std::array<ListOpInfo, 12> kListOps{{
    {"insert(start)", ListOp::kInsertStart, WorkloadRole::kMutate},
    {"insert(middle)", ListOp::kInsertMiddle, WorkloadRole::kMutate},
    {"insert(end)", ListOp::kInsertEnd, WorkloadRole::kMutate},
    {"insert(value)", ListOp::kInsertValue, WorkloadRole::kBuild},
    {"remove(start)", ListOp::kRemoveStart, WorkloadRole::kMutate},
    {"remove(middle)", ListOp::kRemoveMiddle, WorkloadRole::kMutate},
    {"remove(end)", ListOp::kRemoveEnd, WorkloadRole::kMutate},
    {"remove(value)", ListOp::kRemoveValue, WorkloadRole::kMutate},
    {"get(random-index)", ListOp::kGetRandomIndex, WorkloadRole::kQuery},
    {"iteration(iterator)", ListOp::kIterateIterator, WorkloadRole::kIterate},
    {"iteration(random)", ListOp::kIterateRandom, WorkloadRole::kIterate},
    {"contains(value)", ListOp::kContainsValue, WorkloadRole::kQuery},
}};

ListOp parse_list_op(std::string_view id) {
  for (const auto& info : kListOps) {
    if (info.id == id) return info.op;
  }
  unknown_op("list", id);
}

// Any container with std sequence semantics and bidirectional iterators.
// insert(value) goes through push_back (the "add" path); insert(end) is a
// positional insert at size().
template <class C>
class SequenceBench final : public Workbench {
 public:
  void populate(const Workload& w) override {
    c_ = C(w.elements.begin(), w.elements.end());
  }
  std::size_t size() const override { return c_.size(); }

  void execute(std::string_view op_id, const Workload& w) override {
    const ListOp op = parse_list_op(op_id);
    const std::size_t reps = w.picks.size();
    if (op == ListOp::kIterateIterator) {
      // One repetition advances the iterator by one element.
      visit_cyclic(c_, reps, [](Value v) { keep(v); });
      return;
    }
    for (std::size_t k = 0; k < reps; ++k) {
      switch (op) {
        case ListOp::kInsertStart: c_.insert(c_.begin(), w.fresh[k]); break;
        case ListOp::kInsertMiddle:
          c_.insert(at(mid(c_.size())), w.fresh[k]);
          break;
        case ListOp::kInsertEnd: c_.insert(c_.end(), w.fresh[k]); break;
        case ListOp::kInsertValue: c_.push_back(w.fresh[k]); break;
        case ListOp::kRemoveStart:
          if (!c_.empty()) c_.erase(c_.begin());
          break;
        case ListOp::kRemoveMiddle:
          if (!c_.empty()) c_.erase(at(mid(c_.size())));
          break;
        case ListOp::kRemoveEnd:
          if (!c_.empty()) c_.erase(std::prev(c_.end()));
          break;
        case ListOp::kRemoveValue: {
          auto it = std::find(c_.begin(), c_.end(), w.hits[k]);
          if (it != c_.end()) c_.erase(it);
          break;
        }
        case ListOp::kGetRandomIndex:
          if (!c_.empty()) keep(*at(w.picks[k] % c_.size()));
          break;
        case ListOp::kIterateRandom:
          if (!c_.empty()) keep(*at(k % c_.size()));
          break;
        case ListOp::kContainsValue:
          keep(std::find(c_.begin(), c_.end(), w.probes[k]) != c_.end());
          break;
        case ListOp::kIterateIterator: break;
      }
    }
  }

 private:
  typename C::iterator at(std::size_t index) {
    return std::next(c_.begin(),
                     static_cast<typename C::difference_type>(index));
  }

  C c_;
};

// std::forward_list has no size() and no reverse traversal; the adapter
// tracks size itself and reaches positions by walking from before_begin().
// It offers no random-index access.
class ForwardListBench final : public Workbench {
 public:
  void populate(const Workload& w) override {
    c_.assign(w.elements.begin(), w.elements.end());
    size_ = w.elements.size();
  }
  std::size_t size() const override { return size_; }

  void execute(std::string_view op_id, const Workload& w) override {
    const ListOp op = parse_list_op(op_id);
    if (op == ListOp::kGetRandomIndex || op == ListOp::kIterateRandom) {
      throw Error(ErrorCode::kInvalidConfig,
                  "std::forward_list has no random-index access");
    }
    const std::size_t reps = w.picks.size();
    auto cursor = c_.begin();
    for (std::size_t k = 0; k < reps; ++k) {
      switch (op) {
        case ListOp::kInsertStart: insert_at(0, w.fresh[k]); break;
        case ListOp::kInsertMiddle: insert_at(mid(size_), w.fresh[k]); break;
        case ListOp::kInsertEnd:
        case ListOp::kInsertValue: insert_at(size_, w.fresh[k]); break;
        case ListOp::kRemoveStart:
          if (size_ > 0) erase_at(0);
          break;
        case ListOp::kRemoveMiddle:
          if (size_ > 0) erase_at(mid(size_));
          break;
        case ListOp::kRemoveEnd:
          if (size_ > 0) erase_at(size_ - 1);
          break;
        case ListOp::kRemoveValue: {
          auto prev = c_.before_begin();
          for (auto it = c_.begin(); it != c_.end(); prev = it++) {
            if (*it == w.hits[k]) {
              c_.erase_after(prev);
              --size_;
              break;
            }
          }
          break;
        }
        case ListOp::kIterateIterator:
          if (size_ > 0) {
            if (cursor == c_.end()) cursor = c_.begin();
            keep(*cursor);
            ++cursor;
          }
          break;
        case ListOp::kContainsValue:
          keep(std::find(c_.begin(), c_.end(), w.probes[k]) != c_.end());
          break;
        case ListOp::kGetRandomIndex:
        case ListOp::kIterateRandom:
          break;
      }
    }
  }

 private:
  void insert_at(std::size_t index, Value v) {
    c_.insert_after(std::next(c_.before_begin(),
                              static_cast<std::ptrdiff_t>(index)),
                    v);
    ++size_;
  }
  void erase_at(std::size_t index) {
    c_.erase_after(
        std::next(c_.before_begin(), static_cast<std::ptrdiff_t>(index)));
    --size_;
  }

  std::forward_list<Value> c_;
  std::size_t size_ = 0;
};

// Indexed wrappers exposing insert_at/erase_at/at (sync_vector, cow_vector).
template <class C>
class IndexedBench final : public Workbench {
 public:
  void populate(const Workload& w) override {
    if constexpr (std::is_constructible_v<C, std::vector<Value>>) {
      c_ = std::make_unique<C>(w.elements);
    } else {
      c_ = std::make_unique<C>();
      c_->reserve(w.elements.size());
      for (Value v : w.elements) c_->push_back(v);
    }
  }
  std::size_t size() const override { return c_ ? c_->size() : 0; }

  void execute(std::string_view op_id, const Workload& w) override {
    const ListOp op = parse_list_op(op_id);
    const std::size_t reps = w.picks.size();
    if (op == ListOp::kIterateIterator) {
      iterate(reps);
      return;
    }
    for (std::size_t k = 0; k < reps; ++k) {
      const std::size_t n = c_->size();
      switch (op) {
        case ListOp::kInsertStart: c_->insert_at(0, w.fresh[k]); break;
        case ListOp::kInsertMiddle: c_->insert_at(mid(n), w.fresh[k]); break;
        case ListOp::kInsertEnd: c_->insert_at(n, w.fresh[k]); break;
        case ListOp::kInsertValue: c_->push_back(w.fresh[k]); break;
        case ListOp::kRemoveStart:
          if (n > 0) c_->erase_at(0);
          break;
        case ListOp::kRemoveMiddle:
          if (n > 0) c_->erase_at(mid(n));
          break;
        case ListOp::kRemoveEnd:
          if (n > 0) c_->erase_at(n - 1);
          break;
        case ListOp::kRemoveValue: c_->erase_value(w.hits[k]); break;
        case ListOp::kGetRandomIndex:
          if (n > 0) keep(c_->at(w.picks[k] % n));
          break;
        case ListOp::kIterateRandom:
          if (n > 0) keep(c_->at(k % n));
          break;
        case ListOp::kContainsValue: keep(c_->contains(w.probes[k])); break;
        case ListOp::kIterateIterator: break;
      }
    }
  }

 private:
  void iterate(std::size_t reps) {
    if constexpr (requires(const C& c) { c.visit(reps, keep); }) {
      c_->visit(reps, [](Value v) { keep(v); });
    } else {
      auto snap = c_->snapshot();
      visit_cyclic(*snap, reps, [](Value v) { keep(v); });
    }
  }

  std::unique_ptr<C> c_;
};

// ---------------------------------------------------------------- map

enum class MapOp { kPut, kGet, kRemove, kIterateEntries };

constexpr std::array<std::pair<std::string_view, MapOp>, 4> kMapOps{{
    {"put", MapOp::kPut},
    {"get", MapOp::kGet},
    {"remove", MapOp::kRemove},
    {"iteration(entries)", MapOp::kIterateEntries},
}};

MapOp parse_map_op(std::string_view id) {
  for (const auto& [name, op] : kMapOps) {
    if (name == id) return op;
  }
  unknown_op("map", id);
}

template <class M>
class MapBench final : public Workbench {
 public:
  void populate(const Workload& w) override {
    m_ = std::make_unique<M>();
    if constexpr (requires(M m) { m.reserve(std::size_t{1}); }) {
      m_->reserve(w.elements.size());
    }
    if constexpr (std::is_same_v<M, boost::container::flat_map<Value, Value>>) {
      std::vector<std::pair<Value, Value>> sorted;
      sorted.reserve(w.elements.size());
      for (Value v : w.elements) sorted.emplace_back(v, v);
      std::sort(sorted.begin(), sorted.end());
      m_ = std::make_unique<M>(boost::container::ordered_unique_range,
                               sorted.begin(), sorted.end());
    } else {
      for (Value v : w.elements) m_->insert_or_assign(v, v);
    }
  }
  std::size_t size() const override { return m_ ? m_->size() : 0; }

  void execute(std::string_view op_id, const Workload& w) override {
    const MapOp op = parse_map_op(op_id);
    const std::size_t reps = w.picks.size();
    switch (op) {
      case MapOp::kPut:
        for (std::size_t k = 0; k < reps; ++k) {
          m_->insert_or_assign(w.fresh[k], static_cast<Value>(k));
        }
        break;
      case MapOp::kGet:
        for (std::size_t k = 0; k < reps; ++k) {
          if constexpr (std::is_same_v<M, sync_map<Value, Value>>) {
            Value out = 0;
            keep(m_->get(w.hits[k], out) ? out : 0);
          } else {
            auto it = m_->find(w.hits[k]);
            keep(it != m_->end() ? it->second : 0);
          }
        }
        break;
      case MapOp::kRemove:
        for (std::size_t k = 0; k < reps; ++k) keep(m_->erase(w.hits[k]));
        break;
      case MapOp::kIterateEntries:
        if constexpr (std::is_same_v<M, sync_map<Value, Value>>) {
          m_->visit(reps, [](const auto& kv) { keep(kv.second); });
        } else {
          visit_cyclic(*m_, reps, [](const auto& kv) { keep(kv.second); });
        }
        break;
    }
  }

 private:
  std::unique_ptr<M> m_;
};

// ---------------------------------------------------------------- set

enum class SetOp { kAdd, kContains, kIterate };

constexpr std::array<std::pair<std::string_view, SetOp>, 3> kSetOps{{
    {"add", SetOp::kAdd},
    {"contains", SetOp::kContains},
    {"iteration", SetOp::kIterate},
}};

SetOp parse_set_op(std::string_view id) {
  for (const auto& [name, op] : kSetOps) {
    if (name == id) return op;
  }
  unknown_op("set", id);
}

template <class S>
class SetBench final : public Workbench {
 public:
  void populate(const Workload& w) override {
    s_ = std::make_unique<S>();
    if constexpr (std::is_same_v<S, boost::container::flat_set<Value>>) {
      std::vector<Value> sorted(w.elements);
      std::sort(sorted.begin(), sorted.end());
      s_ = std::make_unique<S>(boost::container::ordered_unique_range,
                               sorted.begin(), sorted.end());
    } else {
      if constexpr (requires(S s) { s.reserve(std::size_t{1}); }) {
        s_->reserve(w.elements.size());
      }
      for (Value v : w.elements) s_->insert(v);
    }
  }
  std::size_t size() const override { return s_ ? s_->size() : 0; }

  void execute(std::string_view op_id, const Workload& w) override {
    const SetOp op = parse_set_op(op_id);
    const std::size_t reps = w.picks.size();
    switch (op) {
      case SetOp::kAdd:
        for (std::size_t k = 0; k < reps; ++k) s_->insert(w.fresh[k]);
        break;
      case SetOp::kContains:
        for (std::size_t k = 0; k < reps; ++k) {
          if constexpr (std::is_same_v<S, sync_set<Value>>) {
            keep(s_->contains(w.probes[k]));
          } else {
            keep(s_->count(w.probes[k]) != 0);
          }
        }
        break;
      case SetOp::kIterate:
        if constexpr (std::is_same_v<S, sync_set<Value>>) {
          s_->visit(reps, [](Value v) { keep(v); });
        } else {
          visit_cyclic(*s_, reps, [](Value v) { keep(v); });
        }
        break;
    }
  }

 private:
  std::unique_ptr<S> s_;
};

template <class Bench>
WorkbenchFactory factory_of() {
  return [] { return std::make_unique<Bench>(); };
}

ImplementationDescriptor describe(std::string id, std::string kind,
                                  bool thread_safe, std::string_view source,
                                  WorkbenchFactory factory,
                                  std::set<std::string> unsupported = {}) {
  ImplementationDescriptor d;
  d.impl_id = std::move(id);
  d.api_kind = std::move(kind);
  d.thread_safe = thread_safe;
  d.source_label = std::string(source);
  d.unsupported_ops = std::move(unsupported);
  d.factory = std::move(factory);
  return d;
}

}  // namespace

ConstructGroup builtin_list_group() {
  ConstructGroup g;
  g.api_kind = "list";
  for (const auto& info : kListOps) {
    g.operations.push_back({std::string(info.id), "list", info.role});
  }
  g.implementations = {
      describe("std::vector", "list", false, kStd,
               factory_of<SequenceBench<std::vector<Value>>>()),
      describe("std::deque", "list", false, kStd,
               factory_of<SequenceBench<std::deque<Value>>>()),
      describe("std::list", "list", false, kStd,
               factory_of<SequenceBench<std::list<Value>>>()),
      describe("std::forward_list", "list", false, kStd,
               factory_of<ForwardListBench>(),
               {"get(random-index)", "iteration(random)"}),
      describe("boost::container::stable_vector", "list", false, kBoost,
               factory_of<SequenceBench<
                   boost::container::stable_vector<Value>>>()),
      describe("boost::container::small_vector", "list", false, kBoost,
               factory_of<SequenceBench<
                   boost::container::small_vector<Value, 16>>>()),
      describe("voltpick::sync_vector", "list", true, kOwn,
               factory_of<IndexedBench<sync_vector<Value>>>()),
      describe("voltpick::cow_vector", "list", true, kOwn,
               factory_of<IndexedBench<cow_vector<Value>>>()),
  };
  return g;
}

ConstructGroup builtin_map_group() {
  ConstructGroup g;
  g.api_kind = "map";
  g.operations = {
      {"put", "map", WorkloadRole::kBuild},
      {"get", "map", WorkloadRole::kQuery},
      {"remove", "map", WorkloadRole::kMutate},
      {"iteration(entries)", "map", WorkloadRole::kIterate},
  };
  g.implementations = {
      describe("std::map", "map", false, kStd,
               factory_of<MapBench<std::map<Value, Value>>>()),
      describe("std::unordered_map", "map", false, kStd,
               factory_of<MapBench<std::unordered_map<Value, Value>>>()),
      describe("boost::container::flat_map", "map", false, kBoost,
               factory_of<MapBench<boost::container::flat_map<Value, Value>>>()),
      describe("voltpick::linked_hash_map", "map", false, kOwn,
               factory_of<MapBench<linked_hash_map<Value, Value>>>()),
      describe("voltpick::sync_map", "map", true, kOwn,
               factory_of<MapBench<sync_map<Value, Value>>>()),
  };
  return g;
}

ConstructGroup builtin_set_group() {
  ConstructGroup g;
  g.api_kind = "set";
  g.operations = {
      {"add", "set", WorkloadRole::kBuild},
      {"contains", "set", WorkloadRole::kQuery},
      {"iteration", "set", WorkloadRole::kIterate},
  };
  g.implementations = {
      describe("std::set", "set", false, kStd,
               factory_of<SetBench<std::set<Value>>>()),
      describe("std::unordered_set", "set", false, kStd,
               factory_of<SetBench<std::unordered_set<Value>>>()),
      describe("boost::container::flat_set", "set", false, kBoost,
               factory_of<SetBench<boost::container::flat_set<Value>>>()),
      describe("voltpick::sync_set", "set", true, kOwn,
               factory_of<SetBench<sync_set<Value>>>()),
  };
  return g;
}

}  // namespace voltpick
