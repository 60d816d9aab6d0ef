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

// Containers that round out the benchmark pool: synchronized and
// copy-on-write sequences, an insertion-ordered hash map, and synchronized
// associative containers. Interfaces follow the std containers they wrap so
// the patcher can swap construction tokens without touching call sites.

#ifndef VOLTPICK_CONTAINERS_HPP_
#define VOLTPICK_CONTAINERS_HPP_

#include <cstddef>
#include <iterator>
#include <list>
#include <memory>
#include <mutex>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

namespace voltpick {

// Visits `count` elements of `c` in iteration order, restarting at begin()
// whenever the end is reached. Does nothing for an empty container.
template <class Container, class Fn>
void visit_cyclic(const Container& c, std::size_t count, Fn&& fn) {
  if (c.begin() == c.end()) return;
  auto it = c.begin();
  for (std::size_t i = 0; i < count; ++i) {
    if (it == c.end()) it = c.begin();
    fn(*it);
    ++it;
  }
}

// std::vector guarded by a mutex. Every member call locks.
template <class T>
class sync_vector {
 public:
  using value_type = T;

  sync_vector() = default;
  sync_vector(const sync_vector& other) : data_(other.snapshot()) {}

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return data_.size();
  }
  void push_back(T value) {
    std::lock_guard lock(mu_);
    data_.push_back(std::move(value));
  }
  void insert_at(std::size_t index, T value) {
    std::lock_guard lock(mu_);
    data_.insert(data_.begin() + static_cast<std::ptrdiff_t>(index),
                 std::move(value));
  }
  void erase_at(std::size_t index) {
    std::lock_guard lock(mu_);
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(index));
  }
  bool erase_value(const T& value) {
    std::lock_guard lock(mu_);
    for (auto it = data_.begin(); it != data_.end(); ++it) {
      if (*it == value) {
        data_.erase(it);
        return true;
      }
    }
    return false;
  }
  T at(std::size_t index) const {
    std::lock_guard lock(mu_);
    return data_.at(index);
  }
  bool contains(const T& value) const {
    std::lock_guard lock(mu_);
    for (const auto& v : data_) {
      if (v == value) return true;
    }
    return false;
  }
  void reserve(std::size_t n) {
    std::lock_guard lock(mu_);
    data_.reserve(n);
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    std::lock_guard lock(mu_);
    for (const auto& v : data_) fn(v);
  }
  // Visits `count` elements in order under one lock, wrapping at the end.
  template <class Fn>
  void visit(std::size_t count, Fn&& fn) const {
    std::lock_guard lock(mu_);
    visit_cyclic(data_, count, fn);
  }
  std::vector<T> snapshot() const {
    std::lock_guard lock(mu_);
    return data_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<T> data_;
};

// Copy-on-write sequence: readers share an immutable snapshot, every
// mutation copies the whole array under a writer lock.
template <class T>
class cow_vector {
 public:
  using value_type = T;

  cow_vector() : data_(std::make_shared<const std::vector<T>>()) {}
  explicit cow_vector(std::vector<T> init)
      : data_(std::make_shared<const std::vector<T>>(std::move(init))) {}

  std::shared_ptr<const std::vector<T>> snapshot() const {
    std::lock_guard lock(mu_);
    return data_;
  }
  std::size_t size() const { return snapshot()->size(); }
  T at(std::size_t index) const { return snapshot()->at(index); }
  bool contains(const T& value) const {
    auto snap = snapshot();
    for (const auto& v : *snap) {
      if (v == value) return true;
    }
    return false;
  }

  void push_back(T value) {
    mutate([&](std::vector<T>& v) { v.push_back(std::move(value)); });
  }
  void insert_at(std::size_t index, T value) {
    mutate([&](std::vector<T>& v) {
      v.insert(v.begin() + static_cast<std::ptrdiff_t>(index),
               std::move(value));
    });
  }
  void erase_at(std::size_t index) {
    mutate([&](std::vector<T>& v) {
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(index));
    });
  }
  bool erase_value(const T& value) {
    bool erased = false;
    mutate([&](std::vector<T>& v) {
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (*it == value) {
          v.erase(it);
          erased = true;
          return;
        }
      }
    });
    return erased;
  }

 private:
  template <class Fn>
  void mutate(Fn&& fn) {
    std::lock_guard lock(mu_);
    auto copy = std::make_shared<std::vector<T>>(*data_);
    fn(*copy);
    data_ = std::move(copy);
  }

  mutable std::mutex mu_;
  std::shared_ptr<const std::vector<T>> data_;
};

// Hash map that iterates in insertion order.
template <class K, class V>
class linked_hash_map {
 public:
  using value_type = std::pair<const K, V>;
  using iterator = typename std::list<value_type>::iterator;
  using const_iterator = typename std::list<value_type>::const_iterator;

  std::size_t size() const { return index_.size(); }
  bool empty() const { return index_.empty(); }
  void reserve(std::size_t n) { index_.reserve(n); }

  // Inserts or assigns; re-assignment keeps the original position.
  void insert_or_assign(const K& key, V value) {
    if (auto it = index_.find(key); it != index_.end()) {
      it->second->second = std::move(value);
      return;
    }
    order_.emplace_back(key, std::move(value));
    index_.emplace(key, std::prev(order_.end()));
  }
  const_iterator find(const K& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? order_.end() : const_iterator(it->second);
  }
  std::size_t erase(const K& key) {
    auto it = index_.find(key);
    if (it == index_.end()) return 0;
    order_.erase(it->second);
    index_.erase(it);
    return 1;
  }
  iterator begin() { return order_.begin(); }
  iterator end() { return order_.end(); }
  const_iterator begin() const { return order_.begin(); }
  const_iterator end() const { return order_.end(); }

 private:
  std::list<value_type> order_;
  std::unordered_map<K, iterator> index_;
};

// std::unordered_map guarded by a mutex.
template <class K, class V>
class sync_map {
 public:
  std::size_t size() const {
    std::lock_guard lock(mu_);
    return data_.size();
  }
  void reserve(std::size_t n) {
    std::lock_guard lock(mu_);
    data_.reserve(n);
  }
  void insert_or_assign(const K& key, V value) {
    std::lock_guard lock(mu_);
    data_.insert_or_assign(key, std::move(value));
  }
  bool get(const K& key, V& out) const {
    std::lock_guard lock(mu_);
    auto it = data_.find(key);
    if (it == data_.end()) return false;
    out = it->second;
    return true;
  }
  std::size_t erase(const K& key) {
    std::lock_guard lock(mu_);
    return data_.erase(key);
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    std::lock_guard lock(mu_);
    for (const auto& kv : data_) fn(kv);
  }
  template <class Fn>
  void visit(std::size_t count, Fn&& fn) const {
    std::lock_guard lock(mu_);
    visit_cyclic(data_, count, fn);
  }

 private:
  mutable std::mutex mu_;
  std::unordered_map<K, V> data_;
};

// std::set guarded by a mutex.
template <class T>
class sync_set {
 public:
  std::size_t size() const {
    std::lock_guard lock(mu_);
    return data_.size();
  }
  bool insert(const T& value) {
    std::lock_guard lock(mu_);
    return data_.insert(value).second;
  }
  bool contains(const T& value) const {
    std::lock_guard lock(mu_);
    return data_.count(value) != 0;
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    std::lock_guard lock(mu_);
    for (const auto& v : data_) fn(v);
  }
  template <class Fn>
  void visit(std::size_t count, Fn&& fn) const {
    std::lock_guard lock(mu_);
    visit_cyclic(data_, count, fn);
  }

 private:
  mutable std::mutex mu_;
  std::set<T> data_;
};

}  // namespace voltpick

#endif  // VOLTPICK_CONTAINERS_HPP_
