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

// Line-oriented JSON event records (one object per line).

#ifndef VOLTPICK_EVENT_LOG_HPP_
#define VOLTPICK_EVENT_LOG_HPP_

#include <iosfwd>
#include "json.hpp"

namespace voltpick {

class EventLog {
 public:
  // Discards everything.
  EventLog() = default;
  explicit EventLog(std::ostream* out) : out_(out) {}

  void emit(const nlohmann::json& record) const;
  bool enabled() const { return out_ != nullptr; }

 private:
  std::ostream* out_ = nullptr;
};

}  // namespace voltpick

#endif  // VOLTPICK_EVENT_LOG_HPP_
