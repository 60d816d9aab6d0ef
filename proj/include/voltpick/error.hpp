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

#ifndef VOLTPICK_ERROR_HPP_
#define VOLTPICK_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace voltpick {

enum class ErrorCode {
  // energy-meter
  kBackendUnavailable,
  kInvalidConfig,
  kReadFailure,
  kTokenReuse,
  // bench-harness
  kMeterFailure,
  kNotMeasured,
  kEmptyGroup,
  kConcurrentMeasurement,
  // profile-store
  kUnknownImplementation,
  kApiKindMismatch,
  kUnknownApiKind,
  kSchemaVersionMismatch,
  kMalformedProfile,
  kProfileMismatch,
  // usage-analyzer
  kDecodeError,
  kPatternError,
  kIoError,
  kMalformedReport,
  kUnknownIdentifier,
  // recommender
  kNoCandidates,
  kApiCoverageError,
  // patcher
  kStaleSite,
  kTemplateMissing,
  kOverlapError,
};

std::string_view to_string(ErrorCode code);

// Environment errors (missing hardware, unreadable files) map to exit code 2
// in the CLI; everything else is a user/config error.
bool is_environment_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace voltpick

#endif  // VOLTPICK_ERROR_HPP_
