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

#include "voltpick/error.hpp"

namespace voltpick {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kReadFailure: return "ReadFailure";
    case ErrorCode::kTokenReuse: return "TokenReuse";
    case ErrorCode::kMeterFailure: return "MeterFailure";
    case ErrorCode::kNotMeasured: return "NotMeasured";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kConcurrentMeasurement: return "ConcurrentMeasurement";
    case ErrorCode::kUnknownImplementation: return "UnknownImplementation";
    case ErrorCode::kApiKindMismatch: return "ApiKindMismatch";
    case ErrorCode::kUnknownApiKind: return "UnknownApiKind";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kMalformedProfile: return "MalformedProfile";
    case ErrorCode::kProfileMismatch: return "ProfileMismatch";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kPatternError: return "PatternError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedReport: return "MalformedReport";
    case ErrorCode::kUnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::kNoCandidates: return "NoCandidates";
    case ErrorCode::kApiCoverageError: return "ApiCoverageError";
    case ErrorCode::kStaleSite: return "StaleSite";
    case ErrorCode::kTemplateMissing: return "TemplateMissing";
    case ErrorCode::kOverlapError: return "OverlapError";
  }
  return "Unknown";
}

bool is_environment_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBackendUnavailable:
    case ErrorCode::kReadFailure:
    case ErrorCode::kMeterFailure:
    case ErrorCode::kIoError:
      return true;
    default:
      return false;
  }
}

}  // namespace voltpick
