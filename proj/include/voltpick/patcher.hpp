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

#ifndef VOLTPICK_PATCHER_HPP_
#define VOLTPICK_PATCHER_HPP_

#include <map>
#include <string>
#include <vector>

#include "voltpick/groups.hpp"
#include "voltpick/recommender.hpp"
#include "voltpick/usage.hpp"

namespace voltpick {

struct Patch {
  std::string file;
  std::size_t line = 0;
  std::size_t byte_offset = 0;
  std::size_t byte_length = 0;
  std::string original_text;
  std::string replacement_text;
  std::string site_id;
  bool operator==(const Patch&) const = default;
};

// file -> contents, keyed by the file names recorded in the sites.
using SourceMap = std::map<std::string, std::string>;

// Reads every file named by a changed recommendation. Throws Error(kIoError).
SourceMap read_sources(const RecommendationSet& recs);

// One patch per changed recommendation, sorted by (file, offset). Throws
// Error(kStaleSite) when a site no longer matches the source and
// Error(kTemplateMissing) when the language cannot spell the replacement.
std::vector<Patch> plan_patches(const RecommendationSet& recs,
                                const SourceMap& sources,
                                const LanguageProfile& lang,
                                const Registry& registry = builtin_registry());

// Unified diff of the patched sources against the originals. Throws
// Error(kOverlapError).
std::string render_diff(const std::vector<Patch>& patches,
                        const SourceMap& sources);

// Patched contents per touched file. Throws Error(kOverlapError).
SourceMap patched_sources(const std::vector<Patch>& patches,
                          const SourceMap& sources);

enum class ApplyMode { kDryRun, kInPlace };

// Returns the unified diff. kInPlace also rewrites every touched file
// atomically; no file is replaced unless all temporaries were written.
std::string apply_patches(const std::vector<Patch>& patches,
                          const SourceMap& sources, ApplyMode mode);

}  // namespace voltpick

#endif  // VOLTPICK_PATCHER_HPP_
