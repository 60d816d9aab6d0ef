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

#include "voltpick/patcher.hpp"

#include <algorithm>
#include <set>

#include "voltpick/error.hpp"
#include "voltpick/io.hpp"

namespace voltpick {

namespace {

// Column from "file:line:column".
std::size_t site_column(const std::string& site_id) {
  const auto colon = site_id.rfind(':');
  if (colon == std::string::npos || colon + 1 >= site_id.size()) {
    throw Error(ErrorCode::kStaleSite, "cannot parse site id " + site_id);
  }
  try {
    return std::stoul(site_id.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kStaleSite, "cannot parse site id " + site_id);
  }
}

void check_overlaps(const std::vector<Patch>& patches) {
  std::map<std::string, std::vector<const Patch*>> by_file;
  for (const auto& p : patches) by_file[p.file].push_back(&p);
  for (auto& [file, list] : by_file) {
    std::sort(list.begin(), list.end(), [](const Patch* a, const Patch* b) {
      return a->byte_offset < b->byte_offset;
    });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i]->byte_offset < list[i - 1]->byte_offset + list[i - 1]->byte_length ||
          list[i]->byte_offset == list[i - 1]->byte_offset) {
        throw Error(ErrorCode::kOverlapError,
                    file + ": patches for " + list[i - 1]->site_id + " and " +
                        list[i]->site_id + " overlap");
      }
    }
  }
}

const std::string& source_of(const SourceMap& sources, const std::string& file) {
  const auto it = sources.find(file);
  if (it == sources.end()) {
    throw Error(ErrorCode::kIoError, "no source text for " + file);
  }
  return it->second;
}

struct Lines {
  std::vector<std::string> text;  // without '\n'
  bool final_newline = true;
};

Lines split_lines(const std::string& s) {
  Lines out;
  std::size_t start = 0;
  while (start < s.size()) {
    const auto nl = s.find('\n', start);
    if (nl == std::string::npos) {
      out.text.push_back(s.substr(start));
      out.final_newline = false;
      break;
    }
    out.text.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::string range(std::size_t start, std::size_t count) {
  // GNU style: the count is omitted when it is 1.
  if (count == 0) return std::to_string(start - 1) + ",0";
  if (count == 1) return std::to_string(start);
  return std::to_string(start) + "," + std::to_string(count);
}

std::string file_diff(const std::string& file, const std::string& before,
                      const std::string& after) {
  constexpr std::size_t kContext = 3;
  const Lines a = split_lines(before);
  const Lines b = split_lines(after);
  // Patches never add or remove newlines, so the line structure matches.
  std::vector<std::size_t> changed;
  for (std::size_t i = 0; i < a.text.size(); ++i) {
    if (a.text[i] != b.text[i]) changed.push_back(i);
  }
  if (changed.empty()) return {};

  std::string out = "--- a/" + file + "\n+++ b/" + file + "\n";
  auto emit = [&](char tag, const Lines& lines, std::size_t i) {
    out += tag;
    out += lines.text[i];
    out += '\n';
    if (i + 1 == lines.text.size() && !lines.final_newline) {
      out += "\\ No newline at end of file\n";
    }
  };
  std::size_t k = 0;
  while (k < changed.size()) {
    std::size_t last = k;
    while (last + 1 < changed.size() &&
           changed[last + 1] - changed[last] <= 2 * kContext) {
      ++last;
    }
    const std::size_t first_line = changed[k] >= kContext ? changed[k] - kContext : 0;
    const std::size_t end_line =
        std::min(a.text.size(), changed[last] + kContext + 1);
    const std::size_t count = end_line - first_line;
    out += "@@ -" + range(first_line + 1, count) + " +" +
           range(first_line + 1, count) + " @@\n";
    for (std::size_t i = first_line; i < end_line;) {
      if (a.text[i] == b.text[i]) {
        emit(' ', a, i++);
        continue;
      }
      std::size_t j = i;
      while (j < end_line && a.text[j] != b.text[j]) ++j;
      for (std::size_t x = i; x < j; ++x) emit('-', a, x);
      for (std::size_t x = i; x < j; ++x) emit('+', b, x);
      i = j;
    }
    k = last + 1;
  }
  return out;
}

}  // namespace

SourceMap read_sources(const RecommendationSet& recs) {
  SourceMap sources;
  for (const auto& r : recs.recommendations) {
    if (!r.changed() || sources.count(r.file) != 0) continue;
    sources.emplace(r.file, read_file(r.file));
  }
  return sources;
}

std::vector<Patch> plan_patches(const RecommendationSet& recs,
                                const SourceMap& sources,
                                const LanguageProfile& lang,
                                const Registry& registry) {
  const Scanner scanner(lang, registry);
  std::map<std::string, std::vector<ConstructionSite>> sites_by_file;
  std::vector<Patch> patches;
  for (const auto& r : recs.recommendations) {
    if (!r.changed()) continue;
    const auto tmpl = lang.substitution_template.find(r.recommended_impl);
    if (tmpl == lang.substitution_template.end()) {
      throw Error(ErrorCode::kTemplateMissing,
                  lang.lang_id + " has no substitution for " + r.recommended_impl);
    }
    const std::string& text = source_of(sources, r.file);
    auto it = sites_by_file.find(r.file);
    if (it == sites_by_file.end()) {
      try {
        it = sites_by_file.emplace(r.file, scanner.construction_sites(text)).first;
      } catch (const Error& e) {
        throw Error(ErrorCode::kStaleSite, r.file + ": " + e.what());
      }
    }
    const std::size_t column = site_column(r.site_id);
    const auto site =
        std::find_if(it->second.begin(), it->second.end(),
                     [&](const ConstructionSite& s) {
                       return s.line == r.line && s.column == column;
                     });
    if (site == it->second.end() || site->impl_id != r.current_impl) {
      throw Error(ErrorCode::kStaleSite,
                  r.site_id + ": no " + r.current_impl +
                      " construction at this position in the current source");
    }
    Patch p;
    p.file = r.file;
    p.line = r.line;
    p.byte_offset = site->byte_offset;
    p.byte_length = site->byte_length;
    p.original_text = text.substr(site->byte_offset, site->byte_length);
    p.replacement_text = tmpl->second;
    p.site_id = r.site_id;
    patches.push_back(std::move(p));
  }
  std::sort(patches.begin(), patches.end(), [](const Patch& a, const Patch& b) {
    return std::tie(a.file, a.byte_offset) < std::tie(b.file, b.byte_offset);
  });
  return patches;
}

SourceMap patched_sources(const std::vector<Patch>& patches,
                          const SourceMap& sources) {
  check_overlaps(patches);
  std::map<std::string, std::vector<const Patch*>> by_file;
  for (const auto& p : patches) by_file[p.file].push_back(&p);
  SourceMap out;
  for (auto& [file, list] : by_file) {
    const std::string& text = source_of(sources, file);
    std::sort(list.begin(), list.end(), [](const Patch* a, const Patch* b) {
      return a->byte_offset > b->byte_offset;
    });
    std::string result = text;
    for (const Patch* p : list) {
      if (p->byte_offset + p->byte_length > text.size() ||
          text.compare(p->byte_offset, p->byte_length, p->original_text) != 0) {
        throw Error(ErrorCode::kStaleSite,
                    p->site_id + ": source no longer matches the patch");
      }
      if (p->replacement_text.find('\n') != std::string::npos) {
        throw Error(ErrorCode::kTemplateMissing,
                    p->site_id + ": replacement text spans lines");
      }
      result.replace(p->byte_offset, p->byte_length, p->replacement_text);
    }
    out.emplace(file, std::move(result));
  }
  return out;
}

std::string render_diff(const std::vector<Patch>& patches,
                        const SourceMap& sources) {
  std::string out;
  for (const auto& [file, text] : patched_sources(patches, sources)) {
    out += file_diff(file, source_of(sources, file), text);
  }
  return out;
}

std::string apply_patches(const std::vector<Patch>& patches,
                          const SourceMap& sources, ApplyMode mode) {
  const SourceMap patched = patched_sources(patches, sources);
  std::string diff;
  for (const auto& [file, text] : patched) {
    diff += file_diff(file, source_of(sources, file), text);
  }
  if (mode == ApplyMode::kInPlace) {
    std::vector<std::pair<std::filesystem::path, std::string>> writes;
    for (const auto& [file, text] : patched) writes.emplace_back(file, text);
    write_files_atomic(writes);
  }
  return diff;
}

}  // namespace voltpick
