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

// Static usage collection: finds construction sites of known
// implementations in source text and counts the operations invoked on them.
//
// The analysis is lexical. Comments and string literals are masked first;
// construction sites come from declaration patterns; each declared
// identifier binds within its enclosing lexical scope (flow-insensitive,
// innermost declaration wins); each method call on a bound identifier whose
// method maps to an operation adds L^d to that operation's weighted count,
// where d is the loop nesting depth at the call. Aliasing, returns and
// cross-function flow are not tracked.

#ifndef VOLTPICK_USAGE_HPP_
#define VOLTPICK_USAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "voltpick/groups.hpp"

namespace voltpick {

struct CommentSyntax {
  std::vector<std::string> line;
  std::vector<std::pair<std::string, std::string>> block;
  bool operator==(const CommentSyntax&) const = default;
};

struct LanguageProfile {
  std::string lang_id;
  // Files picked up when a directory is analyzed (".ml", ".cpp", ...).
  std::vector<std::string> file_extensions;
  CommentSyntax comment_syntax;
  // Each character opens and closes a string literal.
  std::string string_delimiters = "\"";
  char escape_char = '\\';
  // ECMAScript regexes containing the placeholders @ID@ (declared
  // identifier) and @CTOR@ (constructor token). Use non-capturing groups
  // for anything else.
  std::vector<std::string> declaration_patterns;
  // Constructor token -> impl_id.
  std::map<std::string, std::string> constructors;
  // Group 1 is the receiver identifier, group 2 the method token.
  std::string call_pattern;
  // A receiver preceded by one of these is a member access, not a local.
  std::vector<std::string> receiver_reject_prefixes;
  // api_kind -> method token -> op_id.
  std::map<std::string, std::map<std::string, std::string>> method_map;
  std::vector<std::string> scope_open_tokens;
  std::vector<std::string> scope_close_tokens;
  // The next scope opened after one of these is a loop body.
  std::vector<std::string> loop_open_tokens;
  // Outside parentheses, these cancel a pending loop (e.g. ";").
  std::vector<std::string> loop_cancel_tokens;
  // impl_id -> constructor token text written by the patcher.
  std::map<std::string, std::string> substitution_template;

  // Throws Error(kUnknownIdentifier) for identifiers absent from the
  // registry and Error(kPatternError) for unusable patterns.
  void validate(const Registry& registry) const;
  bool operator==(const LanguageProfile&) const = default;
};

// "minilang" (do/end blocks, used by the test fixtures) and "c-like"
// (brace syntax with C++ container declarations).
const LanguageProfile& builtin_language(std::string_view lang_id);
std::vector<std::string> builtin_language_ids();
nlohmann::json language_to_json(const LanguageProfile& lang);
LanguageProfile language_from_json(const nlohmann::json& doc);
// A built-in id, or a path to a JSON language profile.
LanguageProfile resolve_language(std::string_view id_or_path);

struct UsageSite {
  std::string site_id;  // file:line:column of the constructor token
  std::string file;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string variable;
  std::string current_impl;
  std::string api_kind;
  std::map<std::string, double> op_counts;
  std::map<std::string, std::uint64_t> raw_counts;
  std::size_t max_loop_depth = 0;

  bool operator==(const UsageSite&) const = default;
};

inline constexpr int kUsageSchemaVersion = 1;

struct UsageReport {
  int schema_version = kUsageSchemaVersion;
  std::string corpus_label;
  std::string lang_id;
  double loop_weight = 1.0;
  std::vector<UsageSite> sites;
  std::vector<std::string> diagnostics;

  bool operator==(const UsageReport&) const = default;
};

// A construction site as located in source, with the byte range of its
// constructor token.
struct ConstructionSite {
  std::string impl_id;
  std::string api_kind;
  std::string variable;
  std::size_t byte_offset = 0;
  std::size_t byte_length = 0;
  std::size_t line = 0;
  std::size_t column = 0;
};

// A language profile compiled against a registry. Scanning is pure.
class Scanner {
 public:
  Scanner(const LanguageProfile& lang, const Registry& registry);
  ~Scanner();
  Scanner(Scanner&&) noexcept;

  const LanguageProfile& language() const { return lang_; }

  // Throws Error(kDecodeError) when the text is not UTF-8.
  std::vector<UsageSite> scan(std::string_view source_text,
                              std::string_view file_label,
                              double loop_weight) const;
  std::vector<ConstructionSite> construction_sites(
      std::string_view source_text) const;

 private:
  struct Compiled;
  LanguageProfile lang_;
  const Registry* registry_;
  std::unique_ptr<Compiled> compiled_;
};

// Comments and string literals replaced by spaces; newlines and byte
// offsets preserved.
std::string mask_source(std::string_view text, const LanguageProfile& lang);

std::vector<UsageSite> scan_file(std::string_view source_text,
                                 const LanguageProfile& lang,
                                 std::string_view file_label = "<input>",
                                 double loop_weight = 1.0,
                                 const Registry& registry = builtin_registry());

// Scans files (directories are walked for the language's extensions) in
// sorted path order. Unreadable or undecodable files are recorded in
// diagnostics and skipped.
UsageReport analyze_corpus(const std::vector<std::filesystem::path>& paths,
                           const LanguageProfile& lang, double loop_weight,
                           std::string corpus_label = {},
                           const Registry& registry = builtin_registry());

nlohmann::json usage_report_to_json(const UsageReport& report);
// Throws Error(kMalformedReport) or Error(kUnknownIdentifier).
UsageReport usage_report_from_json(const nlohmann::json& doc,
                                   const Registry& registry = builtin_registry());
std::string serialize_usage_report(const UsageReport& report);
void save_usage_report(const UsageReport& report,
                       const std::filesystem::path& path);
UsageReport load_usage_report(const std::filesystem::path& path,
                              const Registry& registry = builtin_registry());

}  // namespace voltpick

#endif  // VOLTPICK_USAGE_HPP_
