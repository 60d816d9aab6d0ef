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

// Built-in language profiles and their JSON form.

#include <filesystem>
#include <regex>
#include <set>

#include "voltpick/error.hpp"
#include "voltpick/io.hpp"
#include "voltpick/usage.hpp"

namespace voltpick {

using nlohmann::json;

namespace {

LanguageProfile make_minilang() {
  LanguageProfile l;
  l.lang_id = "minilang";
  l.file_extensions = {".ml"};
  l.comment_syntax.line = {"#"};
  l.comment_syntax.block = {{"(*", "*)"}};
  l.string_delimiters = "\"";
  l.declaration_patterns = {R"(\b(?:let|var)\s+@ID@\s*=\s*new\s+@CTOR@\b)"};
  l.constructors = {
      {"Vector", "std::vector"},
      {"Deque", "std::deque"},
      {"LinkedList", "std::list"},
      {"ForwardList", "std::forward_list"},
      {"StableVector", "boost::container::stable_vector"},
      {"SmallVector", "boost::container::small_vector"},
      {"SyncVector", "voltpick::sync_vector"},
      {"CowVector", "voltpick::cow_vector"},
      {"TreeMap", "std::map"},
      {"HashMap", "std::unordered_map"},
      {"FlatMap", "boost::container::flat_map"},
      {"LinkedHashMap", "voltpick::linked_hash_map"},
      {"SyncMap", "voltpick::sync_map"},
      {"TreeSet", "std::set"},
      {"HashSet", "std::unordered_set"},
      {"FlatSet", "boost::container::flat_set"},
      {"SyncSet", "voltpick::sync_set"},
  };
  l.call_pattern =
      R"(\b([A-Za-z_][A-Za-z0-9_]*)\s*\.\s*([A-Za-z_][A-Za-z0-9_]*)\s*\()";
  l.receiver_reject_prefixes = {"."};
  l.method_map = {
      {"list",
       {{"prepend", "insert(start)"},
        {"insert_mid", "insert(middle)"},
        {"append", "insert(end)"},
        {"add", "insert(value)"},
        {"shift", "remove(start)"},
        {"remove_mid", "remove(middle)"},
        {"pop", "remove(end)"},
        {"remove", "remove(value)"},
        {"get", "get(random-index)"},
        {"each", "iteration(iterator)"},
        {"walk", "iteration(random)"},
        {"contains", "contains(value)"}}},
      {"map",
       {{"put", "put"},
        {"get", "get"},
        {"remove", "remove"},
        {"entries", "iteration(entries)"}}},
      {"set", {{"add", "add"}, {"contains", "contains"}, {"each", "iteration"}}},
  };
  l.scope_open_tokens = {"do", "then"};
  l.scope_close_tokens = {"end"};
  l.loop_open_tokens = {"for", "while"};
  for (const auto& [token, impl] : l.constructors) {
    l.substitution_template[impl] = token;
  }
  return l;
}

LanguageProfile make_c_like() {
  LanguageProfile l;
  l.lang_id = "c-like";
  l.file_extensions = {".c", ".cc", ".cpp", ".cxx", ".h", ".hh", ".hpp"};
  l.comment_syntax.line = {"//"};
  l.comment_syntax.block = {{"/*", "*/"}};
  l.string_delimiters = "\"'";
  // `T<...> name;`, `T<...> name = ...`, `T<...> name{...}` and
  // `auto name = T...`. Parenthesized direct-initialization is not
  // recognized: it is lexically indistinguishable from a function
  // declaration.
  l.declaration_patterns = {
      R"(@CTOR@(?![A-Za-z0-9_:])\s*<[^;{}()=]*>\s+@ID@\s*[;={])",
      R"(\bauto\s+@ID@\s*=\s*@CTOR@(?![A-Za-z0-9_:]))",
  };
  for (const char* impl :
       {"std::vector", "std::deque", "std::list", "std::forward_list",
        "boost::container::stable_vector", "boost::container::small_vector",
        "voltpick::sync_vector", "voltpick::cow_vector", "std::map",
        "std::unordered_map", "boost::container::flat_map",
        "voltpick::linked_hash_map", "voltpick::sync_map", "std::set",
        "std::unordered_set", "boost::container::flat_set",
        "voltpick::sync_set"}) {
    l.constructors[impl] = impl;
    l.substitution_template[impl] = impl;
  }
  l.call_pattern =
      R"(\b([A-Za-z_][A-Za-z0-9_]*)\s*(?:\.|->)\s*([A-Za-z_][A-Za-z0-9_]*)\s*\()";
  l.receiver_reject_prefixes = {".", "->", "::"};
  l.method_map = {
      {"list",
       {{"push_front", "insert(start)"},
        {"emplace_front", "insert(start)"},
        {"insert", "insert(middle)"},
        {"emplace", "insert(middle)"},
        {"insert_at", "insert(middle)"},
        {"push_back", "insert(value)"},
        {"emplace_back", "insert(value)"},
        {"pop_front", "remove(start)"},
        {"erase", "remove(middle)"},
        {"erase_at", "remove(middle)"},
        {"pop_back", "remove(end)"},
        {"remove", "remove(value)"},
        {"erase_value", "remove(value)"},
        {"at", "get(random-index)"},
        {"begin", "iteration(iterator)"},
        {"cbegin", "iteration(iterator)"},
        {"for_each", "iteration(iterator)"},
        {"contains", "contains(value)"}}},
      {"map",
       {{"insert", "put"},
        {"emplace", "put"},
        {"insert_or_assign", "put"},
        {"try_emplace", "put"},
        {"find", "get"},
        {"at", "get"},
        {"count", "get"},
        {"contains", "get"},
        {"get", "get"},
        {"erase", "remove"},
        {"begin", "iteration(entries)"},
        {"cbegin", "iteration(entries)"},
        {"for_each", "iteration(entries)"}}},
      {"set",
       {{"insert", "add"},
        {"emplace", "add"},
        {"find", "contains"},
        {"count", "contains"},
        {"contains", "contains"},
        {"begin", "iteration"},
        {"cbegin", "iteration"},
        {"for_each", "iteration"}}},
  };
  l.scope_open_tokens = {"{"};
  l.scope_close_tokens = {"}"};
  l.loop_open_tokens = {"for", "while", "do"};
  l.loop_cancel_tokens = {";"};
  return l;
}

std::size_t count_occurrences(const std::string& text, std::string_view what) {
  std::size_t n = 0;
  for (auto pos = text.find(what); pos != std::string::npos;
       pos = text.find(what, pos + what.size())) {
    ++n;
  }
  return n;
}

[[noreturn]] void bad_language(const std::string& what) {
  throw Error(ErrorCode::kPatternError, "language profile: " + what);
}

template <class T>
T field(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    bad_language(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

void LanguageProfile::validate(const Registry& registry) const {
  if (lang_id.empty()) bad_language("empty lang_id");
  for (const auto& [token, impl] : constructors) {
    if (token.empty()) bad_language("empty constructor token");
    if (registry.find_implementation(impl) == nullptr) {
      throw Error(ErrorCode::kUnknownIdentifier,
                  lang_id + ": constructor '" + token +
                      "' names unknown implementation '" + impl + "'");
    }
  }
  for (const auto& [kind, methods] : method_map) {
    if (!registry.has_api_kind(kind)) {
      throw Error(ErrorCode::kUnknownIdentifier,
                  lang_id + ": method_map names unknown api_kind '" + kind +
                      "'");
    }
    for (const auto& [method, op] : methods) {
      if (!registry.has_operation(kind, op)) {
        throw Error(ErrorCode::kUnknownIdentifier,
                    lang_id + ": method '" + method + "' maps to unknown " +
                        kind + " operation '" + op + "'");
      }
    }
  }
  for (const auto& [impl, token] : substitution_template) {
    if (registry.find_implementation(impl) == nullptr) {
      throw Error(ErrorCode::kUnknownIdentifier,
                  lang_id + ": substitution for unknown implementation '" +
                      impl + "'");
    }
    if (token.empty()) bad_language("empty substitution for " + impl);
  }
  if (declaration_patterns.empty()) bad_language("no declaration patterns");
  for (const auto& p : declaration_patterns) {
    if (count_occurrences(p, "@ID@") != 1 ||
        count_occurrences(p, "@CTOR@") != 1) {
      bad_language("declaration pattern needs exactly one @ID@ and @CTOR@: " +
                   p);
    }
  }
  try {
    std::regex re(call_pattern, std::regex::ECMAScript);
    if (re.mark_count() < 2) bad_language("call_pattern needs two groups");
  } catch (const std::regex_error& e) {
    bad_language("call_pattern: " + std::string(e.what()));
  }
  if (scope_open_tokens.empty() || scope_close_tokens.empty()) {
    bad_language("scope tokens missing");
  }
  for (const auto& [open, close] : comment_syntax.block) {
    if (open.empty() || close.empty()) bad_language("empty block comment");
  }
  for (const auto& l : comment_syntax.line) {
    if (l.empty()) bad_language("empty line comment");
  }
}

const LanguageProfile& builtin_language(std::string_view lang_id) {
  static const LanguageProfile minilang = make_minilang();
  static const LanguageProfile c_like = make_c_like();
  if (lang_id == minilang.lang_id) return minilang;
  if (lang_id == c_like.lang_id) return c_like;
  throw Error(ErrorCode::kUnknownIdentifier,
              "unknown language '" + std::string(lang_id) + "'");
}

std::vector<std::string> builtin_language_ids() { return {"c-like", "minilang"}; }

json language_to_json(const LanguageProfile& l) {
  json block = json::array();
  for (const auto& [open, close] : l.comment_syntax.block) {
    block.push_back({open, close});
  }
  return {{"lang_id", l.lang_id},
          {"file_extensions", l.file_extensions},
          {"comment_syntax", {{"line", l.comment_syntax.line}, {"block", block}}},
          {"string_delimiters", l.string_delimiters},
          {"escape_char", std::string(1, l.escape_char)},
          {"declaration_patterns", l.declaration_patterns},
          {"constructors", l.constructors},
          {"call_pattern", l.call_pattern},
          {"receiver_reject_prefixes", l.receiver_reject_prefixes},
          {"method_map", l.method_map},
          {"scope_open_tokens", l.scope_open_tokens},
          {"scope_close_tokens", l.scope_close_tokens},
          {"loop_open_tokens", l.loop_open_tokens},
          {"loop_cancel_tokens", l.loop_cancel_tokens},
          {"substitution_template", l.substitution_template}};
}

LanguageProfile language_from_json(const json& doc) {
  if (!doc.is_object()) bad_language("not a JSON object");
  using Strings = std::vector<std::string>;
  using StringMap = std::map<std::string, std::string>;
  LanguageProfile l;
  l.lang_id = field<std::string>(doc, "lang_id", "");
  l.file_extensions = field<Strings>(doc, "file_extensions", {});
  if (doc.contains("comment_syntax")) {
    const auto& cs = doc.at("comment_syntax");
    l.comment_syntax.line = field<Strings>(cs, "line", {});
    for (const auto& pair : field<std::vector<Strings>>(cs, "block", {})) {
      if (pair.size() != 2) bad_language("block comment needs [open, close]");
      l.comment_syntax.block.emplace_back(pair[0], pair[1]);
    }
  }
  l.string_delimiters = field<std::string>(doc, "string_delimiters", "\"");
  const auto escape = field<std::string>(doc, "escape_char", "\\");
  if (escape.size() != 1) bad_language("escape_char must be one character");
  l.escape_char = escape[0];
  l.declaration_patterns = field<Strings>(doc, "declaration_patterns", {});
  l.constructors = field<StringMap>(doc, "constructors", {});
  l.call_pattern = field<std::string>(doc, "call_pattern", "");
  l.receiver_reject_prefixes =
      field<Strings>(doc, "receiver_reject_prefixes", {});
  l.method_map =
      field<std::map<std::string, StringMap>>(doc, "method_map", {});
  l.scope_open_tokens = field<Strings>(doc, "scope_open_tokens", {});
  l.scope_close_tokens = field<Strings>(doc, "scope_close_tokens", {});
  l.loop_open_tokens = field<Strings>(doc, "loop_open_tokens", {});
  l.loop_cancel_tokens = field<Strings>(doc, "loop_cancel_tokens", {});
  l.substitution_template =
      field<StringMap>(doc, "substitution_template", {});
  return l;
}

LanguageProfile resolve_language(std::string_view id_or_path) {
  for (const auto& id : builtin_language_ids()) {
    if (id == id_or_path) return builtin_language(id);
  }
  const std::filesystem::path path(id_or_path);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kUnknownIdentifier,
                "unknown language '" + std::string(id_or_path) +
                    "' (not a built-in id or a profile file)");
  }
  try {
    return language_from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    bad_language(path.string() + ": " + e.what());
  }
}

}  // namespace voltpick
