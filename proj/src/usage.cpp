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

#include "voltpick/usage.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>

#include "voltpick/error.hpp"
#include "voltpick/io.hpp"

namespace voltpick {

using nlohmann::json;

namespace {

bool starts_with_at(std::string_view text, std::size_t pos,
                    std::string_view prefix) {
  return text.size() - pos >= prefix.size() &&
         text.compare(pos, prefix.size(), prefix) == 0;
}

void blank(std::string& out, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to && i < out.size(); ++i) {
    if (out[i] != '\n' && out[i] != '\r') out[i] = ' ';
  }
}

std::string regex_escape(std::string_view text) {
  static const std::string special = R"(\^$.|?*+()[]{}/-)";
  std::string out;
  for (char c : text) {
    if (special.find(c) != std::string::npos) out += '\\';
    out += c;
  }
  return out;
}

// Number of capturing groups opened in `pattern` before `end`.
std::size_t groups_before(const std::string& pattern, std::size_t end) {
  std::size_t n = 0;
  bool in_class = false;
  for (std::size_t i = 0; i < end; ++i) {
    const char c = pattern[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (in_class) {
      if (c == ']') in_class = false;
      continue;
    }
    if (c == '[') {
      in_class = true;
    } else if (c == '(' && (i + 1 >= pattern.size() || pattern[i + 1] != '?')) {
      ++n;
    }
  }
  return n;
}

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

struct Token {
  std::size_t offset;
  std::string_view text;
};

std::vector<Token> tokenize(std::string_view masked) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < masked.size()) {
    const char c = masked[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
        c == '\v') {
      ++i;
    } else if (is_word_char(c)) {
      std::size_t j = i;
      while (j < masked.size() && is_word_char(masked[j])) ++j;
      tokens.push_back({i, masked.substr(i, j - i)});
      i = j;
    } else {
      tokens.push_back({i, masked.substr(i, 1)});
      ++i;
    }
  }
  return tokens;
}

bool one_of(std::string_view token, const std::vector<std::string>& set) {
  return std::find(set.begin(), set.end(), token) != set.end();
}

struct LineIndex {
  explicit LineIndex(std::string_view text) {
    starts.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\n') starts.push_back(i + 1);
    }
  }
  // 1-based line and byte column.
  std::pair<std::size_t, std::size_t> locate(std::size_t offset) const {
    auto it = std::upper_bound(starts.begin(), starts.end(), offset);
    const std::size_t line = static_cast<std::size_t>(it - starts.begin());
    return {line, offset - starts[line - 1] + 1};
  }
  std::vector<std::size_t> starts;
};

}  // namespace

std::string mask_source(std::string_view text, const LanguageProfile& lang) {
  std::string out(text);
  std::size_t i = 0;
  while (i < text.size()) {
    // Longest comment opener wins.
    std::size_t best_len = 0;
    int kind = 0;  // 1 line, 2 block
    std::string_view close;
    for (const auto& l : lang.comment_syntax.line) {
      if (l.size() > best_len && starts_with_at(text, i, l)) {
        best_len = l.size();
        kind = 1;
      }
    }
    for (const auto& [open, cl] : lang.comment_syntax.block) {
      if (open.size() > best_len && starts_with_at(text, i, open)) {
        best_len = open.size();
        kind = 2;
        close = cl;
      }
    }
    if (kind == 1) {
      std::size_t end = text.find('\n', i);
      if (end == std::string_view::npos) end = text.size();
      blank(out, i, end);
      i = end;
      continue;
    }
    if (kind == 2) {
      std::size_t end = text.find(close, i + best_len);
      end = end == std::string_view::npos ? text.size() : end + close.size();
      blank(out, i, end);
      i = end;
      continue;
    }
    const char c = text[i];
    if (lang.string_delimiters.find(c) != std::string::npos) {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != c) {
        j += text[j] == lang.escape_char ? 2 : 1;
      }
      const std::size_t end = std::min(j + 1, text.size());
      blank(out, i, end);
      i = end;
      continue;
    }
    ++i;
  }
  return out;
}

struct Scanner::Compiled {
  struct Declaration {
    std::regex re;
    std::size_t id_group;
    std::size_t ctor_group;
  };
  std::vector<Declaration> declarations;
  std::regex call;
};

Scanner::Scanner(const LanguageProfile& lang, const Registry& registry)
    : lang_(lang), registry_(&registry), compiled_(std::make_unique<Compiled>()) {
  lang_.validate(registry);

  std::vector<std::string> tokens;
  for (const auto& [token, impl] : lang_.constructors) tokens.push_back(token);
  std::sort(tokens.begin(), tokens.end(),
            [](const std::string& a, const std::string& b) {
              return a.size() != b.size() ? a.size() > b.size() : a < b;
            });
  std::string alternation = "(";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) alternation += '|';
    alternation += regex_escape(tokens[i]);
  }
  alternation += ')';
  if (tokens.empty()) alternation = "($^)";
  const std::string ident = "([A-Za-z_][A-Za-z0-9_]*)";

  for (const auto& tmpl : lang_.declaration_patterns) {
    const std::size_t id_pos = tmpl.find("@ID@");
    const std::size_t ctor_pos = tmpl.find("@CTOR@");
    const std::size_t id_before = groups_before(tmpl, id_pos);
    const std::size_t ctor_before = groups_before(tmpl, ctor_pos);
    Compiled::Declaration d;
    if (id_pos < ctor_pos) {
      d.id_group = id_before + 1;
      d.ctor_group = ctor_before + 2;
    } else {
      d.ctor_group = ctor_before + 1;
      d.id_group = id_before + 2;
    }
    std::string pattern = tmpl;
    pattern.replace(pattern.find("@ID@"), 4, ident);
    pattern.replace(pattern.find("@CTOR@"), 6, alternation);
    try {
      d.re = std::regex(pattern, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::kPatternError,
                  "declaration pattern '" + tmpl + "': " + e.what());
    }
    compiled_->declarations.push_back(std::move(d));
  }
  try {
    compiled_->call =
        std::regex(lang_.call_pattern, std::regex::ECMAScript | std::regex::optimize);
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::kPatternError,
                "call pattern '" + lang_.call_pattern + "': " + e.what());
  }
}

Scanner::~Scanner() = default;
Scanner::Scanner(Scanner&&) noexcept = default;

namespace {

std::vector<ConstructionSite> find_sites(
    const std::string& masked, const LanguageProfile& lang,
    const Registry& registry,
    const std::vector<std::pair<const std::regex*, std::pair<std::size_t, std::size_t>>>&
        patterns) {
  std::map<std::size_t, ConstructionSite> by_offset;
  for (const auto& [re, groups] : patterns) {
    const auto [id_group, ctor_group] = groups;
    for (auto it = std::sregex_iterator(masked.begin(), masked.end(), *re);
         it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      const auto offset = static_cast<std::size_t>(m.position(ctor_group));
      if (by_offset.count(offset) != 0) continue;
      ConstructionSite site;
      site.impl_id = lang.constructors.at(m.str(ctor_group));
      site.api_kind = registry.implementation(site.impl_id).api_kind;
      site.variable = m.str(id_group);
      site.byte_offset = offset;
      site.byte_length = static_cast<std::size_t>(m.length(ctor_group));
      by_offset.emplace(offset, std::move(site));
    }
  }
  std::vector<ConstructionSite> out;
  for (auto& [offset, site] : by_offset) out.push_back(std::move(site));
  return out;
}

}  // namespace

std::vector<ConstructionSite> Scanner::construction_sites(
    std::string_view source_text) const {
  if (!is_valid_utf8(source_text)) {
    throw Error(ErrorCode::kDecodeError, "source is not valid UTF-8");
  }
  const std::string masked = mask_source(source_text, lang_);
  std::vector<std::pair<const std::regex*, std::pair<std::size_t, std::size_t>>> patterns;
  for (const auto& d : compiled_->declarations) {
    patterns.push_back({&d.re, {d.id_group, d.ctor_group}});
  }
  auto sites = find_sites(masked, lang_, *registry_, patterns);
  const LineIndex lines(source_text);
  for (auto& s : sites) std::tie(s.line, s.column) = lines.locate(s.byte_offset);
  return sites;
}

std::vector<UsageSite> Scanner::scan(std::string_view source_text,
                                     std::string_view file_label,
                                     double loop_weight) const {
  if (!(loop_weight >= 1.0) || !std::isfinite(loop_weight)) {
    throw Error(ErrorCode::kInvalidConfig, "loop weight must be >= 1");
  }
  const auto sites = construction_sites(source_text);
  const std::string masked = mask_source(source_text, lang_);

  // Scope tree from the token stream. Scope 0 is the file.
  struct Scope {
    std::size_t parent;
    bool loop;
  };
  std::vector<Scope> scopes{{0, false}};

  struct Call {
    std::size_t offset;
    std::string receiver;
    std::string method;
  };
  std::vector<Call> calls;
  for (auto it = std::sregex_iterator(masked.begin(), masked.end(),
                                      compiled_->call);
       it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    const auto offset = static_cast<std::size_t>(m.position(1));
    std::size_t k = offset;
    while (k > 0 && (masked[k - 1] == ' ' || masked[k - 1] == '\t' ||
                     masked[k - 1] == '\n' || masked[k - 1] == '\r')) {
      --k;
    }
    bool member = false;
    for (const auto& prefix : lang_.receiver_reject_prefixes) {
      if (k >= prefix.size() &&
          masked.compare(k - prefix.size(), prefix.size(), prefix) == 0) {
        member = true;
      }
    }
    if (!member) calls.push_back({offset, m.str(1), m.str(2)});
  }

  // Sweep tokens, declarations and calls in offset order.
  std::vector<std::size_t> site_scope(sites.size());
  std::vector<std::size_t> call_scope(calls.size());
  std::vector<std::size_t> call_depth(calls.size());
  {
    const auto tokens = tokenize(masked);
    std::vector<std::size_t> stack{0};
    std::size_t loop_depth = 0;
    int paren = 0;
    bool pending_loop = false;
    int pending_paren = 0;
    std::size_t ti = 0, si = 0, ci = 0;
    auto at_or_after = [](std::size_t a, std::size_t b) { return a <= b; };
    while (ti < tokens.size() || si < sites.size() || ci < calls.size()) {
      const std::size_t t_off = ti < tokens.size() ? tokens[ti].offset : SIZE_MAX;
      const std::size_t s_off = si < sites.size() ? sites[si].byte_offset : SIZE_MAX;
      const std::size_t c_off = ci < calls.size() ? calls[ci].offset : SIZE_MAX;
      if (si < sites.size() && at_or_after(s_off, t_off) && s_off <= c_off) {
        site_scope[si++] = stack.back();
        continue;
      }
      if (ci < calls.size() && at_or_after(c_off, t_off)) {
        call_scope[ci] = stack.back();
        call_depth[ci] = loop_depth;
        ++ci;
        continue;
      }
      const std::string_view tok = tokens[ti++].text;
      if (tok == "(") {
        ++paren;
      } else if (tok == ")") {
        paren = std::max(0, paren - 1);
      }
      if (one_of(tok, lang_.scope_open_tokens)) {
        const bool loop = pending_loop && paren == pending_paren;
        if (loop) pending_loop = false;
        scopes.push_back({stack.back(), loop});
        stack.push_back(scopes.size() - 1);
        if (loop) ++loop_depth;
      } else if (one_of(tok, lang_.scope_close_tokens)) {
        if (stack.size() > 1) {
          if (scopes[stack.back()].loop) --loop_depth;
          stack.pop_back();
        }
      } else if (one_of(tok, lang_.loop_open_tokens)) {
        pending_loop = true;
        pending_paren = paren;
      } else if (paren == 0 && one_of(tok, lang_.loop_cancel_tokens)) {
        pending_loop = false;
      }
    }
  }

  const LineIndex lines(source_text);
  std::vector<UsageSite> out;
  out.reserve(sites.size());
  for (const auto& s : sites) {
    UsageSite u;
    u.file = std::string(file_label);
    std::tie(u.line, u.column) = lines.locate(s.byte_offset);
    u.site_id = u.file + ":" + std::to_string(u.line) + ":" +
                std::to_string(u.column);
    u.variable = s.variable;
    u.current_impl = s.impl_id;
    u.api_kind = s.api_kind;
    out.push_back(std::move(u));
  }

  for (std::size_t c = 0; c < calls.size(); ++c) {
    const Call& call = calls[c];
    std::optional<std::size_t> bound;
    for (std::size_t scope = call_scope[c];; scope = scopes[scope].parent) {
      // Latest declaration at or before the call, else the first one.
      std::optional<std::size_t> first, latest;
      for (std::size_t i = 0; i < sites.size(); ++i) {
        if (site_scope[i] != scope || sites[i].variable != call.receiver) {
          continue;
        }
        if (!first) first = i;
        if (sites[i].byte_offset <= call.offset) latest = i;
      }
      if (latest || first) {
        bound = latest ? latest : first;
        break;
      }
      if (scope == 0) break;
    }
    if (!bound) continue;
    UsageSite& site = out[*bound];
    const auto kind_it = lang_.method_map.find(site.api_kind);
    if (kind_it == lang_.method_map.end()) continue;
    const auto op_it = kind_it->second.find(call.method);
    if (op_it == kind_it->second.end()) continue;
    const double weight =
        std::pow(loop_weight, static_cast<double>(call_depth[c]));
    site.raw_counts[op_it->second] += 1;
    site.op_counts[op_it->second] += weight;
    site.max_loop_depth = std::max(site.max_loop_depth, call_depth[c]);
  }
  return out;
}

std::vector<UsageSite> scan_file(std::string_view source_text,
                                 const LanguageProfile& lang,
                                 std::string_view file_label,
                                 double loop_weight,
                                 const Registry& registry) {
  return Scanner(lang, registry).scan(source_text, file_label, loop_weight);
}

UsageReport analyze_corpus(const std::vector<std::filesystem::path>& paths,
                           const LanguageProfile& lang, double loop_weight,
                           std::string corpus_label,
                           const Registry& registry) {
  namespace fs = std::filesystem;
  const Scanner scanner(lang, registry);
  UsageReport report;
  report.corpus_label = std::move(corpus_label);
  report.lang_id = lang.lang_id;
  report.loop_weight = loop_weight;

  std::vector<fs::path> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (auto it = fs::recursive_directory_iterator(p, ec);
           it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) break;
        if (!it->is_regular_file(ec)) continue;
        const auto ext = it->path().extension().string();
        if (one_of(ext, lang.file_extensions)) files.push_back(it->path());
      }
      if (ec) {
        report.diagnostics.push_back("IoError: " + p.generic_string() + ": " +
                                     ec.message());
      }
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.generic_string() < b.generic_string();
            });
  files.erase(std::unique(files.begin(), files.end()), files.end());

  for (const auto& file : files) {
    try {
      const std::string text = read_file(file);
      auto sites = scanner.scan(text, file.generic_string(), loop_weight);
      for (auto& s : sites) report.sites.push_back(std::move(s));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kIoError && e.code() != ErrorCode::kDecodeError) {
        throw;
      }
      report.diagnostics.push_back(file.generic_string() + ": " + e.what());
    }
  }
  return report;
}

// ------------------------------------------------------------ JSON

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedReport, what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::set<std::string>& required, const std::string& where) {
  if (!obj.is_object()) malformed(where + " is not an object");
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) malformed("unknown field '" + key + "' in " + where);
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) malformed("missing field '" + key + "' in " + where);
  }
}

template <class T>
T get_as(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    malformed("field '" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

std::uint64_t get_uint(const json& v, const std::string& where) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0)) {
    malformed(where + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

json usage_report_to_json(const UsageReport& report) {
  json sites = json::array();
  for (const auto& s : report.sites) {
    sites.push_back({{"site_id", s.site_id},
                     {"file", s.file},
                     {"line", s.line},
                     {"column", s.column},
                     {"variable", s.variable},
                     {"impl", s.current_impl},
                     {"api_kind", s.api_kind},
                     {"counts", s.op_counts},
                     {"raw_counts", s.raw_counts},
                     {"max_loop_depth", s.max_loop_depth}});
  }
  json doc = {{"schema_version", report.schema_version},
              {"corpus", report.corpus_label},
              {"lang", report.lang_id},
              {"loop_weight", report.loop_weight},
              {"sites", std::move(sites)}};
  if (!report.diagnostics.empty()) doc["diagnostics"] = report.diagnostics;
  return doc;
}

UsageReport usage_report_from_json(const json& doc, const Registry& registry) {
  check_keys(doc, {"schema_version", "corpus", "lang", "loop_weight", "sites",
                   "diagnostics"},
             {"schema_version", "corpus", "lang", "loop_weight", "sites"},
             "usage report");
  UsageReport r;
  r.schema_version = get_as<int>(doc, "schema_version", "usage report");
  if (r.schema_version != kUsageSchemaVersion) {
    malformed("unsupported usage report schema_version " +
              std::to_string(r.schema_version));
  }
  r.corpus_label = get_as<std::string>(doc, "corpus", "usage report");
  r.lang_id = get_as<std::string>(doc, "lang", "usage report");
  if (!doc.at("loop_weight").is_number()) malformed("loop_weight is not a number");
  r.loop_weight = doc.at("loop_weight").get<double>();
  if (!(r.loop_weight >= 1.0) || !std::isfinite(r.loop_weight)) {
    malformed("loop_weight must be >= 1");
  }
  if (doc.contains("diagnostics")) {
    r.diagnostics = get_as<std::vector<std::string>>(doc, "diagnostics", "usage report");
  }
  if (!doc.at("sites").is_array()) malformed("sites is not an array");

  std::set<std::string> ids;
  for (const auto& js : doc.at("sites")) {
    check_keys(js, {"site_id", "file", "line", "column", "variable", "impl",
                    "api_kind", "counts", "raw_counts", "max_loop_depth"},
               {"site_id", "file", "line", "impl", "api_kind", "counts",
                "raw_counts"},
               "site");
    UsageSite s;
    s.site_id = get_as<std::string>(js, "site_id", "site");
    const std::string where = "site " + s.site_id;
    if (!ids.insert(s.site_id).second) malformed("duplicate site_id " + s.site_id);
    s.file = get_as<std::string>(js, "file", where);
    s.line = get_uint(js.at("line"), where + " line");
    if (js.contains("column")) s.column = get_uint(js.at("column"), where + " column");
    if (js.contains("variable")) s.variable = get_as<std::string>(js, "variable", where);
    if (js.contains("max_loop_depth")) {
      s.max_loop_depth = get_uint(js.at("max_loop_depth"), where + " max_loop_depth");
    }
    s.current_impl = get_as<std::string>(js, "impl", where);
    s.api_kind = get_as<std::string>(js, "api_kind", where);

    const auto* impl = registry.find_implementation(s.current_impl);
    if (impl == nullptr) {
      throw Error(ErrorCode::kUnknownIdentifier,
                  where + ": unknown implementation '" + s.current_impl + "'");
    }
    if (!registry.has_api_kind(s.api_kind)) {
      throw Error(ErrorCode::kUnknownIdentifier,
                  where + ": unknown api_kind '" + s.api_kind + "'");
    }
    if (impl->api_kind != s.api_kind) {
      malformed(where + ": " + s.current_impl + " is not a " + s.api_kind);
    }
    const auto& counts = js.at("counts");
    const auto& raw = js.at("raw_counts");
    if (!counts.is_object() || !raw.is_object()) {
      malformed(where + ": counts and raw_counts must be objects");
    }
    for (const auto& [op, value] : counts.items()) {
      if (!registry.has_operation(s.api_kind, op)) {
        throw Error(ErrorCode::kUnknownIdentifier,
                    where + ": unknown " + s.api_kind + " operation '" + op + "'");
      }
      if (!value.is_number() || !std::isfinite(value.get<double>()) ||
          value.get<double>() < 0.0) {
        malformed(where + ": count for " + op + " must be a non-negative number");
      }
      s.op_counts[op] = value.get<double>();
    }
    for (const auto& [op, value] : raw.items()) {
      if (!registry.has_operation(s.api_kind, op)) {
        throw Error(ErrorCode::kUnknownIdentifier,
                    where + ": unknown " + s.api_kind + " operation '" + op + "'");
      }
      s.raw_counts[op] = get_uint(value, where + " raw count for " + op);
    }
    r.sites.push_back(std::move(s));
  }
  return r;
}

std::string serialize_usage_report(const UsageReport& report) {
  return usage_report_to_json(report).dump(2) + "\n";
}

void save_usage_report(const UsageReport& report,
                       const std::filesystem::path& path) {
  write_file_atomic(path, serialize_usage_report(report));
}

UsageReport load_usage_report(const std::filesystem::path& path,
                              const Registry& registry) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    malformed(path.string() + " is not valid JSON: " + e.what());
  }
  return usage_report_from_json(doc, registry);
}

}  // namespace voltpick
