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

#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "voltpick/error.hpp"
#include "voltpick/io.hpp"
#include "voltpick/usage.hpp"

using namespace voltpick;
namespace fs = std::filesystem;

namespace {

const LanguageProfile& ml() { return builtin_language("minilang"); }
const LanguageProfile& cl() { return builtin_language("c-like"); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidConfig;
}

double total(const std::vector<UsageSite>& sites) {
  double t = 0;
  for (const auto& s : sites) {
    for (const auto& [op, c] : s.op_counts) t += c;
  }
  return t;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("voltpick_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& rel, const std::string& text) const {
    fs::create_directories((path / rel).parent_path());
    std::ofstream(path / rel, std::ios::binary) << text;
  }
};

const char* kLoopy = R"ml(let xs = new Vector
for i in 1 to 3 do
  xs.add(i)
  for j in 1 to 3 do
    xs.get(j)
  end
end
xs.add(0)
)ml";

}  // namespace

TEST_CASE("calls at depth zero weigh one") {
  const auto sites = scan_file("let xs = new Vector\nxs.add(1)\nxs.add(2)\nxs.add(3)\n", ml(),
                               "t.ml", 10.0);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].raw_counts.at("insert(value)") == 3);
  CHECK(sites[0].op_counts.at("insert(value)") == 3.0);
  CHECK(sites[0].current_impl == "std::vector");
  CHECK(sites[0].site_id == "t.ml:1:14");
  CHECK(sites[0].variable == "xs");
}

TEST_CASE("calls inside a loop weigh L") {
  const auto sites = scan_file(
      "let xs = new Vector\nwhile going() do\n  xs.add(1)\n  xs.add(2)\n  xs.add(3)\nend\n",
      ml(), "t.ml", 10.0);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].raw_counts.at("insert(value)") == 3);
  CHECK(sites[0].op_counts.at("insert(value)") == 30.0);
  CHECK(sites[0].max_loop_depth == 1);
}

TEST_CASE("nested loops weigh L to the depth") {
  const auto s = scan_file(kLoopy, ml(), "t.ml", 10.0);
  REQUIRE(s.size() == 1);
  CHECK(s[0].op_counts.at("insert(value)") == 11.0);
  CHECK(s[0].op_counts.at("get(random-index)") == 100.0);
  CHECK(s[0].max_loop_depth == 2);
}

TEST_CASE("unbound receivers are not counted") {
  const auto s = scan_file("let xs = new Vector\nys.add(1)\nxs.size()\n", ml());
  REQUIRE(s.size() == 1);
  CHECK(s[0].op_counts.empty());
}

TEST_CASE("comments and strings do not count") {
  const char* src =
      "let xs = new Vector # xs.add(1)\n"
      "(* xs.add(2)\n   let ys = new Deque *)\n"
      "print(\"xs.add(3) \\\" xs.add(4)\")\n"
      "xs.add(5)\n";
  const auto s = scan_file(src, ml());
  REQUIRE(s.size() == 1);
  CHECK(s[0].raw_counts.at("insert(value)") == 1);
}

TEST_CASE("editing comments never changes counts") {
  const auto base = scan_file(kLoopy, ml(), "t.ml", 3.0);
  std::string edited = kLoopy;
  edited.insert(0, "# header comment with xs.get(1) and do for end\n");
  const auto after = scan_file(edited, ml(), "t.ml", 3.0);
  REQUIRE(after.size() == 1);
  CHECK(after[0].op_counts == base[0].op_counts);
  CHECK(after[0].raw_counts == base[0].raw_counts);
}

TEST_CASE("innermost declaration wins and scopes end") {
  const char* src =
      "let xs = new Vector\n"
      "let f = fun () do\n"
      "  let xs = new Deque\n"
      "  xs.prepend(1)\n"
      "end\n"
      "xs.prepend(2)\n"
      "xs.prepend(3)\n";
  const auto s = scan_file(src, ml());
  REQUIRE(s.size() == 2);
  CHECK(s[0].current_impl == "std::vector");
  CHECK(s[0].raw_counts.at("insert(start)") == 2);
  CHECK(s[1].current_impl == "std::deque");
  CHECK(s[1].raw_counts.at("insert(start)") == 1);
}

TEST_CASE("binding is flow-insensitive within a scope") {
  // The call precedes the declaration but is still bound to it.
  const auto s = scan_file("xs.add(1)\nlet xs = new Vector\n", ml());
  REQUIRE(s.size() == 1);
  CHECK(s[0].raw_counts.at("insert(value)") == 1);
}

TEST_CASE("weighted counts equal raw counts at L = 1 and grow with L") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> stmts = {"xs.add(1)\n", "ys.get(0)\n", "for i do\n",
                                          "end\n", "if c then\n", "xs.shift()\n",
                                          "while w do\n", "ys.each(f)\n"};
  for (int trial = 0; trial < 50; ++trial) {
    std::string src = "let xs = new LinkedList\nlet ys = new Vector\n";
    std::uniform_int_distribution<std::size_t> pick(0, stmts.size() - 1);
    for (int i = 0; i < 30; ++i) src += stmts[pick(rng)];
    const auto one = scan_file(src, ml(), "r.ml", 1.0);
    for (const auto& site : one) {
      for (const auto& [op, raw] : site.raw_counts) {
        CHECK(site.op_counts.at(op) == static_cast<double>(raw));
      }
    }
    double prev = total(one);
    for (double L : {1.5, 2.0, 10.0}) {
      const auto s = scan_file(src, ml(), "r.ml", L);
      CHECK(total(s) >= prev);
      prev = total(s);
      for (const auto& site : s) {
        for (const auto& [op, raw] : site.raw_counts) {
          CHECK(site.op_counts.at(op) >= static_cast<double>(raw));
        }
      }
    }
    CHECK(scan_file(src, ml(), "r.ml", 2.0) == scan_file(src, ml(), "r.ml", 2.0));
  }
}

TEST_CASE("scan errors") {
  CHECK(code_of([] { scan_file("let xs = new Vector\n\xff\xfe", ml()); }) ==
        ErrorCode::kDecodeError);
  CHECK(code_of([] { scan_file("", ml(), "x", 0.5); }) == ErrorCode::kInvalidConfig);
  LanguageProfile bad = ml();
  bad.call_pattern = "(unclosed";
  CHECK(code_of([&] { Scanner(bad, builtin_registry()); }) == ErrorCode::kPatternError);
  bad = ml();
  bad.declaration_patterns = {"let @ID@"};
  CHECK(code_of([&] { Scanner(bad, builtin_registry()); }) == ErrorCode::kPatternError);
  bad = ml();
  bad.constructors["Bogus"] = "no::such";
  CHECK(code_of([&] { Scanner(bad, builtin_registry()); }) == ErrorCode::kUnknownIdentifier);
  bad = ml();
  bad.method_map["list"]["frob"] = "frobnicate";
  CHECK(code_of([&] { Scanner(bad, builtin_registry()); }) == ErrorCode::kUnknownIdentifier);
}

TEST_CASE("c-like declarations, member calls and loops") {
  const char* src = R"cc(#include <vector>
// std::vector<int> commented;
void f() {
  std::vector<int> xs;
  std::map<std::string, int> m{};
  auto s = std::unordered_set<int>();
  other.xs.push_back(1);
  for (int i = 0; i < n; ++i) {
    xs.push_back(i);
    m.insert({"a", i});
  }
  for (;;) xs.at(0);
  while (true) {
    if (s.count(3)) { s.insert(3); }
  }
  xs.front();
}
)cc";
  const auto sites = scan_file(src, cl(), "f.cpp", 10.0);
  REQUIRE(sites.size() == 3);
  CHECK(sites[0].current_impl == "std::vector");
  CHECK(sites[0].site_id == "f.cpp:4:3");
  CHECK(sites[0].raw_counts.at("insert(value)") == 1);
  CHECK(sites[0].op_counts.at("insert(value)") == 10.0);
  CHECK(sites[0].raw_counts.at("get(random-index)") == 1);
  CHECK(sites[0].op_counts.at("get(random-index)") == 1.0);
  CHECK(sites[1].current_impl == "std::map");
  CHECK(sites[1].op_counts.at("put") == 10.0);
  CHECK(sites[2].current_impl == "std::unordered_set");
  CHECK(sites[2].op_counts.at("contains") == 10.0);
  CHECK(sites[2].op_counts.at("add") == 10.0);
}

TEST_CASE("c-like masks character literals") {
  const auto sites = scan_file("std::vector<char> v; v.push_back('\"'); v.push_back('a');\n", cl());
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].raw_counts.at("insert(value)") == 2);
}

TEST_CASE("mask_source preserves offsets and newlines") {
  const std::string src = "a # b\n\"x\ny\" (* c\n d *) e";
  const std::string masked = mask_source(src, ml());
  CHECK(masked.size() == src.size());
  CHECK(masked == "a    \n  \n       \n      e");
}

TEST_CASE("analyze_corpus orders files and collects diagnostics") {
  TempDir dir("corpus");
  dir.write("b.ml", "let x = new Vector\n");
  dir.write("a/z.ml", "let y = new Deque\n");
  dir.write("notes.txt", "let z = new Vector\n");
  dir.write("bad.ml", "let q = new Vector \xc3\x28\n");
  const auto report = analyze_corpus({dir.path}, ml(), 1.0, "demo");
  REQUIRE(report.sites.size() == 2);
  CHECK(report.sites[0].file == (dir.path / "a/z.ml").generic_string());
  CHECK(report.sites[1].file == (dir.path / "b.ml").generic_string());
  CHECK(report.corpus_label == "demo");
  CHECK(report.lang_id == "minilang");
  REQUIRE(report.diagnostics.size() == 1);
  CHECK(report.diagnostics[0].find("bad.ml") != std::string::npos);

  const auto missing = analyze_corpus({dir.path / "missing.ml"}, ml(), 1.0);
  CHECK(missing.sites.empty());
  CHECK(missing.diagnostics.size() == 1);

  const auto empty = analyze_corpus({}, ml(), 1.0);
  CHECK(empty.sites.empty());
  CHECK(empty.diagnostics.empty());
}

TEST_CASE("analyze_corpus equals concatenated scan_file") {
  const fs::path src = testsupport::fixture_dir() / "minilang/src";
  const auto report = analyze_corpus({src}, ml(), 10.0);
  std::vector<UsageSite> concat;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(src)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    for (auto& s : scan_file(read_file(f), ml(), f.generic_string(), 10.0)) {
      concat.push_back(s);
    }
  }
  CHECK(report.sites == concat);
}

TEST_CASE("usage reports round-trip and validate") {
  const auto report = analyze_corpus({testsupport::fixture_dir() / "minilang/src"}, ml(), 10.0,
                                     "fixture");
  CHECK(usage_report_from_json(nlohmann::json::parse(serialize_usage_report(report))) ==
        report);
  TempDir dir("report");
  save_usage_report(report, dir.path / "r.json");
  CHECK(load_usage_report(dir.path / "r.json") == report);

  auto doc = usage_report_to_json(report);
  auto bad = doc;
  bad["sites"][0]["counts"]["frobnicate"] = 1;
  CHECK(code_of([&] { usage_report_from_json(bad); }) == ErrorCode::kUnknownIdentifier);
  bad = doc;
  bad["sites"][0]["impl"] = "no::such";
  CHECK(code_of([&] { usage_report_from_json(bad); }) == ErrorCode::kUnknownIdentifier);
  bad = doc;
  bad["sites"].push_back(bad["sites"][0]);
  CHECK(code_of([&] { usage_report_from_json(bad); }) == ErrorCode::kMalformedReport);
  bad = doc;
  bad["sites"][0]["raw_counts"]["insert(value)"] = -1;
  CHECK(code_of([&] { usage_report_from_json(bad); }) == ErrorCode::kMalformedReport);
  bad = doc;
  bad["schema_version"] = 9;
  CHECK(code_of([&] { usage_report_from_json(bad); }) == ErrorCode::kMalformedReport);
  dir.write("trunc.json", "{\"schema_version\": 1, \"sit");
  CHECK(code_of([&] { load_usage_report(dir.path / "trunc.json"); }) ==
        ErrorCode::kMalformedReport);
}

TEST_CASE("minimal external report loads") {
  const auto doc = nlohmann::json::parse(R"js({
    "schema_version": 1, "corpus": "ext", "lang": "java", "loop_weight": 1,
    "sites": [{"site_id": "A.java:3:9", "file": "A.java", "line": 3,
               "impl": "std::list", "api_kind": "list",
               "counts": {"insert(value)": 4.5}, "raw_counts": {"insert(value)": 4}}]})js");
  const auto r = usage_report_from_json(doc);
  REQUIRE(r.sites.size() == 1);
  CHECK(r.sites[0].op_counts.at("insert(value)") == 4.5);
}

TEST_CASE("language profiles round-trip through JSON") {
  for (const auto& id : builtin_language_ids()) {
    const auto& lang = builtin_language(id);
    CHECK(language_from_json(language_to_json(lang)) == lang);
  }
  TempDir dir("lang");
  auto custom = ml();
  custom.lang_id = "custom";
  dir.write("lang.json", language_to_json(custom).dump());
  CHECK(resolve_language((dir.path / "lang.json").string()) == custom);
  CHECK(resolve_language("minilang") == ml());
  CHECK_THROWS_AS(resolve_language("cobol"), Error);
}
