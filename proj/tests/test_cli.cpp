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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support.hpp"
#include "voltpick/io.hpp"
#include "voltpick/recommender.hpp"
#include "voltpick/usage.hpp"

using namespace voltpick;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path path;
  Workspace() : path(fs::temp_directory_path() / ("voltpick_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
    fs::copy(testsupport::fixture_dir() / "minilang", path, fs::copy_options::recursive);
  }
  ~Workspace() { fs::remove_all(path); }

  // Exit status of the CLI run inside the workspace.
  int run(const std::string& args) const {
    const std::string cmd = "cd '" + path.string() + "' && '" VOLTPICK_CLI "' " + args +
                            " > out.txt 2> err.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return read_file(path / "out.txt"); }
  std::string err() const { return read_file(path / "err.txt"); }
};

}  // namespace

TEST_CASE("cli exit codes") {
  Workspace ws;
  CHECK(ws.run("--help") == 0);
  CHECK(ws.out().find("profile") != std::string::npos);
  CHECK(ws.run("") == 1);
  CHECK(ws.run("frobnicate") == 1);
  CHECK(ws.run("profile build --backend bogus") == 1);
  CHECK(ws.run("profile build --backend rapl-powercap --rapl-root /nonexistent") == 2);
  CHECK(ws.err().find("BackendUnavailable") != std::string::npos);
  CHECK(ws.run("profile show missing.json") == 2);
  CHECK(ws.run("recommend --profile profile.json --usage expected_counts.json") == 1);
  CHECK(ws.run("analyze --lang cobol src") == 1);
}

TEST_CASE("cli pipeline") {
  Workspace ws;
  REQUIRE(ws.run("analyze --lang minilang --loop-weight 10 --label fixture --out usage.json src") == 0);
  const auto report = load_usage_report(ws.path / "usage.json");
  CHECK(report.sites.size() == 7);
  CHECK(report.corpus_label == "fixture");

  REQUIRE(ws.run("recommend --profile profile.json --usage usage.json") == 0);
  CHECK(ws.out().find("TOTAL") != std::string::npos);
  CHECK(ws.err().find("warning: profile was built on") != std::string::npos);
  REQUIRE(ws.run("recommend --profile profile.json --usage usage.json --format csv") == 0);
  CHECK(ws.out().find("site_id,") == 0);
  REQUIRE(ws.run("recommend --profile profile.json --usage usage.json --format json "
                 "--out recs.json") == 0);
  const auto recs = load_recommendations(ws.path / "recs.json");
  CHECK(recs.recommendations.size() == 7);

  REQUIRE(ws.run("recommend --profile profile.json --usage usage.json --format json "
                 "--no-respect-thread-safety") == 0);
  const auto unsafe = recommendations_from_json(nlohmann::json::parse(ws.out()));
  CHECK_FALSE(unsafe.respect_thread_safety);
  const auto sessions = std::find_if(
      unsafe.recommendations.begin(), unsafe.recommendations.end(),
      [](const Recommendation& r) { return r.site_id == "src/sessions.ml:2:20"; });
  REQUIRE(sessions != unsafe.recommendations.end());
  CHECK(sessions->recommended_impl == "std::unordered_map");

  REQUIRE(ws.run("compare --usage usage.json --profile profile.json --profile profile.json") == 0);
  CHECK(ws.out().find("all profiles agree") != std::string::npos);

  const std::string before = read_file(ws.path / "src/inventory.ml");
  REQUIRE(ws.run("apply --recommendations recs.json --lang minilang") == 0);
  CHECK(ws.out() == read_file(ws.path / "expected.diff"));
  CHECK(read_file(ws.path / "src/inventory.ml") == before);
  REQUIRE(ws.run("apply --recommendations recs.json --lang minilang --in-place") == 0);
  CHECK(read_file(ws.path / "src/inventory.ml") != before);
  // The recommendations are now stale.
  CHECK(ws.run("apply --recommendations recs.json --lang minilang") == 1);
  CHECK(ws.err().find("StaleSite") != std::string::npos);
  CHECK(ws.run("apply --recommendations recs.json --dry-run --in-place") == 1);
}

TEST_CASE("cli profile build, show and meter selftest") {
  Workspace ws;
  REQUIRE(ws.run("profile build --backend synthetic --script 0,2000000 --group set "
                 "--elements 50 --repetitions 10 --runs 4 --warmups 1 "
                 "--created-at 2026-01-01T00:00:00Z --note ci --out p.json") == 0);
  const auto p = load_profile(ws.path / "p.json");
  CHECK(p.entries.size() == 12);
  CHECK(p.environment_note == "ci");
  CHECK(p.plan->total_runs == 4);
  REQUIRE(ws.run("profile show p.json --dominance") == 0);
  CHECK(ws.out().find("candidates:") != std::string::npos);
  CHECK(ws.run("profile build --runs 3 --warmups 3") == 1);

  REQUIRE(ws.run("meter selftest --backend synthetic --script 0,5000000 --seconds 0.01") == 0);
  CHECK(ws.out().find("joules 5") != std::string::npos);
  REQUIRE(ws.run("meter selftest --backend time-power --power 10 --seconds 0.01") == 0);
  CHECK(ws.out().find("(estimate)") != std::string::npos);
  CHECK(::setenv("VOLTPICK_BACKEND", "synthetic", 1) == 0);
  CHECK(ws.run("meter selftest --script 0,1000000 --seconds 0.01") == 0);
  CHECK(ws.out().find("backend synthetic") != std::string::npos);
  ::unsetenv("VOLTPICK_BACKEND");
}
