// Copyright 2026 The RuleForge Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <initializer_list>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "ruleforge/cli.h"
#include "support.h"

using namespace ruleforge;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::initializer_list<std::string> args) {
  std::vector<std::string> owned = {"ruleforge"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "ruleforge_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string data(const std::string& rel) { return rftest::data_path(rel).string(); }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  Run r = cli({"synth", "--spec", data("son_of/spec_path.json"), "--frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--frobnicate") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(cli({"no-such-command"}).code == 2);
  CHECK(cli({"synth"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("synth prints the rule") {
  Run r = cli({"synth", "--spec", data("son_of/spec_path.json"), "--scorer", "augmented"});
  CHECK(r.code == 0);
  CHECK(r.out == "[]*\n");

  Run none = cli({"synth", "--spec", data("son_of/spec_path.json"), "--max-states", "1"});
  CHECK(none.code == 0);
  CHECK(none.out == "no rule found within 1 states\n");
}

TEST_CASE("synth writes report and trace") {
  const fs::path report = scratch("report.json");
  const fs::path trace = scratch("trace.jsonl");
  Run r = cli({"synth", "--spec", data("son_of/spec_path.json"), "--out", report.string(),
               "--trace", trace.string()});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(rftest::slurp(report));
  CHECK(j["found"] == true);
  std::istringstream lines(rftest::slurp(trace));
  int n = 0;
  for (std::string line; std::getline(lines, line);) ++n;
  CHECK(n == j["statesExplored"].get<int>() + 1);
}

TEST_CASE("domain errors exit with 1") {
  Run missing = cli({"synth", "--spec", "/nonexistent/spec.json"});
  CHECK(missing.code == 1);
  CHECK_FALSE(missing.err.empty());
  Run model = cli({"synth", "--spec", data("son_of/spec_path.json"), "--scorer", "contextual"});
  CHECK(model.code == 1);
  Run rule = cli({"match", "--rule", "[word=", "--corpus", data("son_of/corpus.jsonl")});
  CHECK(rule.code == 1);
  CHECK(rule.err.find("offset") != std::string::npos);
}

TEST_CASE("unreachable remote scorer") {
  int port = 0;
  {
    httplib::Server s;
    port = s.bind_to_any_port("127.0.0.1");
  }
  const std::string url = "http://127.0.0.1:" + std::to_string(port) + "/score";
  Run r = cli({"synth", "--spec", data("son_of/spec_path.json"), "--scorer", "remote", "--remote",
               url});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("match lists hits") {
  Run r = cli({"match", "--rule", "[word=son]", "--corpus", data("son_of/corpus.jsonl")});
  CHECK(r.code == 0);
  CHECK(r.out.find("fig1\t3\t4") != std::string::npos);
  Run one = cli({"match", "--rule", "[word=son]", "--corpus", data("son_of/corpus.jsonl"),
                 "--sentence", "fig1-masked"});
  CHECK(one.out.find("fig1\t") == std::string::npos);
  CHECK(one.out.find("fig1-masked\t3\t4") != std::string::npos);
}

TEST_CASE("gen-data is byte-reproducible") {
  const fs::path a = scratch("a.jsonl"), b = scratch("b.jsonl");
  const fs::path ia = scratch("ia.jsonl"), ib = scratch("ib.jsonl");
  REQUIRE(cli({"gen-data", "--corpus", data("corpus.jsonl"), "--n", "10", "--seed", "1", "--out",
               a.string(), "--items", ia.string()})
              .code == 0);
  REQUIRE(cli({"gen-data", "--corpus", data("corpus.jsonl"), "--n", "10", "--seed", "1", "--out",
               b.string(), "--items", ib.string(), "--threads", "2"})
              .code == 0);
  CHECK(rftest::slurp(a) == rftest::slurp(b));
  CHECK(rftest::slurp(ia) == rftest::slurp(ib));
  CHECK_FALSE(rftest::slurp(a).empty());

  const fs::path z = scratch("z.jsonl");
  REQUIRE(cli({"gen-data", "--corpus", data("corpus.jsonl"), "--n", "0", "--seed", "1", "--out",
               z.string()})
              .code == 0);
  CHECK(nlohmann::json::parse(rftest::slurp(z))["count"] == 0);
}

TEST_CASE("train and evaluate end to end") {
  const fs::path train = scratch("t.jsonl"), items = scratch("items.jsonl");
  REQUIRE(cli({"gen-data", "--corpus", data("corpus.jsonl"), "--n", "40", "--seed", "3", "--out",
               train.string(), "--items", items.string()})
              .code == 0);
  const fs::path m1 = scratch("m1.json"), m2 = scratch("m2.json");
  REQUIRE(cli({"train", "--data", train.string(), "--out", m1.string(), "--dim", "4096"}).code == 0);
  REQUIRE(cli({"train", "--data", train.string(), "--out", m2.string(), "--dim", "4096"}).code == 0);
  CHECK(rftest::slurp(m1) == rftest::slurp(m2));

  const fs::path r1 = scratch("r1.json"), r2 = scratch("r2.json");
  for (const fs::path& r : {r1, r2}) {
    Run e = cli({"eval-intrinsic", "--items", items.string(), "--scorer",
                 "static,augmented,contextual,oracle,random", "--model", m1.string(), "--budget",
                 "300", "--report", r.string()});
    REQUIRE(e.code == 0);
    CHECK(e.out.find("Rules found") != std::string::npos);
  }
  CHECK(rftest::slurp(r1) == rftest::slurp(r2));

  const fs::path s1 = scratch("s1.json"), s2 = scratch("s2.json");
  for (const fs::path& s : {s1, s2}) {
    REQUIRE(cli({"synth", "--spec", data("son_of/spec_path.json"), "--scorer", "contextual",
                 "--model", m1.string(), "--out", s.string()})
                .code == 0);
  }
  CHECK(rftest::slurp(s1) == rftest::slurp(s2));
}

TEST_CASE("eval-fewshot is byte-reproducible") {
  const fs::path a = scratch("fa.json"), b = scratch("fb.json");
  for (const fs::path& r : {a, b}) {
    Run e = cli({"eval-fewshot", "--episodes", data("fewshot/episodes_5way1shot.jsonl"), "--mode",
                 "path", "--scorer", "static", "--budget", "200", "--baseline", "--background",
                 data("fewshot/background.jsonl"), "--seed", "5", "--report", r.string()});
    REQUIRE(e.code == 0);
    CHECK(e.out.find("baseline micro-F1") != std::string::npos);
  }
  CHECK(rftest::slurp(a) == rftest::slurp(b));
}

TEST_CASE("config files and environment reach the commands") {
  const fs::path cfg = scratch("cfg.json");
  {
    std::ofstream o(cfg);
    o << R"({"maxStates": 1})";
  }
  Run r = cli({"--config", cfg.string(), "synth", "--spec", data("son_of/spec_path.json")});
  CHECK(r.code == 0);
  CHECK(r.out == "no rule found within 1 states\n");

  {
    std::ofstream o(cfg);
    o << R"({"maxStatez": 1})";
  }
  CHECK(cli({"--config", cfg.string(), "synth", "--spec", data("son_of/spec_path.json")}).code ==
        1);
}
