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

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "ruleforge/apphost.h"
#include "ruleforge/evalkit.h"
#include "ruleforge/matcher.h"
#include "ruleforge/remote.h"
#include "ruleforge/scoring.h"
#include "ruleforge/search.h"
#include "ruleforge/service.h"
#include "support.h"

using namespace ruleforge;
using nlohmann::json;

namespace {

// An httplib server on an ephemeral local port, stopped on destruction.
class TestServer {
 public:
  template <typename Setup>
  explicit TestServer(Setup&& setup) {
    setup(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }

  int port() const { return port_; }
  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

// Serves the scoring protocol with `scorer`.
void mount_scorer(httplib::Server& s, std::shared_ptr<const Scorer> scorer) {
  s.Post("/score", [scorer](const httplib::Request& req, httplib::Response& res) {
    res.set_content(answer_scoring_request(*scorer, json::parse(req.body)).dump(),
                    "application/json");
  });
}

json path_spec_json() {
  return json::parse(rftest::slurp(rftest::data_path("son_of/spec_path.json")));
}

std::unique_ptr<Service> son_of_service() {
  return std::make_unique<Service>(load_corpus(rftest::data_path("son_of/corpus.jsonl")),
                                   nullptr, AppConfig{});
}

}  // namespace

TEST_CASE("health reports the loaded state") {
  auto svc = son_of_service();
  TestServer srv([&](httplib::Server& s) { svc->mount(s); });
  auto res = srv.client().Get("/api/health");
  REQUIRE(res);
  CHECK(res->status == 200);
  json j = json::parse(res->body);
  CHECK(j["status"] == "ok");
  CHECK(j["modelLoaded"] == false);
  CHECK(j["corpusSize"] == 2);
}

TEST_CASE("synthesize over HTTP equals the library path") {
  auto svc = son_of_service();
  TestServer srv([&](httplib::Server& s) { svc->mount(s); });
  json body = {{"spec", path_spec_json()}, {"scorer", "augmented"}, {"maxStates", 1000}};
  auto res = srv.client().Post("/api/synthesize", body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  json got = json::parse(res->body);

  Specification spec = spec_from_json(path_spec_json(), nullptr);
  AppConfig c;
  json want = run_synthesis(spec, *make_scorer("augmented", c, nullptr), c);
  CHECK(got == want);
  CHECK(got["found"] == true);
}

TEST_CASE("traced synthesis streams events then the report") {
  auto svc = son_of_service();
  TestServer srv([&](httplib::Server& s) { svc->mount(s); });
  json body = {{"spec", path_spec_json()}, {"scorer", "static"}, {"trace", true}};
  auto res = srv.client().Post("/api/synthesize", body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  std::istringstream lines(res->body);
  std::vector<json> events;
  for (std::string line; std::getline(lines, line);) events.push_back(json::parse(line));
  REQUIRE(events.size() >= 2);
  const json& report = events.back();
  CHECK(report["found"] == true);
  CHECK(static_cast<int>(events.size()) - 1 == report["statesExplored"].get<int>() + 1);
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    CHECK(events[i]["step"] == static_cast<int>(i) + 1);
    CHECK(events[i].contains("state"));
  }
}

TEST_CASE("budget exhaustion is a normal reply") {
  auto svc = son_of_service();
  TestServer srv([&](httplib::Server& s) { svc->mount(s); });
  json body = {{"spec", path_spec_json()}, {"maxStates", 1}};
  auto res = srv.client().Post("/api/synthesize", body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["found"] == false);
}

TEST_CASE("bad requests get machine-readable errors") {
  auto svc = son_of_service();
  TestServer srv([&](httplib::Server& s) { svc->mount(s); });
  auto cli = srv.client();

  auto not_json = cli.Post("/api/synthesize", "{oops", "application/json");
  REQUIRE(not_json);
  CHECK(not_json->status == 400);
  CHECK(json::parse(not_json->body).contains("location"));

  json bad_spec = path_spec_json();
  bad_spec["entries"][0].erase("pair");
  bad_spec["entries"][0]["selections"] = {{0, 99}};
  auto spec_res = cli.Post("/api/synthesize", json{{"spec", bad_spec}}.dump(), "application/json");
  REQUIRE(spec_res);
  CHECK(spec_res->status == 400);
  CHECK(json::parse(spec_res->body).contains("error"));

  auto rule_res =
      cli.Post("/api/match", json{{"rule", "[word=a"}, {"ids", {"fig1"}}}.dump(), "application/json");
  REQUIRE(rule_res);
  CHECK(rule_res->status == 400);
  CHECK(json::parse(rule_res->body)["location"].contains("offset"));

  auto scorer_res = cli.Post("/api/synthesize",
                             json{{"spec", path_spec_json()}, {"scorer", "contextual"}}.dump(),
                             "application/json");
  REQUIRE(scorer_res);
  CHECK(scorer_res->status == 400);
  CHECK(json::parse(scorer_res->body)["location"] == "scorer");
}

TEST_CASE("match over ids and inline sentences") {
  auto svc = son_of_service();
  TestServer srv([&](httplib::Server& s) { svc->mount(s); });
  Corpus c = load_corpus(rftest::data_path("son_of/corpus.jsonl"));
  json body = {{"rule", "[entity=person]"}, {"sentences", {"fig1", to_json(*c[1])}}};
  auto res = srv.client().Post("/api/match", body.dump(), "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  json j = json::parse(res->body);
  REQUIRE(j["results"].size() == 2);
  CHECK(j["results"][0]["spans"] == json::parse("[[0,1],[5,6],[7,8],[8,9],[9,10]]"));
  CHECK(j["results"][1]["spans"] == json::parse("[[0,1],[5,6],[7,8]]"));

  auto missing = srv.client().Post("/api/match", json{{"rule", "[]"}, {"ids", {"nope"}}}.dump(),
                                   "application/json");
  REQUIRE(missing);
  CHECK(missing->status == 400);
}

TEST_CASE("corpus search, parse and linearize") {
  auto svc = son_of_service();
  TestServer srv([&](httplib::Server& s) { svc->mount(s); });
  auto cli = srv.client();

  auto all = cli.Get("/api/corpus?q=son");
  REQUIRE(all);
  CHECK(json::parse(all->body)["total"] == 2);
  auto ruled = cli.Get("/api/corpus?rule=%5Bword%3Ddavid%5D&limit=1");
  REQUIRE(ruled);
  json r = json::parse(ruled->body);
  CHECK(r["total"] == 2);
  CHECK(r["sentences"].size() == 1);
  auto paged = cli.Get("/api/corpus?offset=1");
  REQUIRE(paged);
  CHECK(json::parse(paged->body)["sentences"].size() == 1);

  auto parsed = cli.Post("/api/parse", json{{"rule", "[word=a] HOLE"}}.dump(), "application/json");
  REQUIRE(parsed);
  CHECK(json::parse(parsed->body)["complete"] == false);

  json lin = {{"sentence", {{"ref", "fig1"}}}, {"subj", {0, 1}}, {"obj", {7, 10}}};
  auto l = cli.Post("/api/linearize", lin.dump(), "application/json");
  REQUIRE(l);
  REQUIRE(l->status == 200);
  CHECK(json::parse(l->body)["sentence"]["tokens"].size() == 3);
}

TEST_CASE("job gate admits a bounded number in order") {
  JobGate gate(2);
  std::atomic<int> peak{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 6; ++i) {
    threads.emplace_back([&] {
      JobSlot slot(gate);
      int now = gate.active();
      int prev = peak.load();
      while (now > prev && !peak.compare_exchange_weak(prev, now)) {
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    });
  }
  for (auto& t : threads) t.join();
  CHECK(peak.load() <= 2);
  CHECK(gate.active() == 0);
}

TEST_CASE("remote scorer matches the local one") {
  auto local = std::make_shared<const AugmentedStaticScorer>();
  TestServer srv([&](httplib::Server& s) { mount_scorer(s, local); });
  RemoteScorer remote(srv.url("/score"));
  Specification spec = load_specification(rftest::data_path("son_of/spec_path.json"), nullptr);
  SearchReport a = synthesize(spec, *local, SearchConfig{});
  SearchReport b = synthesize(spec, remote, SearchConfig{});
  REQUIRE(b.found);
  CHECK(print(a.rule) == print(b.rule));
  CHECK(a.states_explored == b.states_explored);
}

TEST_CASE("uniform remote scores fall back to FIFO order") {
  class Uniform : public Scorer {
   public:
    double score_transition(const State&, const State&, const SpecEntry&) const override {
      return 0.5;
    }
  };
  auto uniform = std::make_shared<const Uniform>();
  TestServer srv([&](httplib::Server& s) { mount_scorer(s, uniform); });
  RemoteScorer remote(srv.url("/score"));
  Specification spec = rftest::single_entry(
      rftest::share(rftest::make_sentence({"dog/dog/NN"})), {{0, 1}});
  SearchReport r = synthesize(spec, remote, SearchConfig{});
  REQUIRE(r.found);
  CHECK(check_spec(*r.rule, spec));
  SearchReport local = synthesize(spec, Uniform(), SearchConfig{});
  CHECK(print(local.rule) == print(r.rule));
}

TEST_CASE("oracle scores over the wire reach the ceiling") {
  Corpus corpus = load_corpus(rftest::data_path("corpus.jsonl"));
  auto items = gen_dataset(corpus, 8, 41, GeneratorConfig{}, 1);
  for (const GeneratedItem& item : items) {
    auto oracle = std::make_shared<const OraclePseudoScorer>(item.rule, item.spec);
    TestServer srv([&](httplib::Server& s) { mount_scorer(s, oracle); });
    RemoteScorer remote(srv.url("/score"));
    SearchReport r = synthesize(item.spec, remote, SearchConfig{});
    REQUIRE(r.found);
    CHECK(r.states_explored == item.ceiling());
  }
}

TEST_CASE("transport failures become scorer errors") {
  int port = 0;
  {
    TestServer srv([](httplib::Server&) {});
    port = srv.port();
  }
  RemoteScorer remote("http://127.0.0.1:" + std::to_string(port) + "/score", 500);
  Specification spec = load_specification(rftest::data_path("son_of/spec_path.json"), nullptr);
  CHECK_THROWS_AS(synthesize(spec, remote, SearchConfig{}), ScorerError);

  TestServer bad([](httplib::Server& s) {
    s.Post("/score", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"scores": [1]})", "application/json");
    });
    s.Post("/500", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  });
  CHECK_THROWS_AS(synthesize(spec, RemoteScorer(bad.url("/score")), SearchConfig{}), ScorerError);
  CHECK_THROWS_AS(synthesize(spec, RemoteScorer(bad.url("/500")), SearchConfig{}), ScorerError);
}

TEST_CASE("remote scorer failures surface as 502 from the service") {
  int port = 0;
  {
    TestServer srv([](httplib::Server&) {});
    port = srv.port();
  }
  AppConfig c;
  c.remote_url = "http://127.0.0.1:" + std::to_string(port) + "/score";
  c.remote_timeout_ms = 500;
  Service svc(load_corpus(rftest::data_path("son_of/corpus.jsonl")), nullptr, c);
  TestServer srv([&](httplib::Server& s) { svc.mount(s); });
  json body = {{"spec", path_spec_json()}, {"scorer", "remote"}};
  auto res = srv.client().Post("/api/synthesize", body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 502);
}
