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

#include "ruleforge/service.h"

#include <algorithm>
#include <string>
#include <utility>

#include "httplib.h"
#include "ruleforge/matcher.h"
#include "ruleforge/scoring.h"
#include "ruleforge/text.h"

namespace ruleforge {

using nlohmann::json;

void JobGate::acquire() {
  std::unique_lock<std::mutex> lock(mu_);
  const std::uint64_t ticket = next_ticket_++;
  cv_.wait(lock, [&] { return ticket == serving_ && active_ < limit_; });
  ++serving_;
  ++active_;
  cv_.notify_all();
}

void JobGate::release() {
  std::lock_guard<std::mutex> lock(mu_);
  --active_;
  cv_.notify_all();
}

int JobGate::active() const {
  std::lock_guard<std::mutex> lock(mu_);
  return active_;
}

namespace {

// A request that cannot be served as asked.
struct BadRequest {
  std::string error;
  json location;
};

std::string error_location(const std::string& message) {
  const auto colon = message.find(": ");
  return colon == std::string::npos ? std::string() : message.substr(0, colon);
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs `body`, mapping library errors to HTTP replies.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& body) {
  try {
    body();
  } catch (const BadRequest& e) {
    send_json(res, {{"error", e.error}, {"location", e.location}}, 400);
  } catch (const ParseError& e) {
    send_json(res, {{"error", e.what()}, {"location", {{"offset", e.offset()}}}}, 400);
  } catch (const DataError& e) {
    send_json(res, {{"error", e.what()}, {"location", error_location(e.what())}}, 400);
  } catch (const json::exception& e) {
    send_json(res, {{"error", e.what()}, {"location", "body"}}, 400);
  } catch (const ScorerError& e) {
    send_json(res, {{"error", e.what()}, {"location", "scorer"}}, 502);
  } catch (const std::invalid_argument& e) {
    send_json(res, {{"error", e.what()}, {"location", ""}}, 400);
  }
}

json parse_body(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw BadRequest{"request body must be a JSON object", "body"};
    return j;
  } catch (const json::parse_error& e) {
    throw BadRequest{std::string("invalid JSON: ") + e.what(), {{"offset", e.byte}}};
  }
}

json spans_json(const std::vector<Span>& spans) {
  json out = json::array();
  for (const Span& s : spans) out.push_back(json::array({s.start, s.end}));
  return out;
}

}  // namespace

Service::Service(Corpus corpus, std::shared_ptr<const ScorerModel> model, AppConfig config)
    : corpus_(std::move(corpus)),
      index_(corpus_),
      model_(std::move(model)),
      config_(std::move(config)),
      gate_(config_.max_jobs) {}

void Service::mount(httplib::Server& server) {
  server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, {{"status", "ok"},
                    {"modelLoaded", model_ != nullptr},
                    {"corpusSize", corpus_.size()}});
  });

  server.Post("/api/synthesize", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      if (!body.contains("spec")) throw BadRequest{"missing field 'spec'", "spec"};
      auto spec = std::make_shared<Specification>(spec_from_json(body.at("spec"), &index_));
      AppConfig config = config_;
      if (body.contains("maxStates")) {
        config.max_states = body.at("maxStates").get<int>();
        if (config.max_states < 1) throw BadRequest{"maxStates must be positive", "maxStates"};
      }
      const std::string name = body.value("scorer", std::string("augmented"));
      std::shared_ptr<const Scorer> scorer;
      try {
        scorer = make_scorer(name, config, model_);
      } catch (const DataError& e) {
        throw BadRequest{e.what(), "scorer"};
      }
      if (!body.value("trace", false)) {
        JobSlot slot(gate_);
        send_json(res, run_synthesis(*spec, *scorer, config));
        return;
      }
      res.status = 200;
      res.set_chunked_content_provider(
          "application/x-ndjson",
          [this, spec, scorer, config](std::size_t, httplib::DataSink& sink) {
            JobSlot slot(gate_);
            auto write = [&](const json& j) {
              const std::string line = j.dump() + "\n";
              sink.write(line.data(), line.size());
            };
            try {
              const json report = run_synthesis(
                  *spec, *scorer, config, [&](const TraceEvent& e) { write(to_json(e)); });
              write(report);
            } catch (const std::exception& e) {
              write({{"error", e.what()}, {"location", "scorer"}});
            }
            sink.done();
            return true;
          });
    });
  });

  server.Post("/api/match", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      const PatternPtr rule = parse(body.at("rule").get<std::string>());
      if (!rule->complete()) throw BadRequest{"rule has holes", "rule"};
      json results = json::array();
      auto add = [&](const SentencePtr& s) {
        results.push_back({{"id", s->id}, {"spans", spans_json(find_matches(*rule, *s))}});
      };
      const json& list = body.contains("sentences") ? body.at("sentences") : body.at("ids");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "sentences[" + std::to_string(i) + "]";
        if (list[i].is_string()) {
          SentencePtr s = index_.find(list[i].get<std::string>());
          if (!s) throw BadRequest{"unknown sentence id " + list[i].dump(), where};
          add(s);
        } else {
          try {
            auto s = std::make_shared<AnnotatedSentence>(sentence_from_json(list[i]));
            add(s);
          } catch (const DataError& e) {
            throw BadRequest{e.what(), where};
          }
        }
      }
      send_json(res, {{"rule", print(rule)}, {"results", std::move(results)}});
    });
  });

  server.Get("/api/corpus", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto number = [&](const char* key, long fallback) {
        if (!req.has_param(key)) return fallback;
        try {
          return std::max(0L, std::stol(req.get_param_value(key)));
        } catch (const std::exception&) {
          throw BadRequest{std::string("parameter '") + key + "' must be a number", key};
        }
      };
      const auto limit = static_cast<std::size_t>(number("limit", 20));
      const auto offset = static_cast<std::size_t>(number("offset", 0));
      const std::string q = to_lower(req.get_param_value("q"));
      PatternPtr rule;
      if (req.has_param("rule")) {
        rule = parse(req.get_param_value("rule"));
        if (!rule->complete()) throw BadRequest{"rule has holes", "rule"};
      }
      json sentences = json::array();
      std::size_t total = 0;
      for (const SentencePtr& s : corpus_) {
        if (!q.empty() && to_lower(s->text()).find(q) == std::string::npos &&
            to_lower(s->id) != q) {
          continue;
        }
        std::vector<Span> spans;
        if (rule) {
          spans = find_matches(*rule, *s);
          if (spans.empty()) continue;
        }
        if (total++ < offset || sentences.size() >= limit) continue;
        sentences.push_back({{"sentence", to_json(*s)}, {"matches", spans_json(spans)}});
      }
      send_json(res, {{"total", total}, {"sentences", std::move(sentences)}});
    });
  });

  server.Post("/api/parse", [](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      const PatternPtr rule = parse(body.at("rule").get<std::string>());
      send_json(res, {{"rule", print(rule)},
                      {"complete", rule->complete()},
                      {"ast", linearize_ast(*rule)}});
    });
  });

  server.Post("/api/linearize", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      json entry = {{"sentence", body.at("sentence")}, {"pair", {{"subj", body.at("subj")},
                                                                 {"obj", body.at("obj")}}}};
      Specification spec =
          spec_from_json({{"mode", "path"}, {"entries", json::array({entry})}}, &index_);
      send_json(res, {{"sentence", to_json(*spec.entries.front().sentence)}});
    });
  });
}

bool serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  return server.listen(host, port);
}

}  // namespace ruleforge
