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

#include "ruleforge/remote.h"

#include <cmath>
#include <limits>
#include <regex>

#include "httplib.h"
#include "ruleforge/corpus.h"

namespace ruleforge {

using nlohmann::json;

struct RemoteScorer::Impl {
  std::string host;
  std::string path;
  int timeout_ms;
};

RemoteScorer::RemoteScorer(const std::string& url, int timeout_ms)
    : impl_(std::make_unique<Impl>()) {
  static const std::regex kUrl(R"(^(http://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    throw DataError("remote scorer URL must look like http://host[:port][/path]");
  }
  impl_->host = m[1];
  impl_->path = m[2].matched ? std::string(m[2]) : "/";
  impl_->timeout_ms = timeout_ms;
}

RemoteScorer::~RemoteScorer() = default;

json scoring_request(const State& current, std::span<const State> candidates,
                     const SpecEntry& entry) {
  json cands = json::array();
  for (const State& c : candidates) cands.push_back(print(c.pattern));
  return {{"current", print(current.pattern)},
          {"candidates", std::move(cands)},
          {"entry", to_json(entry)}};
}

double RemoteScorer::score_transition(const State& current, const State& candidate,
                                      const SpecEntry& entry) const {
  return score_batch(current, std::span<const State>(&candidate, 1), entry).front();
}

std::vector<double> RemoteScorer::score_batch(const State& current,
                                              std::span<const State> candidates,
                                              const SpecEntry& entry) const {
  httplib::Client client(impl_->host);
  const time_t sec = impl_->timeout_ms / 1000;
  const time_t usec = (impl_->timeout_ms % 1000) * 1000;
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  const std::string body = scoring_request(current, candidates, entry).dump();
  auto res = client.Post(impl_->path, body, "application/json");
  if (!res) {
    throw ScorerError("remote scorer transport error: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ScorerError("remote scorer replied with status " + std::to_string(res->status));
  }
  try {
    const json reply = json::parse(res->body);
    const json& scores = reply.at("scores");
    if (!scores.is_array() || scores.size() != candidates.size()) {
      throw ScorerError("remote scorer returned the wrong number of scores");
    }
    std::vector<double> out;
    for (const json& s : scores) out.push_back(s.get<double>());
    return out;
  } catch (const json::exception& e) {
    throw ScorerError(std::string("remote scorer sent a malformed reply: ") + e.what());
  }
}

json answer_scoring_request(const Scorer& scorer, const json& request) {
  try {
    Specification one = spec_from_json({{"entries", json::array({request.at("entry")})}}, nullptr);
    const SpecEntry& entry = one.entries.front();
    const State current = State::of(parse(request.at("current").get<std::string>()));
    std::vector<State> candidates;
    for (const json& c : request.at("candidates")) {
      candidates.push_back(State::of(parse(c.get<std::string>())));
    }
    json scores = json::array();
    for (double s : scorer.score_batch(current, candidates, entry)) {
      // JSON has no infinities; clamp to the largest finite values.
      if (std::isinf(s)) s = s > 0 ? std::numeric_limits<double>::max()
                                   : std::numeric_limits<double>::lowest();
      scores.push_back(s);
    }
    return {{"scores", std::move(scores)}};
  } catch (const json::exception& e) {
    throw DataError(std::string("scoring request: ") + e.what());
  }
}

}  // namespace ruleforge
