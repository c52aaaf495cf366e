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

// Scorer that delegates to an HTTP endpoint, so that an external model can
// guide search. One request per sibling batch:
//   POST <url>  {"current": "<rule>", "candidates": ["<rule>", ...],
//                "entry": {"sentence": {...}, "selections": [[s, e], ...]}}
//   200         {"scores": [number, ...]}  (one per candidate)

#ifndef RULEFORGE_REMOTE_H_
#define RULEFORGE_REMOTE_H_

#include <memory>
#include <string>

#include "json.hpp"
#include "ruleforge/scoring.h"

namespace ruleforge {

class RemoteScorer : public Scorer {
 public:
  // `url` is http://host[:port][/path]. Transport failures, non-200 replies
  // and malformed bodies raise ScorerError.
  explicit RemoteScorer(const std::string& url, int timeout_ms = 10000);
  ~RemoteScorer() override;

  double score_transition(const State& current, const State& candidate,
                          const SpecEntry& entry) const override;
  std::vector<double> score_batch(const State& current, std::span<const State> candidates,
                                  const SpecEntry& entry) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

nlohmann::json scoring_request(const State& current, std::span<const State> candidates,
                               const SpecEntry& entry);

// Server side of the protocol: answers a request with `scorer`.
nlohmann::json answer_scoring_request(const Scorer& scorer, const nlohmann::json& request);

}  // namespace ruleforge

#endif  // RULEFORGE_REMOTE_H_
