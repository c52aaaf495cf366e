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

#include "ruleforge/search.h"

#include <cmath>
#include <limits>
#include <queue>

#include "ruleforge/grammar.h"
#include "ruleforge/matcher.h"

namespace ruleforge {

nlohmann::json to_json(const TraceEvent& e) {
  return {{"step", e.step}, {"state", e.state}, {"score", e.score}};
}

nlohmann::json to_json(const SearchReport& r, const Specification& spec) {
  nlohmann::json matches = nlohmann::json::array();
  if (r.rule) {
    for (const SpecEntry& e : spec.entries) {
      nlohmann::json spans = nlohmann::json::array();
      for (const Span& s : find_matches(*r.rule, *e.sentence)) {
        spans.push_back(nlohmann::json::array({s.start, s.end}));
      }
      matches.push_back(std::move(spans));
    }
  }
  return {{"found", r.found},
          {"rule", r.rule ? nlohmann::json(print(r.rule)) : nlohmann::json(nullptr)},
          {"statesExplored", r.states_explored},
          {"statesPruned", r.states_pruned},
          {"queuePeak", r.queue_peak},
          {"matches", std::move(matches)}};
}

namespace {

struct Queued {
  double score;
  std::uint64_t seq;
  State state;
};

struct Lower {
  bool operator()(const Queued& a, const Queued& b) const {
    if (a.score != b.score) return a.score < b.score;
    return a.seq > b.seq;  // earlier insertion wins ties
  }
};

}  // namespace

SearchReport synthesize(const Specification& spec, const Scorer& scorer,
                        const SearchConfig& config, const TraceSink& sink) {
  validate(spec);
  if (config.max_states < 1) throw std::invalid_argument("max_states must be >= 1");
  const Vocabulary vocab(spec);

  SearchReport report;
  std::priority_queue<Queued, std::vector<Queued>, Lower> queue;
  std::uint64_t seq = 0;
  queue.push({0.0, seq++, State::root(config.costs)});
  report.queue_peak = 1;
  int pops = 0;

  while (!queue.empty() && report.states_explored < config.max_states) {
    Queued top = queue.top();
    queue.pop();
    ++pops;
    if (config.record_trace || sink) {
      TraceEvent ev{pops, print(top.state.pattern), top.score,
                    queue.empty() ? -std::numeric_limits<double>::infinity()
                                  : queue.top().score};
      if (sink) sink(ev);
      if (config.record_trace) report.trace.push_back(std::move(ev));
    }

    const State& state = top.state;
    if (state.pattern->complete()) {
      if (check_spec(*state.pattern, spec)) {
        report.found = true;
        report.rule = state.pattern;
        return report;
      }
      ++report.states_explored;
      continue;
    }
    ++report.states_explored;

    std::vector<State> children = expansions(state, vocab, config.costs);
    if (config.pruning) {
      std::vector<State> kept;
      kept.reserve(children.size());
      for (State& c : children) {
        if (prune_check(c, spec)) {
          ++report.states_pruned;
        } else {
          kept.push_back(std::move(c));
        }
      }
      children = std::move(kept);
    }
    if (children.empty()) continue;

    std::vector<double> scores;
    try {
      scores = score_transition_multi(scorer, state, children, spec);
    } catch (const std::exception& e) {
      throw ScorerError("scorer failed on state '" + print(state.pattern) + "': " + e.what());
    }
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (std::isnan(scores[i])) {
        throw ScorerError("scorer returned NaN for '" + print(children[i].pattern) + "'");
      }
      queue.push({scores[i], seq++, std::move(children[i])});
    }
    report.queue_peak = std::max(report.queue_peak, queue.size());
  }
  return report;
}

}  // namespace ruleforge
