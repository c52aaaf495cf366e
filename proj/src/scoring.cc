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

#include "ruleforge/scoring.h"

#include "ruleforge/matcher.h"

namespace ruleforge {

std::vector<double> Scorer::score_batch(const State& current,
                                        std::span<const State> candidates,
                                        const SpecEntry& entry) const {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const State& c : candidates) out.push_back(score_transition(current, c, entry));
  return out;
}

double score_transition_multi(const Scorer& scorer, const State& current,
                              const State& candidate, const Specification& spec) {
  return score_transition_multi(scorer, current, std::span<const State>(&candidate, 1), spec)
      .front();
}

std::vector<double> score_transition_multi(const Scorer& scorer, const State& current,
                                           std::span<const State> candidates,
                                           const Specification& spec) {
  std::vector<double> total(candidates.size(), 0.0);
  if (spec.entries.empty()) return total;
  for (const SpecEntry& e : spec.entries) {
    const std::vector<double> s = scorer.score_batch(current, candidates, e);
    if (s.size() != candidates.size()) {
      throw ScorerError("scorer returned " + std::to_string(s.size()) + " scores for " +
                        std::to_string(candidates.size()) + " candidates");
    }
    for (std::size_t i = 0; i < s.size(); ++i) total[i] += s[i];
  }
  for (double& t : total) t /= static_cast<double>(spec.entries.size());
  return total;
}

double StaticScorer::score_transition(const State&, const State& candidate,
                                      const SpecEntry&) const {
  return -static_cost(*candidate.pattern, costs_);
}

PatternPtr strip_incomplete(const PatternPtr& p) {
  if (p->complete()) return p;
  if (p->kind() != Pattern::Kind::kConcat) return nullptr;
  std::vector<PatternPtr> prefix;
  for (const PatternPtr& item : concat_items(p)) {
    if (!item->complete()) break;
    prefix.push_back(item);
  }
  if (prefix.empty()) return nullptr;
  return concat_of(prefix);
}

int augmentation_reward(const State& state, const SpecEntry& entry) {
  const PatternPtr stripped = strip_incomplete(state.pattern);
  if (!stripped) return 0;
  int reward = 0;
  for (const Span& m : find_matches(*stripped, *entry.sentence)) {
    for (int i = m.start; i < m.end; ++i) reward += entry.highlighted(i) ? 1 : -1;
  }
  return reward;
}

double AugmentedStaticScorer::score_transition(const State&, const State& candidate,
                                               const SpecEntry& entry) const {
  return -static_cost(*candidate.pattern, costs_) +
         lambda_ * augmentation_reward(candidate, entry);
}

}  // namespace ruleforge
