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

// Scorers rank candidate next states during search. Every scorer is a pure
// function of (current state, candidate state, one specification entry);
// multi-sentence specifications average the per-entry scores.

#ifndef RULEFORGE_SCORING_H_
#define RULEFORGE_SCORING_H_

#include <span>
#include <stdexcept>
#include <vector>

#include "ruleforge/corpus.h"
#include "ruleforge/cost.h"
#include "ruleforge/grammar.h"

namespace ruleforge {

class ScorerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Scorer {
 public:
  virtual ~Scorer() = default;

  // Higher is better.
  virtual double score_transition(const State& current, const State& candidate,
                                  const SpecEntry& entry) const = 0;

  // Scores all siblings against one entry. The default loops over
  // score_transition; scorers with per-call overhead override it.
  virtual std::vector<double> score_batch(const State& current,
                                          std::span<const State> candidates,
                                          const SpecEntry& entry) const;
};

// Mean of the per-entry scores.
double score_transition_multi(const Scorer& scorer, const State& current,
                              const State& candidate, const Specification& spec);
std::vector<double> score_transition_multi(const Scorer& scorer, const State& current,
                                           std::span<const State> candidates,
                                           const Specification& spec);

// Score = -static_cost(candidate).
class StaticScorer : public Scorer {
 public:
  explicit StaticScorer(CostTable costs = CostTable::defaults()) : costs_(costs) {}

  double score_transition(const State& current, const State& candidate,
                          const SpecEntry& entry) const override;

  const CostTable& costs() const { return costs_; }

 private:
  CostTable costs_;
};

// Drops the parts of a partial rule that still hold a hole: keeps the
// longest hole-free prefix of the top-level concatenation. Returns null
// when nothing survives.
PatternPtr strip_incomplete(const PatternPtr& p);

// +1 for each matched token inside a selection, -1 for each matched token
// outside, using the stripped rule.
int augmentation_reward(const State& state, const SpecEntry& entry);

// Score = -static_cost(candidate) + lambda * augmentation_reward(candidate).
class AugmentedStaticScorer : public Scorer {
 public:
  explicit AugmentedStaticScorer(CostTable costs = CostTable::defaults(), double lambda = 1.0)
      : costs_(costs), lambda_(lambda) {}

  double score_transition(const State& current, const State& candidate,
                          const SpecEntry& entry) const override;

 private:
  CostTable costs_;
  double lambda_;
};

}  // namespace ruleforge

#endif  // RULEFORGE_SCORING_H_
