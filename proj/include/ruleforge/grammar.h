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

// The expansion grammar that drives search. Only the leftmost hole is ever
// expanded, so every rule has exactly one derivation from the bare hole.

#ifndef RULEFORGE_GRAMMAR_H_
#define RULEFORGE_GRAMMAR_H_

#include <string>
#include <utility>
#include <vector>

#include "ruleforge/corpus.h"
#include "ruleforge/cost.h"
#include "ruleforge/pattern.h"

namespace ruleforge {

struct State {
  PatternPtr pattern;
  // Equals static_cost(pattern) under the table used to build the state.
  double static_cost = 0.0;
  int depth = 0;

  static State root(const CostTable& costs = CostTable::defaults());
  static State of(PatternPtr pattern, const CostTable& costs = CostTable::defaults());
};

// Field values seen in highlighted tokens: fields in Word < Lemma < Tag <
// Entity order, values in order of first occurrence.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(const Specification& spec);

  const std::vector<std::pair<Field, std::string>>& values() const { return values_; }
  bool contains(Field f, const std::string& value) const;

 private:
  std::vector<std::pair<Field, std::string>> values_;
};

// Single-step expansions of the leftmost hole, in grammar order:
//   pattern hole:    HOLE HOLE, [HOLE], HOLE|HOLE, HOLE?, HOLE*, HOLE+
//   constraint hole: [], field=value..., !HOLE, HOLE & HOLE, HOLE | HOLE
// A quantifier's direct child never becomes a quantifier and a negation's
// direct child never becomes a negation. Throws std::invalid_argument when
// the state is complete.
std::vector<State> expansions(const State& state, const Vocabulary& vocab,
                              const CostTable& costs = CostTable::defaults());
std::vector<State> expansions(const State& state, const Specification& spec,
                              const CostTable& costs = CostTable::defaults());

// Symbol of the node that `candidate` introduces at `current`'s leftmost
// hole, e.g. CONCAT, TOKEN, QUANT=*, FIELD=word|VAL=dog.
std::string introduced_symbol(const Pattern& current, const Pattern& candidate);

}  // namespace ruleforge

#endif  // RULEFORGE_GRAMMAR_H_
