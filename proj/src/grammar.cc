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

#include "ruleforge/grammar.h"

#include <set>
#include <stdexcept>

namespace ruleforge {

State State::root(const CostTable& costs) {
  return State{Pattern::hole(), costs[CostKey::kHole], 0};
}

State State::of(PatternPtr pattern, const CostTable& costs) {
  const double cost = ruleforge::static_cost(*pattern, costs);
  return State{std::move(pattern), cost, 0};
}

Vocabulary::Vocabulary(const Specification& spec) {
  for (Field f : kAllFields) {
    std::set<std::string> seen;
    for (const SpecEntry& e : spec.entries) {
      for (const Span& span : e.selections) {
        for (int i = span.start; i < span.end; ++i) {
          const std::string& v = e.sentence->tokens[i].get(f);
          if (seen.insert(v).second) values_.emplace_back(f, v);
        }
      }
    }
  }
}

bool Vocabulary::contains(Field f, const std::string& value) const {
  for (const auto& [field, v] : values_) {
    if (field == f && v == value) return true;
  }
  return false;
}

std::vector<State> expansions(const State& state, const Vocabulary& vocab,
                              const CostTable& costs) {
  const auto site = leftmost_hole(*state.pattern);
  if (!site) throw std::invalid_argument("no hole to expand");
  const double hole = costs[CostKey::kHole];
  // Cost of the parent with the expanded hole removed.
  const double base = state.static_cost - hole;
  std::vector<State> out;
  auto push_pattern = [&](PatternPtr node, double node_cost) {
    out.push_back(State{replace_at(state.pattern, site->path, node), base + node_cost,
                        state.depth + 1});
  };
  auto push_constraint = [&](ConstraintPtr node, double node_cost) {
    out.push_back(State{replace_at(state.pattern, site->path, node), base + node_cost,
                        state.depth + 1});
  };

  const PatternPtr h = Pattern::hole();
  const ConstraintPtr ch = Constraint::hole();
  if (site->level == HoleLevel::kPattern) {
    out.reserve(6);
    push_pattern(Pattern::concat(h, h), costs[CostKey::kConcat] + 2 * hole);
    push_pattern(Pattern::token(ch), costs[CostKey::kToken] + hole);
    push_pattern(Pattern::alternation(h, h), costs[CostKey::kAlternation] + 2 * hole);
    if (!site->under_quantifier) {
      for (Quantifier q :
           {Quantifier::kZeroOrOne, Quantifier::kZeroOrMore, Quantifier::kOneOrMore}) {
        push_pattern(Pattern::quantified(h, q), costs.of(q) + hole);
      }
    }
    return out;
  }

  out.reserve(vocab.values().size() + 4);
  push_constraint(Constraint::wildcard(), costs[CostKey::kWildcard]);
  for (const auto& [field, value] : vocab.values()) {
    push_constraint(Constraint::field_is(field, value), costs.of(field));
  }
  if (!site->under_not) push_constraint(Constraint::negate(ch), costs[CostKey::kNot] + hole);
  push_constraint(Constraint::conj(ch, ch), costs[CostKey::kAnd] + 2 * hole);
  push_constraint(Constraint::disj(ch, ch), costs[CostKey::kOr] + 2 * hole);
  return out;
}

std::vector<State> expansions(const State& state, const Specification& spec,
                              const CostTable& costs) {
  return expansions(state, Vocabulary(spec), costs);
}

std::string introduced_symbol(const Pattern& current, const Pattern& candidate) {
  const auto site = leftmost_hole(current);
  if (!site) return "NONE";
  // Aliasing constructor: a non-owning handle onto the caller's node.
  const PatternPtr root(std::shared_ptr<const Pattern>(), &candidate);
  try {
    if (site->level == HoleLevel::kPattern) {
      const PatternPtr node = pattern_at(root, site->path);
      switch (node->kind()) {
        case Pattern::Kind::kHole: return "HOLE";
        case Pattern::Kind::kToken: return "TOKEN";
        case Pattern::Kind::kConcat: return "CONCAT";
        case Pattern::Kind::kAlternation: return "ALT";
        case Pattern::Kind::kQuantified:
          return std::string("QUANT=") + quantifier_symbol(node->quantifier());
      }
    }
    const ConstraintPtr c = constraint_at(root, site->path);
    switch (c->kind()) {
      case Constraint::Kind::kHole: return "HOLE";
      case Constraint::Kind::kWildcard: return "WILDCARD";
      case Constraint::Kind::kFieldIs:
        return "FIELD=" + std::string(field_name(c->field())) + "|VAL=" + c->value();
      case Constraint::Kind::kNot: return "NOT";
      case Constraint::Kind::kAnd: return "AND";
      case Constraint::Kind::kOr: return "OR";
    }
  } catch (const std::invalid_argument&) {
  }
  return "NONE";
}

}  // namespace ruleforge
