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

#include "ruleforge/cost.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ruleforge {

namespace {

constexpr std::string_view kCostKeyNames[kNumCostKeys] = {
    "concat", "token", "alternation", "optional", "star", "plus",
    "not",    "and",   "or",          "wildcard", "hole"};

}  // namespace

std::string_view cost_key_name(CostKey k) { return kCostKeyNames[static_cast<int>(k)]; }

CostTable CostTable::defaults() {
  CostTable t;
  t.node[static_cast<int>(CostKey::kHole)] = 1.0;
  t.node[static_cast<int>(CostKey::kToken)] = 1.0;
  t.node[static_cast<int>(CostKey::kConcat)] = 1.0;
  t.node[static_cast<int>(CostKey::kAlternation)] = 2.0;
  t.node[static_cast<int>(CostKey::kOptional)] = 2.0;
  t.node[static_cast<int>(CostKey::kStar)] = 3.0;
  t.node[static_cast<int>(CostKey::kPlus)] = 3.0;
  t.node[static_cast<int>(CostKey::kAnd)] = 2.0;
  t.node[static_cast<int>(CostKey::kOr)] = 2.0;
  t.node[static_cast<int>(CostKey::kNot)] = 5.0;
  t.node[static_cast<int>(CostKey::kWildcard)] = 4.0;
  t.field[static_cast<int>(Field::kWord)] = 1.0;
  t.field[static_cast<int>(Field::kLemma)] = 1.2;
  t.field[static_cast<int>(Field::kTag)] = 1.5;
  t.field[static_cast<int>(Field::kEntity)] = 1.5;
  return t;
}

double CostTable::of(Quantifier q) const {
  switch (q) {
    case Quantifier::kZeroOrOne: return (*this)[CostKey::kOptional];
    case Quantifier::kZeroOrMore: return (*this)[CostKey::kStar];
    case Quantifier::kOneOrMore: return (*this)[CostKey::kPlus];
  }
  return 0.0;
}

void CostTable::validate() const {
  for (double c : node) {
    if (!(c >= 0.0)) throw std::invalid_argument("costs must be non-negative");
  }
  for (double c : field) {
    if (!(c >= 0.0)) throw std::invalid_argument("costs must be non-negative");
  }
  if ((*this)[CostKey::kNot] <= *std::max_element(field.begin(), field.end())) {
    throw std::invalid_argument("negation must cost more than any field constraint");
  }
}

CostTable cost_table_from_json(const nlohmann::json& j, CostTable base) {
  const nlohmann::json& costs = j.contains("costs") ? j.at("costs") : j;
  if (!costs.is_object()) throw std::invalid_argument("'costs' must be an object");
  for (const auto& [key, value] : costs.items()) {
    if (!value.is_number()) throw std::invalid_argument("cost '" + key + "' must be a number");
    const double v = value.get<double>();
    bool known = false;
    for (int k = 0; k < kNumCostKeys; ++k) {
      if (kCostKeyNames[k] == key) {
        base.node[k] = v;
        known = true;
      }
    }
    if (auto f = field_from_name(key)) {
      base.field[static_cast<int>(*f)] = v;
      known = true;
    }
    if (!known) throw std::invalid_argument("unknown cost key '" + key + "'");
  }
  base.validate();
  return base;
}

double static_cost(const Constraint& c, const CostTable& costs) {
  switch (c.kind()) {
    case Constraint::Kind::kHole:
      return costs[CostKey::kHole];
    case Constraint::Kind::kWildcard:
      return costs[CostKey::kWildcard];
    case Constraint::Kind::kFieldIs:
      return costs.of(c.field());
    case Constraint::Kind::kNot:
      return costs[CostKey::kNot] + static_cost(*c.left(), costs);
    case Constraint::Kind::kAnd:
      return costs[CostKey::kAnd] + static_cost(*c.left(), costs) +
             static_cost(*c.right(), costs);
    case Constraint::Kind::kOr:
      return costs[CostKey::kOr] + static_cost(*c.left(), costs) +
             static_cost(*c.right(), costs);
  }
  return 0.0;
}

double static_cost(const Pattern& p, const CostTable& costs) {
  switch (p.kind()) {
    case Pattern::Kind::kHole:
      return costs[CostKey::kHole];
    case Pattern::Kind::kToken:
      return costs[CostKey::kToken] + static_cost(*p.constraint(), costs);
    case Pattern::Kind::kConcat:
      return costs[CostKey::kConcat] + static_cost(*p.left(), costs) +
             static_cost(*p.right(), costs);
    case Pattern::Kind::kAlternation:
      return costs[CostKey::kAlternation] + static_cost(*p.left(), costs) +
             static_cost(*p.right(), costs);
    case Pattern::Kind::kQuantified:
      return costs.of(p.quantifier()) + static_cost(*p.left(), costs);
  }
  return 0.0;
}

}  // namespace ruleforge
