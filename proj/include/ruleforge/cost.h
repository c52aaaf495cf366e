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

#ifndef RULEFORGE_COST_H_
#define RULEFORGE_COST_H_

#include <array>
#include <cstdint>
#include <string_view>

#include "json.hpp"
#include "ruleforge/pattern.h"

namespace ruleforge {

enum class CostKey : std::uint8_t {
  kConcat,
  kToken,
  kAlternation,
  kOptional,    // ?
  kStar,        // *
  kPlus,        // +
  kNot,
  kAnd,
  kOr,
  kWildcard,
  kHole,
};
inline constexpr int kNumCostKeys = 11;

std::string_view cost_key_name(CostKey k);

// Per-node prices for the static scorer. Negation must cost more than any
// field constraint.
struct CostTable {
  std::array<double, kNumCostKeys> node{};
  std::array<double, kNumFields> field{};

  static CostTable defaults();

  double operator[](CostKey k) const { return node[static_cast<int>(k)]; }
  double of(Field f) const { return field[static_cast<int>(f)]; }
  double of(Quantifier q) const;

  // Throws std::invalid_argument.
  void validate() const;
};

// Overrides from {"costs": {"not": 5.0, "word": 1.0, ...}}; unknown keys throw.
CostTable cost_table_from_json(const nlohmann::json& j,
                               CostTable base = CostTable::defaults());

double static_cost(const Pattern& p, const CostTable& costs);
double static_cost(const Constraint& c, const CostTable& costs);

}  // namespace ruleforge

#endif  // RULEFORGE_COST_H_
