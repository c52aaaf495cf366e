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

// The rule language: a token-sequence pattern AST with placeholders
// ("holes") at two levels. Pattern-level holes stand for any sub-pattern,
// constraint-level holes for any single-token predicate.
//
// Nodes are immutable and shared; every edit produces a new root that reuses
// the untouched subtrees.

#ifndef RULEFORGE_PATTERN_H_
#define RULEFORGE_PATTERN_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ruleforge {

enum class Field : std::uint8_t { kWord = 0, kLemma = 1, kTag = 2, kEntity = 3 };
inline constexpr int kNumFields = 4;
inline constexpr Field kAllFields[kNumFields] = {Field::kWord, Field::kLemma,
                                                 Field::kTag, Field::kEntity};

std::string_view field_name(Field f);
std::optional<Field> field_from_name(std::string_view name);

enum class Quantifier : std::uint8_t { kZeroOrOne, kZeroOrMore, kOneOrMore };

char quantifier_symbol(Quantifier q);

class Constraint;
using ConstraintPtr = std::shared_ptr<const Constraint>;

class Constraint {
 public:
  enum class Kind : std::uint8_t { kHole, kWildcard, kFieldIs, kNot, kAnd, kOr };

  static ConstraintPtr hole();
  static ConstraintPtr wildcard();
  // `value` is lowercased; it must be non-empty.
  static ConstraintPtr field_is(Field field, std::string_view value);
  static ConstraintPtr negate(ConstraintPtr child);
  static ConstraintPtr conj(ConstraintPtr left, ConstraintPtr right);
  static ConstraintPtr disj(ConstraintPtr left, ConstraintPtr right);

  Kind kind() const { return kind_; }
  Field field() const { return field_; }
  const std::string& value() const { return value_; }
  // Not uses left() as its only child.
  const ConstraintPtr& left() const { return left_; }
  const ConstraintPtr& right() const { return right_; }

  int holes() const { return holes_; }
  int size() const { return size_; }

 private:
  Constraint(Kind kind, Field field, std::string value, ConstraintPtr left,
             ConstraintPtr right);

  Kind kind_;
  Field field_ = Field::kWord;
  std::string value_;
  ConstraintPtr left_;
  ConstraintPtr right_;
  int holes_ = 0;
  int size_ = 1;
};

class Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

class Pattern {
 public:
  enum class Kind : std::uint8_t { kHole, kToken, kConcat, kAlternation, kQuantified };

  static PatternPtr hole();
  static PatternPtr token(ConstraintPtr constraint);
  static PatternPtr concat(PatternPtr left, PatternPtr right);
  static PatternPtr alternation(PatternPtr left, PatternPtr right);
  // Throws std::invalid_argument when `child` is itself quantified.
  static PatternPtr quantified(PatternPtr child, Quantifier q);

  Kind kind() const { return kind_; }
  const ConstraintPtr& constraint() const { return constraint_; }
  // Quantified uses left() as its only child.
  const PatternPtr& left() const { return left_; }
  const PatternPtr& right() const { return right_; }
  Quantifier quantifier() const { return quantifier_; }

  // Holes at both levels.
  int holes() const { return holes_; }
  bool complete() const { return holes_ == 0; }
  // Node count across both levels.
  int size() const { return size_; }
  int token_patterns() const { return token_patterns_; }

 private:
  Pattern(Kind kind, ConstraintPtr constraint, PatternPtr left, PatternPtr right,
          Quantifier q);

  Kind kind_;
  ConstraintPtr constraint_;
  PatternPtr left_;
  PatternPtr right_;
  Quantifier quantifier_ = Quantifier::kZeroOrOne;
  int holes_ = 0;
  int size_ = 1;
  int token_patterns_ = 0;
};

bool equal(const Constraint& a, const Constraint& b);
bool equal(const Pattern& a, const Pattern& b);
inline bool equal(const PatternPtr& a, const PatternPtr& b) { return equal(*a, *b); }

// Rotates every Concat and Alternation chain into right-nested form, which
// is what parse() produces.
PatternPtr canonicalize(const PatternPtr& p);

// Child indices from the root: Concat/Alternation use 0/1, Quantified 0,
// Token 0 steps into its constraint, Not 0, And/Or 0/1.
using NodePath = std::vector<int>;

enum class HoleLevel : std::uint8_t { kPattern, kConstraint };

struct HoleSite {
  NodePath path;
  HoleLevel level = HoleLevel::kPattern;
  // Direct parent is a Quantified node (pattern level) or a Not (constraint
  // level); these hole positions may not expand to the same operator again.
  bool under_quantifier = false;
  bool under_not = false;
  // Index of the top-level concatenation item that holds the hole.
  int item_index = 0;
};

// First hole in pre-order, or nullopt for a complete pattern.
std::optional<HoleSite> leftmost_hole(const Pattern& p);

// Returns the node at `path`; path must stop at a pattern-level node.
PatternPtr pattern_at(const PatternPtr& root, std::span<const int> path);
// Returns the constraint reached by `path`, which must enter a Token.
ConstraintPtr constraint_at(const PatternPtr& root, std::span<const int> path);

// Replace the node at `path` (which must be a hole of the matching level).
PatternPtr replace_at(const PatternPtr& root, std::span<const int> path,
                      const PatternPtr& replacement);
PatternPtr replace_at(const PatternPtr& root, std::span<const int> path,
                      const ConstraintPtr& replacement);

// Flattens the top-level Concat chain into its items.
std::vector<PatternPtr> concat_items(const PatternPtr& p);
// Right-nested concatenation of `items`; items must be non-empty.
PatternPtr concat_of(std::span<const PatternPtr> items);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Surface syntax, e.g. `[entity=person] [word=son] ([tag=nn]|[lemma=be])?`.
// Empty brackets are the wildcard; HOLE is the placeholder at either level.
PatternPtr parse(std::string_view text);
std::string print(const Pattern& p);
inline std::string print(const PatternPtr& p) { return print(*p); }
std::string print(const Constraint& c);

// Pre-order symbol stream: node kinds, FIELD=<name>, VAL=<value>, HOLE.
std::vector<std::string> linearize_ast(const Pattern& p);

}  // namespace ruleforge

#endif  // RULEFORGE_PATTERN_H_
