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

#include "ruleforge/matcher.h"

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "ruleforge/grammar.h"

namespace ruleforge {

namespace {

// Set of token boundaries 0..n.
class PositionSet {
 public:
  explicit PositionSet(int n) : words_(static_cast<std::size_t>(n / 64 + 1), 0) {}

  void insert(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool contains(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  bool empty() const {
    for (std::uint64_t w : words_) {
      if (w) return false;
    }
    return true;
  }

  PositionSet& operator|=(const PositionSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }

  // Removes every member of `o`.
  void subtract(const PositionSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
  }

  int max() const {
    for (std::size_t k = words_.size(); k-- > 0;) {
      if (words_[k]) return static_cast<int>(k * 64) + 63 - std::countl_zero(words_[k]);
    }
    return -1;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        const int bit = std::countr_zero(w);
        fn(static_cast<int>(k * 64) + bit);
        w &= w - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

class Runner {
 public:
  // Tokens at or beyond `limit` are never consumed.
  Runner(const AnnotatedSentence& s, int limit) : s_(s), limit_(limit) {}

  PositionSet advance(const Pattern& p, const PositionSet& from) const {
    PositionSet out(limit_);
    if (from.empty()) return out;
    switch (p.kind()) {
      case Pattern::Kind::kHole:
        throw std::invalid_argument("cannot match a pattern with holes");
      case Pattern::Kind::kToken: {
        const Constraint& c = *p.constraint();
        from.for_each([&](int i) {
          if (i < limit_ && satisfies(c, s_.tokens[i])) out.insert(i + 1);
        });
        return out;
      }
      case Pattern::Kind::kConcat:
        return advance(*p.right(), advance(*p.left(), from));
      case Pattern::Kind::kAlternation:
        out = advance(*p.left(), from);
        out |= advance(*p.right(), from);
        return out;
      case Pattern::Kind::kQuantified: {
        const Pattern& child = *p.left();
        switch (p.quantifier()) {
          case Quantifier::kZeroOrOne:
            out = advance(child, from);
            out |= from;
            return out;
          case Quantifier::kZeroOrMore:
            return closure(child, from);
          case Quantifier::kOneOrMore:
            return closure(child, advance(child, from));
        }
      }
    }
    return out;
  }

 private:
  // Positions reachable by zero or more further repetitions of `child`.
  // A repetition that consumes nothing lands on an already reached position
  // and is dropped, so the loop ends once no new position appears.
  PositionSet closure(const Pattern& child, const PositionSet& from) const {
    PositionSet reached = from;
    PositionSet frontier = from;
    while (!frontier.empty()) {
      PositionSet next = advance(child, frontier);
      next.subtract(reached);
      reached |= next;
      frontier = std::move(next);
    }
    return reached;
  }

  const AnnotatedSentence& s_;
  int limit_;
};

}  // namespace

bool satisfies(const Constraint& c, const Token& t) {
  switch (c.kind()) {
    case Constraint::Kind::kHole:
      throw std::invalid_argument("cannot match a constraint with holes");
    case Constraint::Kind::kWildcard:
      return true;
    case Constraint::Kind::kFieldIs:
      return t.get(c.field()) == c.value();
    case Constraint::Kind::kNot:
      return !satisfies(*c.left(), t);
    case Constraint::Kind::kAnd:
      return satisfies(*c.left(), t) && satisfies(*c.right(), t);
    case Constraint::Kind::kOr:
      return satisfies(*c.left(), t) || satisfies(*c.right(), t);
  }
  return false;
}

bool matches_exact(const Pattern& p, const AnnotatedSentence& s, Span span) {
  if (!p.complete()) throw std::invalid_argument("cannot match a pattern with holes");
  if (span.start < 0 || span.start > span.end || span.end > s.size()) {
    throw std::invalid_argument("span out of range");
  }
  Runner runner(s, span.end);
  PositionSet from(span.end);
  from.insert(span.start);
  return runner.advance(p, from).contains(span.end);
}

std::vector<int> match_ends(const Pattern& p, const AnnotatedSentence& s, int start) {
  if (!p.complete()) throw std::invalid_argument("cannot match a pattern with holes");
  Runner runner(s, s.size());
  PositionSet from(s.size());
  from.insert(start);
  std::vector<int> ends;
  runner.advance(p, from).for_each([&](int j) { ends.push_back(j); });
  return ends;
}

std::vector<Span> find_matches(const Pattern& p, const AnnotatedSentence& s) {
  if (!p.complete()) throw std::invalid_argument("cannot match a pattern with holes");
  const int n = s.size();
  Runner runner(s, n);
  std::vector<Span> spans;
  int i = 0;
  while (i < n) {
    PositionSet from(n);
    from.insert(i);
    const int j = runner.advance(p, from).max();
    if (j > i) {
      spans.push_back({i, j});
      i = j;
    } else {
      ++i;
    }
  }
  return spans;
}

bool check_entry(const Pattern& p, const SpecEntry& e) {
  return find_matches(p, *e.sentence) == e.selections;
}

bool check_spec(const Pattern& p, const Specification& spec) {
  for (const SpecEntry& e : spec.entries) {
    if (!check_entry(p, e)) return false;
  }
  return true;
}

namespace {

ConstraintPtr complete_constraint(const ConstraintPtr& c) {
  if (c->holes() == 0) return c;
  switch (c->kind()) {
    case Constraint::Kind::kHole:
      return Constraint::wildcard();
    case Constraint::Kind::kNot:
      // The hole inside may still turn the negated test false everywhere,
      // so the loosest reading of the negation is "any token".
      return Constraint::wildcard();
    case Constraint::Kind::kAnd:
      return Constraint::conj(complete_constraint(c->left()), complete_constraint(c->right()));
    case Constraint::Kind::kOr:
      return Constraint::disj(complete_constraint(c->left()), complete_constraint(c->right()));
    default:
      return c;
  }
}

PatternPtr any_sequence() {
  static const PatternPtr p =
      Pattern::quantified(Pattern::token(Constraint::wildcard()), Quantifier::kZeroOrMore);
  return p;
}

}  // namespace

PatternPtr least_restrictive_completion(const PatternPtr& p) {
  if (p->complete()) return p;
  switch (p->kind()) {
    case Pattern::Kind::kHole:
      return any_sequence();
    case Pattern::Kind::kToken:
      return Pattern::token(complete_constraint(p->constraint()));
    case Pattern::Kind::kConcat:
      return Pattern::concat(least_restrictive_completion(p->left()),
                             least_restrictive_completion(p->right()));
    case Pattern::Kind::kAlternation:
      return Pattern::alternation(least_restrictive_completion(p->left()),
                                  least_restrictive_completion(p->right()));
    case Pattern::Kind::kQuantified: {
      PatternPtr child = least_restrictive_completion(p->left());
      // HOLE? / HOLE* / HOLE+ all loosen to []*.
      if (child->kind() == Pattern::Kind::kQuantified) return child;
      return Pattern::quantified(std::move(child), p->quantifier());
    }
  }
  return p;
}

bool prune_check(const PatternPtr& p, const Specification& spec) {
  const PatternPtr loosest = least_restrictive_completion(p);
  for (const SpecEntry& e : spec.entries) {
    for (const Span& span : e.selections) {
      if (!matches_exact(*loosest, *e.sentence, span)) return true;
    }
  }
  return false;
}

bool prune_check(const State& state, const Specification& spec) {
  return prune_check(state.pattern, spec);
}

}  // namespace ruleforge
