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

// Pattern execution over annotated sentences.
//
// A pattern matches a span when it can consume exactly the span's tokens.
// Quantifier repetitions each consume at least one token, so patterns whose
// children accept the empty string still terminate.

#ifndef RULEFORGE_MATCHER_H_
#define RULEFORGE_MATCHER_H_

#include <vector>

#include "ruleforge/corpus.h"
#include "ruleforge/pattern.h"

namespace ruleforge {

struct State;

bool satisfies(const Constraint& c, const Token& t);

// Both ends anchored. Throws std::invalid_argument on holes.
bool matches_exact(const Pattern& p, const AnnotatedSentence& s, Span span);

// End positions reachable by consuming from `start`, as a sorted list.
std::vector<int> match_ends(const Pattern& p, const AnnotatedSentence& s, int start);

// Greedy leftmost-longest scan: at each position take the longest non-empty
// match and resume after it; otherwise advance one token.
std::vector<Span> find_matches(const Pattern& p, const AnnotatedSentence& s);

bool check_entry(const Pattern& p, const SpecEntry& e);
// True iff every entry's match set equals its selections.
bool check_spec(const Pattern& p, const Specification& spec);

// Pattern holes become []*, constraint holes become [] and any negation
// over a hole becomes the wildcard.
PatternPtr least_restrictive_completion(const PatternPtr& p);

// True when the least restrictive completion cannot exactly match some
// selection. Counter-example entries never prune.
bool prune_check(const PatternPtr& p, const Specification& spec);
bool prune_check(const State& state, const Specification& spec);

}  // namespace ruleforge

#endif  // RULEFORGE_MATCHER_H_
