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

// Helpers shared by the unit and acceptance tests: sentence builders, the
// bundled fixture paths, and reference implementations that the library is
// checked against.

#ifndef RULEFORGE_TESTS_SUPPORT_H_
#define RULEFORGE_TESTS_SUPPORT_H_

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ruleforge/corpus.h"
#include "ruleforge/grammar.h"
#include "ruleforge/pattern.h"
#include "ruleforge/random.h"
#include "ruleforge/text.h"

#ifndef RULEFORGE_DATA_DIR
#error "RULEFORGE_DATA_DIR must point at the bundled data directory"
#endif

namespace rftest {

using namespace ruleforge;

inline std::filesystem::path data_path(const std::string& rel) {
  return std::filesystem::path(RULEFORGE_DATA_DIR) / rel;
}

// Tokens written as word/lemma/tag/entity; missing parts default to the
// lowercased word, "X" and "O".
inline AnnotatedSentence make_sentence(const std::vector<std::string>& toks,
                                       std::vector<DepEdge> deps = {},
                                       std::string id = "t") {
  AnnotatedSentence s;
  s.id = std::move(id);
  for (const std::string& t : toks) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string part;
    while (std::getline(ss, part, '/')) parts.push_back(part);
    const std::string word = parts.at(0);
    const std::string lemma = parts.size() > 1 ? parts[1] : to_lower(word);
    const std::string tag = parts.size() > 2 ? parts[2] : "X";
    const std::string entity = parts.size() > 3 ? parts[3] : "O";
    s.tokens.emplace_back(word, lemma, tag, entity);
  }
  s.deps = std::move(deps);
  return s;
}

inline SentencePtr share(AnnotatedSentence s) {
  return std::make_shared<const AnnotatedSentence>(std::move(s));
}

// The three-token path sentence "He son Anderson".
inline SentencePtr he_son_anderson() {
  return share(make_sentence({"He/he/PRP/PERSON", "son/son/NN/O", "Anderson/anderson/NNP/PERSON"},
                             {}, "hsa"));
}

inline Specification single_entry(SentencePtr s, std::vector<Span> selections,
                                  SpecMode mode = SpecMode::kSurface) {
  Specification spec;
  spec.mode = mode;
  spec.entries.push_back(make_entry(std::move(s), std::move(selections)));
  return spec;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Reference matcher: decides span membership by trying every split point.
// Exponential, but fine for short sentences and small patterns.

inline bool ref_satisfies(const Constraint& c, const Token& t) {
  switch (c.kind()) {
    case Constraint::Kind::kWildcard:
      return true;
    case Constraint::Kind::kFieldIs:
      return to_lower(t.raw(c.field())) == c.value();
    case Constraint::Kind::kNot:
      return !ref_satisfies(*c.left(), t);
    case Constraint::Kind::kAnd:
      return ref_satisfies(*c.left(), t) && ref_satisfies(*c.right(), t);
    case Constraint::Kind::kOr:
      return ref_satisfies(*c.left(), t) || ref_satisfies(*c.right(), t);
    case Constraint::Kind::kHole:
      break;
  }
  throw std::logic_error("hole in reference matcher");
}

inline bool ref_span(const Pattern& p, const AnnotatedSentence& s, int i, int j);

// One or more repetitions, each consuming at least one token.
inline bool ref_repeat(const Pattern& child, const AnnotatedSentence& s, int i, int j) {
  for (int k = i + 1; k <= j; ++k) {
    if (ref_span(child, s, i, k) && (k == j || ref_repeat(child, s, k, j))) return true;
  }
  return false;
}

inline bool ref_span(const Pattern& p, const AnnotatedSentence& s, int i, int j) {
  switch (p.kind()) {
    case Pattern::Kind::kToken:
      return j == i + 1 && ref_satisfies(*p.constraint(), s.tokens[i]);
    case Pattern::Kind::kConcat:
      for (int k = i; k <= j; ++k) {
        if (ref_span(*p.left(), s, i, k) && ref_span(*p.right(), s, k, j)) return true;
      }
      return false;
    case Pattern::Kind::kAlternation:
      return ref_span(*p.left(), s, i, j) || ref_span(*p.right(), s, i, j);
    case Pattern::Kind::kQuantified:
      switch (p.quantifier()) {
        case Quantifier::kZeroOrOne:
          return i == j || ref_span(*p.left(), s, i, j);
        case Quantifier::kZeroOrMore:
          return i == j || ref_repeat(*p.left(), s, i, j);
        case Quantifier::kOneOrMore:
          // A child that matches empty may spend its one empty repetition.
          return i == j ? ref_span(*p.left(), s, i, j) : ref_repeat(*p.left(), s, i, j);
      }
      break;
    case Pattern::Kind::kHole:
      break;
  }
  throw std::logic_error("hole in reference matcher");
}

// All exact spans first, then the greedy leftmost-longest selection.
inline std::vector<Span> ref_find_matches(const Pattern& p, const AnnotatedSentence& s) {
  const int n = s.size();
  std::vector<std::vector<bool>> exact(n + 1, std::vector<bool>(n + 1, false));
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) exact[i][j] = ref_span(p, s, i, j);
  }
  std::vector<Span> out;
  int i = 0;
  while (i < n) {
    int best = -1;
    for (int j = n; j > i; --j) {
      if (exact[i][j]) {
        best = j;
        break;
      }
    }
    if (best < 0) {
      ++i;
    } else {
      out.push_back({i, best});
      i = best;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random patterns and sentences over a tiny vocabulary, so that constraints
// actually hit.

inline const std::vector<std::string>& tiny_words() {
  static const std::vector<std::string> w = {"a", "b", "c"};
  return w;
}

inline AnnotatedSentence random_sentence(Rng& rng, int max_len) {
  static const std::vector<std::string> tags = {"dt", "nn"};
  static const std::vector<std::string> ents = {"o", "person"};
  const int n = static_cast<int>(uniform_index(rng, max_len + 1));
  AnnotatedSentence s;
  s.id = "r";
  for (int i = 0; i < n; ++i) {
    const std::string& w = tiny_words()[uniform_index(rng, tiny_words().size())];
    s.tokens.emplace_back(w, w, tags[uniform_index(rng, tags.size())],
                          ents[uniform_index(rng, ents.size())]);
  }
  return s;
}

inline ConstraintPtr random_constraint(Rng& rng, int& budget) {
  const std::size_t pick = budget >= 3 ? uniform_index(rng, 6) : uniform_index(rng, 3);
  --budget;
  switch (pick) {
    case 0:
      return Constraint::wildcard();
    case 1:
    case 2: {
      if (uniform_index(rng, 2) == 0) {
        return Constraint::field_is(Field::kWord,
                                    tiny_words()[uniform_index(rng, tiny_words().size())]);
      }
      return Constraint::field_is(Field::kTag, uniform_index(rng, 2) ? "dt" : "nn");
    }
    case 3:
      return Constraint::negate(Constraint::field_is(
          Field::kWord, tiny_words()[uniform_index(rng, tiny_words().size())]));
    case 4: {
      auto l = random_constraint(rng, budget);
      return Constraint::conj(l, random_constraint(rng, budget));
    }
    default: {
      auto l = random_constraint(rng, budget);
      return Constraint::disj(l, random_constraint(rng, budget));
    }
  }
}

// A complete pattern of at most `budget` nodes (both levels).
inline PatternPtr random_pattern(Rng& rng, int& budget, bool under_quant = false) {
  const std::size_t pick = budget >= 3 ? uniform_index(rng, 4) : 0;
  --budget;
  switch (pick) {
    case 0:
      return Pattern::token(random_constraint(rng, budget));
    case 1: {
      auto l = random_pattern(rng, budget);
      return Pattern::concat(l, random_pattern(rng, budget));
    }
    case 2: {
      auto l = random_pattern(rng, budget);
      return Pattern::alternation(l, random_pattern(rng, budget));
    }
    default: {
      if (under_quant) return Pattern::token(random_constraint(rng, budget));
      static const Quantifier qs[] = {Quantifier::kZeroOrOne, Quantifier::kZeroOrMore,
                                      Quantifier::kOneOrMore};
      return Pattern::quantified(random_pattern(rng, budget, true), qs[uniform_index(rng, 3)]);
    }
  }
}

// ---------------------------------------------------------------------------
// Breadth-first enumeration of every complete rule reachable within
// `max_nodes` nodes, with the number of expansions that first reached it.

inline std::map<std::string, int> bfs_rule_depths(const Vocabulary& vocab, int max_nodes) {
  std::map<std::string, int> depth;
  std::queue<std::pair<State, int>> q;
  q.push({State::root(), 0});
  while (!q.empty()) {
    auto [s, d] = q.front();
    q.pop();
    if (s.pattern->complete()) {
      depth.emplace(print(s.pattern), d);
      continue;
    }
    for (State& child : expansions(s, vocab)) {
      // Each hole grows into at least one node, so size never shrinks.
      if (child.pattern->size() <= max_nodes) q.push({std::move(child), d + 1});
    }
  }
  return depth;
}

}  // namespace rftest

#endif  // RULEFORGE_TESTS_SUPPORT_H_
