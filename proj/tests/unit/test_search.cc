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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "ruleforge/contextual.h"
#include "ruleforge/grammar.h"
#include "ruleforge/matcher.h"
#include "ruleforge/scoring.h"
#include "ruleforge/search.h"
#include "ruleforge/selfsup.h"
#include "support.h"

using namespace ruleforge;

namespace {

std::vector<std::string> printed(const std::vector<State>& states) {
  std::vector<std::string> out;
  for (const State& s : states) out.push_back(print(s.pattern));
  return out;
}

Specification son_spec() {
  return rftest::single_entry(rftest::share(rftest::make_sentence({"son/son/NN/O"})), {{0, 1}});
}

class NanScorer : public Scorer {
 public:
  double score_transition(const State&, const State&, const SpecEntry&) const override {
    return std::numeric_limits<double>::quiet_NaN();
  }
};

class ThrowingScorer : public Scorer {
 public:
  double score_transition(const State&, const State&, const SpecEntry&) const override {
    throw ScorerError("backend down");
  }
};

}  // namespace

TEST_CASE("pattern hole expansions come in grammar order") {
  auto out = printed(expansions(State::root(), son_spec()));
  CHECK(out == std::vector<std::string>{"HOLE HOLE", "[HOLE]", "HOLE|HOLE", "HOLE?", "HOLE*",
                                        "HOLE+"});
}

TEST_CASE("constraint hole expansions follow the highlight vocabulary") {
  State s = State::of(Pattern::token(Constraint::hole()));
  auto out = printed(expansions(s, son_spec()));
  CHECK(out == std::vector<std::string>{"[]", "[word=son]", "[lemma=son]", "[tag=nn]",
                                        "[entity=o]", "[!HOLE]", "[HOLE & HOLE]",
                                        "[HOLE | HOLE]"});
}

TEST_CASE("no stacked quantifiers and no double negation") {
  State q = State::of(Pattern::quantified(Pattern::hole(), Quantifier::kZeroOrMore));
  for (const std::string& p : printed(expansions(q, son_spec()))) {
    CHECK(p.find("HOLE?") == std::string::npos);
    CHECK(p.find("HOLE*)") == std::string::npos);
  }
  CHECK(expansions(q, son_spec()).size() == 3);

  State n = State::of(parse("[!HOLE]"));
  auto out = printed(expansions(n, son_spec()));
  CHECK(std::find(out.begin(), out.end(), "[!!HOLE]") == out.end());
  CHECK(out.size() == 7);
}

TEST_CASE("expanding a complete rule is an error") {
  try {
    expansions(State::of(parse("[word=son]")), son_spec());
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("no hole to expand") != std::string::npos);
  }
}

TEST_CASE("state costs track the static cost") {
  const CostTable costs = CostTable::defaults();
  std::vector<State> frontier = {State::root()};
  for (int depth = 0; depth < 3; ++depth) {
    std::vector<State> next;
    for (const State& s : frontier) {
      for (State& c : expansions(s, son_spec())) {
        CHECK(c.static_cost == doctest::Approx(static_cost(*c.pattern, costs)));
        CHECK(c.depth == depth + 1);
        if (!c.pattern->complete()) next.push_back(std::move(c));
      }
    }
    frontier = std::move(next);
  }
}

TEST_CASE("introduced symbols") {
  State root = State::root();
  auto kids = expansions(root, son_spec());
  CHECK(introduced_symbol(*root.pattern, *kids[0].pattern) == "CONCAT");
  CHECK(introduced_symbol(*root.pattern, *kids[1].pattern) == "TOKEN");
  CHECK(introduced_symbol(*root.pattern, *kids[4].pattern) == "QUANT=*");
  State tok = kids[1];
  auto leaves = expansions(tok, son_spec());
  CHECK(introduced_symbol(*tok.pattern, *leaves[1].pattern) == "FIELD=word|VAL=son");
}

TEST_CASE("static cost sums node prices") {
  const CostTable t = CostTable::defaults();
  CHECK(static_cost(*parse("HOLE HOLE"), t) == doctest::Approx(3.0));
  CHECK(static_cost(*parse("[word=son]"), t) == doctest::Approx(2.0));
  CHECK(static_cost(*parse("[!HOLE]"), t) == doctest::Approx(7.0));
  CHECK(static_cost(*parse("[tag=nn]"), t) == doctest::Approx(1.0 + t.of(Field::kTag)));
}

TEST_CASE("cost tables from JSON") {
  CostTable t = cost_table_from_json({{"costs", {{"not", 9.0}, {"word", 0.5}}}});
  CHECK(t[CostKey::kNot] == 9.0);
  CHECK(t.of(Field::kWord) == 0.5);
  CHECK(t[CostKey::kConcat] == 1.0);
  CHECK_THROWS(cost_table_from_json({{"costs", {{"bogus", 1.0}}}}));
  CHECK_THROWS(cost_table_from_json({{"costs", {{"not", 0.5}}}}));
  CHECK_THROWS(cost_table_from_json({{"costs", {{"word", -1.0}}}}));
}

TEST_CASE("stripping keeps the complete prefix") {
  CHECK(print(strip_incomplete(parse("[entity=person] [tag=NN] [HOLE]"))) ==
        "[entity=person] [tag=nn]");
  CHECK(print(strip_incomplete(parse("[entity=person] [tag=nn] [HOLE] [word=a]"))) ==
        "[entity=person] [tag=nn]");
  CHECK(strip_incomplete(Pattern::hole()) == nullptr);
  CHECK(strip_incomplete(parse("[HOLE] [word=a]")) == nullptr);
  CHECK(print(strip_incomplete(parse("[word=a]"))) == "[word=a]");
}

TEST_CASE("augmentation reward on the path entry") {
  SpecEntry e = make_entry(rftest::he_son_anderson(), {{0, 3}});
  CHECK(augmentation_reward(State::of(parse("[entity=person] [tag=NN] HOLE")), e) == 2);
  CHECK(augmentation_reward(State::root(), e) == 0);

  // One token inside the selection and one outside.
  SpecEntry partial = make_entry(rftest::he_son_anderson(), {{0, 1}});
  CHECK(augmentation_reward(State::of(parse("[entity=person] HOLE")), partial) == 0);
}

TEST_CASE("static scores ignore the entry") {
  Rng rng(3);
  StaticScorer scorer;
  State cur = State::root();
  State cand = State::of(parse("[word=a] HOLE"));
  const double first =
      scorer.score_transition(cur, cand, make_entry(rftest::he_son_anderson(), {{0, 3}}));
  CHECK(first == doctest::Approx(-static_cost(*cand.pattern, CostTable::defaults())));
  for (int i = 0; i < 10; ++i) {
    auto s = rftest::share(rftest::random_sentence(rng, 8));
    std::vector<Span> sel;
    if (s->size() > 0) sel.push_back({0, s->size()});
    CHECK(scorer.score_transition(cur, cand, make_entry(s, sel)) == first);
  }
}

TEST_CASE("scaling the cost table keeps the best candidate") {
  CostTable scaled = CostTable::defaults();
  for (double& v : scaled.node) v *= 3.5;
  for (double& v : scaled.field) v *= 3.5;
  StaticScorer a, b(scaled);
  SpecEntry e = make_entry(rftest::he_son_anderson(), {{0, 3}});
  std::vector<State> frontier = {State::root()};
  for (int depth = 0; depth < 3; ++depth) {
    std::vector<State> next;
    for (const State& s : frontier) {
      auto kids = expansions(s, rftest::single_entry(rftest::he_son_anderson(), {{0, 3}}));
      auto sa = a.score_batch(s, kids, e);
      auto sb = b.score_batch(s, kids, e);
      CHECK(std::max_element(sa.begin(), sa.end()) - sa.begin() ==
            std::max_element(sb.begin(), sb.end()) - sb.begin());
      for (State& k : kids) {
        if (!k.pattern->complete()) next.push_back(std::move(k));
      }
    }
    frontier = std::move(next);
  }
}

TEST_CASE("multi-entry scores average") {
  AugmentedStaticScorer scorer;
  Specification spec = rftest::single_entry(rftest::he_son_anderson(), {{0, 3}});
  spec.entries.push_back(make_entry(rftest::he_son_anderson(), {{0, 1}, {2, 3}}));
  State cur = State::root();
  State cand = State::of(parse("[entity=person] HOLE"));
  const double a = scorer.score_transition(cur, cand, spec.entries[0]);
  const double b = scorer.score_transition(cur, cand, spec.entries[1]);
  CHECK(score_transition_multi(scorer, cur, cand, spec) == doctest::Approx((a + b) / 2));
  Specification one = rftest::single_entry(rftest::he_son_anderson(), {{0, 3}});
  CHECK(score_transition_multi(scorer, cur, cand, one) == a);
}

TEST_CASE("synthesize solves the path specification") {
  Specification spec = load_specification(rftest::data_path("son_of/spec_path.json"), nullptr);
  auto model = std::make_shared<const ScorerModel>(load_model(rftest::data_path("model.json")));
  StaticScorer st;
  AugmentedStaticScorer aug;
  ContextualScorer ctx(model);
  for (const Scorer* scorer : std::vector<const Scorer*>{&st, &aug, &ctx}) {
    SearchConfig cfg;
    SearchReport r = synthesize(spec, *scorer, cfg);
    REQUIRE(r.found);
    CHECK(check_spec(*r.rule, spec));
    CHECK(r.states_explored <= 1000);
  }
}

TEST_CASE("a counter-example-only spec accepts a rule that matches nothing") {
  Specification spec = rftest::single_entry(rftest::he_son_anderson(), {});
  SearchReport r = synthesize(spec, StaticScorer(), SearchConfig{});
  REQUIRE(r.found);
  CHECK(find_matches(*r.rule, *spec.entries[0].sentence).empty());
}

TEST_CASE("budget exhaustion is not an error") {
  Specification spec = load_specification(rftest::data_path("son_of/spec_path.json"), nullptr);
  SearchConfig cfg;
  cfg.max_states = 1;
  SearchReport r = synthesize(spec, StaticScorer(), cfg);
  CHECK_FALSE(r.found);
  CHECK(r.states_explored == 1);
  CHECK(r.rule == nullptr);
}

TEST_CASE("search is deterministic and traces every pop") {
  Specification spec = load_specification(rftest::data_path("son_of/spec_path.json"), nullptr);
  SearchConfig cfg;
  cfg.record_trace = true;
  int sunk = 0;
  SearchReport a = synthesize(spec, AugmentedStaticScorer(), cfg,
                              [&](const TraceEvent&) { ++sunk; });
  SearchReport b = synthesize(spec, AugmentedStaticScorer(), cfg);
  REQUIRE(a.found);
  CHECK(print(a.rule) == print(b.rule));
  CHECK(to_json(a, spec).dump() == to_json(b, spec).dump());
  // The accepting pop is traced but not counted.
  CHECK(static_cast<int>(a.trace.size()) == a.states_explored + 1);
  CHECK(sunk == a.states_explored + 1);
  for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i].step == a.trace[i - 1].step + 1);
}

TEST_CASE("scorer failures propagate") {
  Specification spec = load_specification(rftest::data_path("son_of/spec_path.json"), nullptr);
  CHECK_THROWS_AS(synthesize(spec, NanScorer(), SearchConfig{}), ScorerError);
  try {
    synthesize(spec, ThrowingScorer(), SearchConfig{});
    FAIL("expected a scorer error");
  } catch (const ScorerError& e) {
    CHECK(std::string(e.what()).find("backend down") != std::string::npos);
    CHECK(std::string(e.what()).find("HOLE") != std::string::npos);
  }
}

TEST_CASE("invalid specifications are rejected") {
  Specification empty;
  CHECK_THROWS_AS(synthesize(empty, StaticScorer(), SearchConfig{}), DataError);
}

TEST_CASE("pruning on and off agree on small items") {
  Corpus corpus = load_corpus(rftest::data_path("corpus.jsonl"));
  auto items = gen_dataset(corpus, 40, 77, GeneratorConfig{}, 1);
  for (const GeneratedItem& item : items) {
    SearchConfig on, off;
    on.max_states = off.max_states = 2000;
    off.pruning = false;
    SearchReport a = synthesize(item.spec, AugmentedStaticScorer(), on);
    SearchReport b = synthesize(item.spec, AugmentedStaticScorer(), off);
    if (a.found && b.found) {
      CHECK(print(a.rule) == print(b.rule));
    }
  }
}
