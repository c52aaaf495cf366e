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

#include "doctest.h"
#include "ruleforge/pattern.h"
#include "support.h"

using namespace ruleforge;

TEST_CASE("parse builds the expected tree") {
  PatternPtr p = parse("[word=and]?");
  REQUIRE(p->kind() == Pattern::Kind::kQuantified);
  CHECK(p->quantifier() == Quantifier::kZeroOrOne);
  const PatternPtr& tok = p->left();
  REQUIRE(tok->kind() == Pattern::Kind::kToken);
  CHECK(tok->constraint()->kind() == Constraint::Kind::kFieldIs);
  CHECK(tok->constraint()->field() == Field::kWord);
  CHECK(tok->constraint()->value() == "and");
}

TEST_CASE("quoted values may hold punctuation") {
  PatternPtr p = parse("[tag=\",\"]");
  REQUIRE(p->kind() == Pattern::Kind::kToken);
  CHECK(p->constraint()->field() == Field::kTag);
  CHECK(p->constraint()->value() == ",");
  CHECK(equal(parse(print(p)), p));
}

TEST_CASE("print reproduces the path rule") {
  PatternPtr p = Pattern::concat(
      Pattern::token(Constraint::field_is(Field::kEntity, "person")),
      Pattern::concat(Pattern::token(Constraint::field_is(Field::kWord, "son")),
                      Pattern::token(Constraint::field_is(Field::kEntity, "person"))));
  CHECK(print(p) == "[entity=person] [word=son] [entity=person]");
  CHECK(equal(parse("[entity=person]   [word=son] [entity=person]"), p));
}

TEST_CASE("holes print as HOLE at both levels") {
  CHECK(print(Pattern::hole()) == "HOLE");
  CHECK(print(Pattern::token(Constraint::hole())) == "[HOLE]");
  PatternPtr p = parse("[entity=person] [HOLE & word=a] HOLE");
  CHECK(p->holes() == 2);
  CHECK_FALSE(p->complete());
  CHECK(print(p) == "[entity=person] [HOLE & word=a] HOLE");
}

TEST_CASE("parse errors carry an offset") {
  CHECK_THROWS_AS(parse("[word=dog"), ParseError);
  CHECK_THROWS_AS(parse("[colour=red]"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("[word=a]) "), ParseError);
  try {
    parse("[word=a] [colour=red]");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() >= 9);
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }
}

TEST_CASE("quantifiers do not stack") {
  CHECK_THROWS_AS(parse("[word=a]?*"), ParseError);
  PatternPtr q = Pattern::quantified(Pattern::token(Constraint::wildcard()), Quantifier::kZeroOrMore);
  CHECK_THROWS_AS(Pattern::quantified(q, Quantifier::kOneOrMore), std::invalid_argument);
  // A group in between is fine.
  CHECK_NOTHROW(parse("([word=a]? [word=b])+"));
}

TEST_CASE("print then parse equals the canonical form") {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    int budget = 8;
    PatternPtr p = rftest::random_pattern(rng, budget);
    CAPTURE(print(p));
    CHECK(equal(parse(print(p)), canonicalize(p)));
  }
}

TEST_CASE("canonicalize right-nests concatenations") {
  auto a = Pattern::token(Constraint::field_is(Field::kWord, "a"));
  auto b = Pattern::token(Constraint::field_is(Field::kWord, "b"));
  auto c = Pattern::token(Constraint::field_is(Field::kWord, "c"));
  PatternPtr left = Pattern::concat(Pattern::concat(a, b), c);
  PatternPtr right = Pattern::concat(a, Pattern::concat(b, c));
  CHECK_FALSE(equal(left, right));
  CHECK(equal(canonicalize(left), right));
  CHECK(print(left) == print(right));
}

TEST_CASE("linearize_ast emits symbols in pre-order") {
  using V = std::vector<std::string>;
  CHECK(linearize_ast(*Pattern::hole()) == V{"HOLE"});
  CHECK(linearize_ast(*parse("[word=dog]")) == V{"TOKEN", "FIELD=word", "VAL=dog"});
  CHECK(linearize_ast(*Pattern::quantified(Pattern::hole(), Quantifier::kZeroOrOne)) ==
        V{"QUANT=?", "HOLE"});
}

TEST_CASE("leftmost_hole follows pre-order") {
  auto root = leftmost_hole(*Pattern::hole());
  REQUIRE(root);
  CHECK(root->path.empty());
  CHECK(root->level == HoleLevel::kPattern);

  auto right = leftmost_hole(*Pattern::concat(parse("[word=a]"), Pattern::hole()));
  REQUIRE(right);
  CHECK(right->path == NodePath{1});
  CHECK(right->item_index == 1);

  auto conj = leftmost_hole(*parse("[HOLE & word=a]"));
  REQUIRE(conj);
  CHECK(conj->path == NodePath{0, 0});
  CHECK(conj->level == HoleLevel::kConstraint);

  auto quant = leftmost_hole(*Pattern::quantified(Pattern::hole(), Quantifier::kOneOrMore));
  REQUIRE(quant);
  CHECK(quant->under_quantifier);

  CHECK_FALSE(leftmost_hole(*parse("[word=a]")));
}

TEST_CASE("replace_at rebuilds only the edited spine") {
  PatternPtr p = Pattern::concat(parse("[word=a]"), Pattern::hole());
  PatternPtr q = replace_at(p, NodePath{1}, parse("[word=b]"));
  CHECK(print(q) == "[word=a] [word=b]");
  CHECK(q->left() == p->left());
  CHECK_THROWS_AS(replace_at(q, NodePath{1}, parse("[word=c]")), std::invalid_argument);

  PatternPtr t = Pattern::token(Constraint::hole());
  PatternPtr filled = replace_at(t, NodePath{0}, Constraint::field_is(Field::kLemma, "run"));
  CHECK(print(filled) == "[lemma=run]");
}

TEST_CASE("node counts and token counts") {
  PatternPtr p = parse("[entity=person] [word=son] [entity=person]");
  CHECK(p->size() == 8);
  CHECK(p->token_patterns() == 3);
  CHECK(concat_items(p).size() == 3);
  CHECK(Pattern::hole()->size() == 1);
}

TEST_CASE("field_is lowercases and rejects empty values") {
  CHECK(Constraint::field_is(Field::kTag, "NN")->value() == "nn");
  CHECK_THROWS_AS(Constraint::field_is(Field::kTag, ""), std::invalid_argument);
  CHECK(field_from_name("lemma") == Field::kLemma);
  CHECK_FALSE(field_from_name("pos"));
}
