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

#include "ruleforge/pattern.h"

#include <algorithm>
#include <cctype>
#include <utility>

#include "ruleforge/text.h"

namespace ruleforge {

std::string_view field_name(Field f) {
  switch (f) {
    case Field::kWord: return "word";
    case Field::kLemma: return "lemma";
    case Field::kTag: return "tag";
    case Field::kEntity: return "entity";
  }
  return "?";
}

std::optional<Field> field_from_name(std::string_view name) {
  const std::string lower = to_lower(name);
  for (Field f : kAllFields) {
    if (field_name(f) == lower) return f;
  }
  return std::nullopt;
}

char quantifier_symbol(Quantifier q) {
  switch (q) {
    case Quantifier::kZeroOrOne: return '?';
    case Quantifier::kZeroOrMore: return '*';
    case Quantifier::kOneOrMore: return '+';
  }
  return '?';
}

// ---------------------------------------------------------------------------
// Construction

Constraint::Constraint(Kind kind, Field field, std::string value, ConstraintPtr left,
                       ConstraintPtr right)
    : kind_(kind),
      field_(field),
      value_(std::move(value)),
      left_(std::move(left)),
      right_(std::move(right)) {
  holes_ = kind_ == Kind::kHole ? 1 : 0;
  if (left_) {
    holes_ += left_->holes_;
    size_ += left_->size_;
  }
  if (right_) {
    holes_ += right_->holes_;
    size_ += right_->size_;
  }
}

ConstraintPtr Constraint::hole() {
  static const ConstraintPtr h(
      new Constraint(Kind::kHole, Field::kWord, {}, nullptr, nullptr));
  return h;
}

ConstraintPtr Constraint::wildcard() {
  static const ConstraintPtr w(
      new Constraint(Kind::kWildcard, Field::kWord, {}, nullptr, nullptr));
  return w;
}

ConstraintPtr Constraint::field_is(Field field, std::string_view value) {
  if (value.empty()) throw std::invalid_argument("empty constraint value");
  return ConstraintPtr(
      new Constraint(Kind::kFieldIs, field, to_lower(value), nullptr, nullptr));
}

ConstraintPtr Constraint::negate(ConstraintPtr child) {
  if (!child) throw std::invalid_argument("null constraint");
  return ConstraintPtr(
      new Constraint(Kind::kNot, Field::kWord, {}, std::move(child), nullptr));
}

ConstraintPtr Constraint::conj(ConstraintPtr left, ConstraintPtr right) {
  if (!left || !right) throw std::invalid_argument("null constraint");
  return ConstraintPtr(
      new Constraint(Kind::kAnd, Field::kWord, {}, std::move(left), std::move(right)));
}

ConstraintPtr Constraint::disj(ConstraintPtr left, ConstraintPtr right) {
  if (!left || !right) throw std::invalid_argument("null constraint");
  return ConstraintPtr(
      new Constraint(Kind::kOr, Field::kWord, {}, std::move(left), std::move(right)));
}

Pattern::Pattern(Kind kind, ConstraintPtr constraint, PatternPtr left, PatternPtr right,
                 Quantifier q)
    : kind_(kind),
      constraint_(std::move(constraint)),
      left_(std::move(left)),
      right_(std::move(right)),
      quantifier_(q) {
  holes_ = kind_ == Kind::kHole ? 1 : 0;
  token_patterns_ = kind_ == Kind::kToken ? 1 : 0;
  if (constraint_) {
    holes_ += constraint_->holes();
    size_ += constraint_->size();
  }
  for (const PatternPtr* child : {&left_, &right_}) {
    if (*child) {
      holes_ += (*child)->holes_;
      size_ += (*child)->size_;
      token_patterns_ += (*child)->token_patterns_;
    }
  }
}

PatternPtr Pattern::hole() {
  static const PatternPtr h(
      new Pattern(Kind::kHole, nullptr, nullptr, nullptr, Quantifier::kZeroOrOne));
  return h;
}

PatternPtr Pattern::token(ConstraintPtr constraint) {
  if (!constraint) throw std::invalid_argument("null constraint");
  return PatternPtr(new Pattern(Kind::kToken, std::move(constraint), nullptr, nullptr,
                                Quantifier::kZeroOrOne));
}

PatternPtr Pattern::concat(PatternPtr left, PatternPtr right) {
  if (!left || !right) throw std::invalid_argument("null pattern");
  return PatternPtr(new Pattern(Kind::kConcat, nullptr, std::move(left), std::move(right),
                                Quantifier::kZeroOrOne));
}

PatternPtr Pattern::alternation(PatternPtr left, PatternPtr right) {
  if (!left || !right) throw std::invalid_argument("null pattern");
  return PatternPtr(new Pattern(Kind::kAlternation, nullptr, std::move(left),
                                std::move(right), Quantifier::kZeroOrOne));
}

PatternPtr Pattern::quantified(PatternPtr child, Quantifier q) {
  if (!child) throw std::invalid_argument("null pattern");
  if (child->kind() == Kind::kQuantified) {
    throw std::invalid_argument("stacked quantifier");
  }
  return PatternPtr(new Pattern(Kind::kQuantified, nullptr, std::move(child), nullptr, q));
}

// ---------------------------------------------------------------------------
// Structure

bool equal(const Constraint& a, const Constraint& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Constraint::Kind::kHole:
    case Constraint::Kind::kWildcard:
      return true;
    case Constraint::Kind::kFieldIs:
      return a.field() == b.field() && a.value() == b.value();
    case Constraint::Kind::kNot:
      return equal(*a.left(), *b.left());
    case Constraint::Kind::kAnd:
    case Constraint::Kind::kOr:
      return equal(*a.left(), *b.left()) && equal(*a.right(), *b.right());
  }
  return false;
}

bool equal(const Pattern& a, const Pattern& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Pattern::Kind::kHole:
      return true;
    case Pattern::Kind::kToken:
      return equal(*a.constraint(), *b.constraint());
    case Pattern::Kind::kConcat:
    case Pattern::Kind::kAlternation:
      return equal(*a.left(), *b.left()) && equal(*a.right(), *b.right());
    case Pattern::Kind::kQuantified:
      return a.quantifier() == b.quantifier() && equal(*a.left(), *b.left());
  }
  return false;
}

namespace {

template <typename Node, typename Kind>
void flatten_chain(const std::shared_ptr<const Node>& n, Kind kind,
                   std::vector<std::shared_ptr<const Node>>& out) {
  if (n->kind() == kind) {
    flatten_chain(n->left(), kind, out);
    flatten_chain(n->right(), kind, out);
  } else {
    out.push_back(n);
  }
}

ConstraintPtr canonicalize(const ConstraintPtr& c) {
  switch (c->kind()) {
    case Constraint::Kind::kHole:
    case Constraint::Kind::kWildcard:
    case Constraint::Kind::kFieldIs:
      return c;
    case Constraint::Kind::kNot:
      return Constraint::negate(canonicalize(c->left()));
    case Constraint::Kind::kAnd:
    case Constraint::Kind::kOr: {
      std::vector<ConstraintPtr> parts;
      flatten_chain(c, c->kind(), parts);
      ConstraintPtr acc = canonicalize(parts.back());
      for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
        acc = c->kind() == Constraint::Kind::kAnd
                  ? Constraint::conj(canonicalize(*it), acc)
                  : Constraint::disj(canonicalize(*it), acc);
      }
      return acc;
    }
  }
  return c;
}

int chain_items(const Pattern& p) {
  return p.kind() == Pattern::Kind::kConcat
             ? chain_items(*p.left()) + chain_items(*p.right())
             : 1;
}

}  // namespace

PatternPtr canonicalize(const PatternPtr& p) {
  switch (p->kind()) {
    case Pattern::Kind::kHole:
      return p;
    case Pattern::Kind::kToken:
      return Pattern::token(canonicalize(p->constraint()));
    case Pattern::Kind::kQuantified:
      return Pattern::quantified(canonicalize(p->left()), p->quantifier());
    case Pattern::Kind::kConcat:
    case Pattern::Kind::kAlternation: {
      std::vector<PatternPtr> parts;
      flatten_chain(p, p->kind(), parts);
      PatternPtr acc = canonicalize(parts.back());
      for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
        acc = p->kind() == Pattern::Kind::kConcat
                  ? Pattern::concat(canonicalize(*it), acc)
                  : Pattern::alternation(canonicalize(*it), acc);
      }
      return acc;
    }
  }
  return p;
}

std::optional<HoleSite> leftmost_hole(const Pattern& root) {
  if (root.complete()) return std::nullopt;
  HoleSite site;
  const Pattern* node = &root;
  bool in_top_chain = true;
  bool parent_quantified = false;
  while (node->kind() != Pattern::Kind::kHole) {
    const bool is_concat = node->kind() == Pattern::Kind::kConcat;
    if (!is_concat) in_top_chain = false;
    if (node->kind() == Pattern::Kind::kToken) {
      site.path.push_back(0);
      const Constraint* c = node->constraint().get();
      bool parent_not = false;
      while (c->kind() != Constraint::Kind::kHole) {
        parent_not = c->kind() == Constraint::Kind::kNot;
        if (c->left()->holes() > 0) {
          site.path.push_back(0);
          c = c->left().get();
        } else {
          site.path.push_back(1);
          c = c->right().get();
        }
      }
      site.level = HoleLevel::kConstraint;
      site.under_not = parent_not;
      return site;
    }
    parent_quantified = node->kind() == Pattern::Kind::kQuantified;
    if (node->left()->holes() > 0) {
      site.path.push_back(0);
      node = node->left().get();
    } else {
      if (in_top_chain && is_concat) site.item_index += chain_items(*node->left());
      site.path.push_back(1);
      node = node->right().get();
    }
  }
  site.level = HoleLevel::kPattern;
  site.under_quantifier = parent_quantified;
  return site;
}

PatternPtr pattern_at(const PatternPtr& root, std::span<const int> path) {
  PatternPtr node = root;
  for (int step : path) {
    if (node->kind() == Pattern::Kind::kToken || node->kind() == Pattern::Kind::kHole) {
      throw std::invalid_argument("path leaves the pattern level");
    }
    node = step == 0 ? node->left() : node->right();
    if (!node) throw std::invalid_argument("path out of range");
  }
  return node;
}

ConstraintPtr constraint_at(const PatternPtr& root, std::span<const int> path) {
  PatternPtr node = root;
  std::size_t i = 0;
  for (; i < path.size() && node->kind() != Pattern::Kind::kToken; ++i) {
    if (node->kind() == Pattern::Kind::kHole) throw std::invalid_argument("path out of range");
    node = path[i] == 0 ? node->left() : node->right();
    if (!node) throw std::invalid_argument("path out of range");
  }
  if (node->kind() != Pattern::Kind::kToken || i == path.size()) {
    throw std::invalid_argument("path does not enter a token constraint");
  }
  ++i;  // into the constraint
  ConstraintPtr c = node->constraint();
  for (; i < path.size(); ++i) {
    c = path[i] == 0 ? c->left() : c->right();
    if (!c) throw std::invalid_argument("path out of range");
  }
  return c;
}

namespace {

ConstraintPtr rebuild(const ConstraintPtr& c, std::span<const int> path,
                      const ConstraintPtr& replacement) {
  if (path.empty()) {
    if (c->kind() != Constraint::Kind::kHole) {
      throw std::invalid_argument("replacement target is not a constraint hole");
    }
    return replacement;
  }
  const auto rest = path.subspan(1);
  switch (c->kind()) {
    case Constraint::Kind::kNot:
      if (path[0] != 0) break;
      return Constraint::negate(rebuild(c->left(), rest, replacement));
    case Constraint::Kind::kAnd:
      return path[0] == 0 ? Constraint::conj(rebuild(c->left(), rest, replacement), c->right())
                          : Constraint::conj(c->left(), rebuild(c->right(), rest, replacement));
    case Constraint::Kind::kOr:
      return path[0] == 0 ? Constraint::disj(rebuild(c->left(), rest, replacement), c->right())
                          : Constraint::disj(c->left(), rebuild(c->right(), rest, replacement));
    default:
      break;
  }
  throw std::invalid_argument("path out of range");
}

template <typename Leaf>
PatternPtr rebuild(const PatternPtr& p, std::span<const int> path, const Leaf& replacement) {
  if constexpr (std::is_same_v<Leaf, PatternPtr>) {
    if (path.empty()) {
      if (p->kind() != Pattern::Kind::kHole) {
        throw std::invalid_argument("replacement target is not a pattern hole");
      }
      return replacement;
    }
  } else {
    if (path.empty()) throw std::invalid_argument("path does not enter a constraint");
  }
  const auto rest = path.subspan(1);
  switch (p->kind()) {
    case Pattern::Kind::kToken:
      if constexpr (std::is_same_v<Leaf, ConstraintPtr>) {
        if (path[0] == 0) return Pattern::token(rebuild(p->constraint(), rest, replacement));
      }
      break;
    case Pattern::Kind::kConcat:
      return path[0] == 0 ? Pattern::concat(rebuild(p->left(), rest, replacement), p->right())
                          : Pattern::concat(p->left(), rebuild(p->right(), rest, replacement));
    case Pattern::Kind::kAlternation:
      return path[0] == 0
                 ? Pattern::alternation(rebuild(p->left(), rest, replacement), p->right())
                 : Pattern::alternation(p->left(), rebuild(p->right(), rest, replacement));
    case Pattern::Kind::kQuantified:
      if (path[0] == 0) {
        return Pattern::quantified(rebuild(p->left(), rest, replacement), p->quantifier());
      }
      break;
    case Pattern::Kind::kHole:
      break;
  }
  throw std::invalid_argument("path out of range");
}

}  // namespace

PatternPtr replace_at(const PatternPtr& root, std::span<const int> path,
                      const PatternPtr& replacement) {
  return rebuild(root, path, replacement);
}

PatternPtr replace_at(const PatternPtr& root, std::span<const int> path,
                      const ConstraintPtr& replacement) {
  return rebuild(root, path, replacement);
}

std::vector<PatternPtr> concat_items(const PatternPtr& p) {
  std::vector<PatternPtr> items;
  flatten_chain(p, Pattern::Kind::kConcat, items);
  return items;
}

PatternPtr concat_of(std::span<const PatternPtr> items) {
  if (items.empty()) throw std::invalid_argument("empty concatenation");
  PatternPtr acc = items.back();
  for (auto it = items.rbegin() + 1; it != items.rend(); ++it) {
    acc = Pattern::concat(*it, acc);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool bare_value(std::string_view v) {
  return std::all_of(v.begin(), v.end(), [](char ch) {
    const auto u = static_cast<unsigned char>(ch);
    return u >= 0x80 || std::isalnum(u) || ch == '_';
  });
}

void print_value(std::string_view v, std::string& out) {
  if (bare_value(v)) {
    out += v;
    return;
  }
  out += '"';
  for (char ch : v) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  out += '"';
}

// Binding strength inside brackets: | < & < ! < atom.
int precedence(const Constraint& c) {
  switch (c.kind()) {
    case Constraint::Kind::kOr: return 1;
    case Constraint::Kind::kAnd: return 2;
    case Constraint::Kind::kNot: return 3;
    default: return 4;
  }
}

void print_constraint(const Constraint& c, std::string& out, int min_prec) {
  const bool parens = precedence(c) < min_prec;
  if (parens) out += '(';
  switch (c.kind()) {
    case Constraint::Kind::kHole:
      out += "HOLE";
      break;
    case Constraint::Kind::kWildcard:
      out += "ANY";
      break;
    case Constraint::Kind::kFieldIs:
      out += field_name(c.field());
      out += '=';
      print_value(c.value(), out);
      break;
    case Constraint::Kind::kNot:
      out += '!';
      print_constraint(*c.left(), out, 3);
      break;
    case Constraint::Kind::kAnd:
    case Constraint::Kind::kOr: {
      std::vector<ConstraintPtr> parts;
      flatten_chain(c.left(), c.kind(), parts);
      flatten_chain(c.right(), c.kind(), parts);
      const char* sep = c.kind() == Constraint::Kind::kAnd ? " & " : " | ";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        print_constraint(*parts[i], out, precedence(c) + 1);
      }
      break;
    }
  }
  if (parens) out += ')';
}

void print_pattern(const Pattern& p, std::string& out);

void print_grouped(const Pattern& p, std::string& out) {
  const bool group =
      p.kind() == Pattern::Kind::kConcat || p.kind() == Pattern::Kind::kAlternation;
  if (group) out += '(';
  print_pattern(p, out);
  if (group) out += ')';
}

void print_pattern(const Pattern& p, std::string& out) {
  switch (p.kind()) {
    case Pattern::Kind::kHole:
      out += "HOLE";
      break;
    case Pattern::Kind::kToken:
      out += '[';
      if (p.constraint()->kind() != Constraint::Kind::kWildcard) {
        print_constraint(*p.constraint(), out, 0);
      }
      out += ']';
      break;
    case Pattern::Kind::kConcat: {
      std::vector<PatternPtr> items;
      flatten_chain(p.left(), Pattern::Kind::kConcat, items);
      flatten_chain(p.right(), Pattern::Kind::kConcat, items);
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ' ';
        if (items[i]->kind() == Pattern::Kind::kAlternation) {
          print_grouped(*items[i], out);
        } else {
          print_pattern(*items[i], out);
        }
      }
      break;
    }
    case Pattern::Kind::kAlternation: {
      std::vector<PatternPtr> items;
      flatten_chain(p.left(), Pattern::Kind::kAlternation, items);
      flatten_chain(p.right(), Pattern::Kind::kAlternation, items);
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += '|';
        print_grouped(*items[i], out);
      }
      break;
    }
    case Pattern::Kind::kQuantified:
      print_grouped(*p.left(), out);
      out += quantifier_symbol(p.quantifier());
      break;
  }
}

}  // namespace

std::string print(const Pattern& p) {
  std::string out;
  print_pattern(p, out);
  return out;
}

std::string print(const Constraint& c) {
  std::string out;
  print_constraint(c, out, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  PatternPtr run() {
    skip_ws();
    if (at_end()) fail("empty pattern");
    PatternPtr p = alternation();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip_ws();
    if (peek() == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char ch) {
    if (!accept(ch)) fail(std::string("expected '") + ch + "'");
  }

  // Identifier-like word at the cursor, without consuming it.
  std::string_view peek_word() const {
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isalpha(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
      ++end;
    }
    return text_.substr(pos_, end - pos_);
  }

  PatternPtr alternation() {
    std::vector<PatternPtr> parts{concatenation()};
    while (accept('|')) parts.push_back(concatenation());
    PatternPtr acc = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
      acc = Pattern::alternation(*it, acc);
    }
    return acc;
  }

  bool starts_atom() {
    skip_ws();
    const char ch = peek();
    return ch == '[' || ch == '(' || peek_word() == "HOLE";
  }

  PatternPtr concatenation() {
    if (!starts_atom()) fail("expected a token pattern");
    std::vector<PatternPtr> items;
    while (starts_atom()) items.push_back(quantified());
    return concat_of(items);
  }

  PatternPtr quantified() {
    PatternPtr atom_node = atom();
    skip_ws();
    const char ch = peek();
    if (ch != '?' && ch != '*' && ch != '+') return atom_node;
    const std::size_t at = pos_;
    ++pos_;
    const Quantifier q = ch == '?'   ? Quantifier::kZeroOrOne
                         : ch == '*' ? Quantifier::kZeroOrMore
                                     : Quantifier::kOneOrMore;
    if (atom_node->kind() == Pattern::Kind::kQuantified) {
      throw ParseError("stacked quantifier", at);
    }
    skip_ws();
    if (peek() == '?' || peek() == '*' || peek() == '+') fail("stacked quantifier");
    return Pattern::quantified(atom_node, q);
  }

  PatternPtr atom() {
    skip_ws();
    if (accept('(')) {
      skip_ws();
      if (peek() == ')') fail("empty group");
      PatternPtr inner = alternation();
      expect(')');
      return inner;
    }
    if (accept('[')) {
      skip_ws();
      if (accept(']')) return Pattern::token(Constraint::wildcard());
      ConstraintPtr c = constraint_or();
      expect(']');
      return Pattern::token(c);
    }
    if (peek_word() == "HOLE") {
      pos_ += 4;
      return Pattern::hole();
    }
    fail("expected a token pattern");
  }

  ConstraintPtr constraint_or() {
    std::vector<ConstraintPtr> parts{constraint_and()};
    while (accept('|')) parts.push_back(constraint_and());
    ConstraintPtr acc = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
      acc = Constraint::disj(*it, acc);
    }
    return acc;
  }

  ConstraintPtr constraint_and() {
    std::vector<ConstraintPtr> parts{constraint_unary()};
    while (accept('&')) parts.push_back(constraint_unary());
    ConstraintPtr acc = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
      acc = Constraint::conj(*it, acc);
    }
    return acc;
  }

  ConstraintPtr constraint_unary() {
    if (accept('!')) return Constraint::negate(constraint_unary());
    if (accept('(')) {
      ConstraintPtr inner = constraint_or();
      expect(')');
      return inner;
    }
    skip_ws();
    const std::string_view word = peek_word();
    if (word.empty()) fail("expected a field constraint");
    const std::size_t word_at = pos_;
    pos_ += word.size();
    skip_ws();
    if (peek() != '=') {
      if (word == "HOLE") return Constraint::hole();
      if (word == "ANY") return Constraint::wildcard();
      fail("expected '='");
    }
    const auto field = field_from_name(word);
    if (!field) throw ParseError("unknown field '" + std::string(word) + "'", word_at);
    ++pos_;  // '='
    skip_ws();
    const std::string value = parse_value();
    return Constraint::field_is(*field, value);
  }

  std::string parse_value() {
    std::string value;
    if (peek() == '"') {
      ++pos_;
      while (true) {
        if (at_end()) fail("unterminated string");
        char ch = text_[pos_++];
        if (ch == '"') break;
        if (ch == '\\') {
          if (at_end()) fail("unterminated string");
          ch = text_[pos_++];
        }
        value += ch;
      }
      if (value.empty()) fail("empty value");
      return value;
    }
    static constexpr std::string_view kStop = "[]()|&!=\"";
    while (!at_end()) {
      const char ch = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(ch)) ||
          kStop.find(ch) != std::string_view::npos) {
        break;
      }
      value += ch;
      ++pos_;
    }
    if (value.empty()) fail("expected a value");
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

PatternPtr parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Linearization

namespace {

void emit(const Constraint& c, std::vector<std::string>& out) {
  switch (c.kind()) {
    case Constraint::Kind::kHole:
      out.emplace_back("HOLE");
      break;
    case Constraint::Kind::kWildcard:
      out.emplace_back("WILDCARD");
      break;
    case Constraint::Kind::kFieldIs:
      out.push_back("FIELD=" + std::string(field_name(c.field())));
      out.push_back("VAL=" + c.value());
      break;
    case Constraint::Kind::kNot:
      out.emplace_back("NOT");
      emit(*c.left(), out);
      break;
    case Constraint::Kind::kAnd:
    case Constraint::Kind::kOr:
      out.emplace_back(c.kind() == Constraint::Kind::kAnd ? "AND" : "OR");
      emit(*c.left(), out);
      emit(*c.right(), out);
      break;
  }
}

void emit(const Pattern& p, std::vector<std::string>& out) {
  switch (p.kind()) {
    case Pattern::Kind::kHole:
      out.emplace_back("HOLE");
      break;
    case Pattern::Kind::kToken:
      out.emplace_back("TOKEN");
      emit(*p.constraint(), out);
      break;
    case Pattern::Kind::kConcat:
    case Pattern::Kind::kAlternation:
      out.emplace_back(p.kind() == Pattern::Kind::kConcat ? "CONCAT" : "ALT");
      emit(*p.left(), out);
      emit(*p.right(), out);
      break;
    case Pattern::Kind::kQuantified:
      out.push_back(std::string("QUANT=") + quantifier_symbol(p.quantifier()));
      emit(*p.left(), out);
      break;
  }
}

}  // namespace

std::vector<std::string> linearize_ast(const Pattern& p) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(p.size()) + 4);
  emit(p, out);
  return out;
}

}  // namespace ruleforge
