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

#include "ruleforge/corpus.h"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ruleforge/matcher.h"
#include "ruleforge/text.h"

namespace ruleforge {

using nlohmann::json;

Token::Token(std::string word, std::string lemma, std::string tag, std::string entity)
    : raw_{std::move(word), std::move(lemma), std::move(tag), std::move(entity)} {
  for (int f = 0; f < kNumFields; ++f) norm_[f] = to_lower(raw_[f]);
}

std::string AnnotatedSentence::text() const {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.word();
  }
  return out;
}

bool SpecEntry::highlighted(int token) const {
  return std::any_of(selections.begin(), selections.end(),
                     [token](const Span& s) { return s.contains(token); });
}

int SpecEntry::highlighted_tokens() const {
  int n = 0;
  for (const Span& s : selections) n += s.length();
  return n;
}

void validate(const AnnotatedSentence& s) {
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    for (Field f : kAllFields) {
      if (s.tokens[i].raw(f).empty()) {
        throw DataError("token " + std::to_string(i) + " has empty field '" +
                        std::string(field_name(f)) + "'");
      }
    }
  }
  for (const DepEdge& e : s.deps) {
    if (e.head < 0 || e.head >= s.size() || e.dependent < 0 || e.dependent >= s.size()) {
      throw DataError("dependency index out of range");
    }
    if (e.head == e.dependent) throw DataError("dependency self-loop");
  }
}

void validate(const SpecEntry& e) {
  if (!e.sentence) throw DataError("specification entry without a sentence");
  int prev_end = 0;
  for (const Span& s : e.selections) {
    if (s.start < 0 || s.start >= s.end || s.end > e.sentence->size()) {
      throw DataError("selection [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                      ") invalid for sentence '" + e.sentence->id + "'");
    }
    if (s.start < prev_end) throw DataError("overlapping selections in '" + e.sentence->id + "'");
    prev_end = s.end;
  }
}

void validate(const Specification& spec) {
  if (spec.entries.empty()) throw DataError("specification has no entries");
  for (const SpecEntry& e : spec.entries) {
    validate(e);
    if (spec.mode == SpecMode::kSimplifiedSyntax && !e.sentence->deps.empty()) {
      throw DataError("path-mode entry '" + e.sentence->id + "' is not a linearized path");
    }
  }
}

SpecEntry make_entry(SentencePtr sentence, std::vector<Span> selections) {
  std::sort(selections.begin(), selections.end());
  SpecEntry e{std::move(sentence), std::move(selections)};
  validate(e);
  return e;
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const AnnotatedSentence& s) {
  json tokens = json::array();
  for (const Token& t : s.tokens) {
    tokens.push_back({{"word", t.raw(Field::kWord)},
                      {"lemma", t.raw(Field::kLemma)},
                      {"tag", t.raw(Field::kTag)},
                      {"entity", t.raw(Field::kEntity)}});
  }
  json deps = json::array();
  for (const DepEdge& e : s.deps) deps.push_back(json::array({e.head, e.dependent, e.label}));
  return {{"id", s.id}, {"tokens", std::move(tokens)}, {"deps", std::move(deps)}};
}

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw DataError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

std::string require_string(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) throw DataError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

Span span_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer()) {
    throw DataError(where + ": span must be [start, end]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

AnnotatedSentence sentence_from_json_at(const json& j, const std::string& where) {
  AnnotatedSentence s;
  s.id = require_string(j, "id", where);
  const json& tokens = require(j, "tokens", where);
  if (!tokens.is_array()) throw DataError(where + ": field 'tokens' must be an array");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string tw = where + ": tokens[" + std::to_string(i) + "]";
    s.tokens.emplace_back(require_string(tokens[i], "word", tw),
                          require_string(tokens[i], "lemma", tw),
                          require_string(tokens[i], "tag", tw),
                          require_string(tokens[i], "entity", tw));
  }
  if (j.contains("deps")) {
    const json& deps = j.at("deps");
    if (!deps.is_array()) throw DataError(where + ": field 'deps' must be an array");
    for (std::size_t i = 0; i < deps.size(); ++i) {
      const json& d = deps[i];
      if (!d.is_array() || d.size() < 2 || !d[0].is_number_integer() ||
          !d[1].is_number_integer() || (d.size() > 2 && !d[2].is_string())) {
        throw DataError(where + ": deps[" + std::to_string(i) +
                        "] must be [head, dependent, label]");
      }
      s.deps.push_back({d[0].get<int>(), d[1].get<int>(),
                        d.size() > 2 ? d[2].get<std::string>() : std::string()});
    }
  }
  try {
    validate(s);
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
  return s;
}

}  // namespace

AnnotatedSentence sentence_from_json(const json& j) {
  return sentence_from_json_at(j, "sentence");
}

json to_json(const SpecEntry& e) {
  json sel = json::array();
  for (const Span& s : e.selections) sel.push_back(json::array({s.start, s.end}));
  return {{"sentence", to_json(*e.sentence)}, {"selections", std::move(sel)}};
}

json to_json(const Specification& spec) {
  json entries = json::array();
  for (const SpecEntry& e : spec.entries) entries.push_back(to_json(e));
  return {{"mode", spec.mode == SpecMode::kSurface ? "surface" : "path"},
          {"entries", std::move(entries)}};
}

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::set<std::string> ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where + ": invalid JSON (" + e.what() + ")");
    }
    auto s = std::make_shared<AnnotatedSentence>(sentence_from_json_at(j, where));
    if (!ids.insert(s->id).second) throw DataError(where + ": duplicate id '" + s->id + "'");
    corpus.push_back(std::move(s));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus '" + path.string() + "'");
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const SentencePtr& s : corpus) out << dump_line(to_json(*s)) << '\n';
}

std::string dump_line(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

CorpusIndex::CorpusIndex(const Corpus& corpus) {
  for (const SentencePtr& s : corpus) by_id_.emplace(s->id, s);
}

SentencePtr CorpusIndex::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : it->second;
}

Specification spec_from_json(const json& j, const CorpusIndex* index) {
  Specification spec;
  const std::string mode = j.is_object() && j.contains("mode") && j["mode"].is_string()
                               ? j["mode"].get<std::string>()
                               : "surface";
  if (mode == "surface") {
    spec.mode = SpecMode::kSurface;
  } else if (mode == "path") {
    spec.mode = SpecMode::kSimplifiedSyntax;
  } else {
    throw DataError("spec: unknown mode '" + mode + "'");
  }
  const json& entries = require(j, "entries", "spec");
  if (!entries.is_array()) throw DataError("spec: field 'entries' must be an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "spec: entries[" + std::to_string(i) + "]";
    const json& ej = entries[i];
    const json& sj = require(ej, "sentence", where);
    SentencePtr sentence;
    if (sj.is_object() && sj.contains("ref")) {
      if (!index) throw DataError(where + ": sentence reference needs a corpus");
      sentence = index->find(sj["ref"].get<std::string>());
      if (!sentence) throw DataError(where + ": unknown sentence id '" + sj["ref"].dump() + "'");
    } else {
      sentence = std::make_shared<AnnotatedSentence>(sentence_from_json_at(sj, where));
    }
    if (ej.contains("pair")) {
      if (spec.mode != SpecMode::kSimplifiedSyntax) {
        throw DataError(where + ": 'pair' is only valid in path mode");
      }
      const json& pair = ej["pair"];
      const Span subj = span_from_json(require(pair, "subj", where + ".pair"), where);
      const Span obj = span_from_json(require(pair, "obj", where + ".pair"), where);
      for (const Span& s : {subj, obj}) {
        if (s.start < 0 || s.start >= s.end || s.end > sentence->size()) {
          throw DataError(where + ": pair span out of range");
        }
      }
      auto path = std::make_shared<AnnotatedSentence>(path_sentence(*sentence, subj, obj));
      const int n = path->size();
      spec.entries.push_back(make_entry(std::move(path), {Span{0, n}}));
      continue;
    }
    std::vector<Span> selections;
    const json& sel = require(ej, "selections", where);
    if (!sel.is_array()) throw DataError(where + ": field 'selections' must be an array");
    for (const json& s : sel) selections.push_back(span_from_json(s, where));
    try {
      spec.entries.push_back(make_entry(sentence, std::move(selections)));
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  validate(spec);
  return spec;
}

Specification load_specification(const std::filesystem::path& path,
                                 const CorpusIndex* index) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open specification '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("spec: invalid JSON (" + std::string(e.what()) + ")");
  }
  return spec_from_json(j, index);
}

// ---------------------------------------------------------------------------
// Dependency paths

std::vector<int> shortest_dep_path(const AnnotatedSentence& s, int a, int b) {
  const int n = s.size();
  if (a < 0 || a >= n || b < 0 || b >= n) throw DataError("path endpoint out of range");
  if (a == b) return {a};
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const DepEdge& e : s.deps) {
    adj[e.head].push_back(e.dependent);
    adj[e.dependent].push_back(e.head);
  }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  // Distances to b; walking from a along strictly decreasing distance and
  // always taking the smallest index yields the lexicographically least path.
  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(n), kUnreached);
  std::deque<int> queue{b};
  dist[b] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  if (dist[a] == kUnreached) throw DataError("no dependency path");
  std::vector<int> path{a};
  int u = a;
  while (u != b) {
    for (int v : adj[u]) {
      if (dist[v] == dist[u] - 1) {
        u = v;
        break;
      }
    }
    path.push_back(u);
  }
  return path;
}

int span_head_token(const AnnotatedSentence& s, Span span) {
  int head = -1;
  for (int i = span.start; i < span.end; ++i) {
    bool internal_head = false;
    for (const DepEdge& e : s.deps) {
      if (e.dependent == i && span.contains(e.head)) internal_head = true;
    }
    if (!internal_head) head = i;
  }
  return head >= 0 ? head : span.end - 1;
}

AnnotatedSentence linearize_path(const AnnotatedSentence& s, std::vector<int> path) {
  if (path.empty()) throw DataError("empty dependency path");
  std::sort(path.begin(), path.end());
  path.erase(std::unique(path.begin(), path.end()), path.end());
  AnnotatedSentence out;
  out.id = s.id + "#path";
  for (int i : path) {
    if (i < 0 || i >= s.size()) throw DataError("path index out of range");
    out.tokens.push_back(s.tokens[i]);
  }
  return out;
}

AnnotatedSentence path_sentence(const AnnotatedSentence& s, Span subj, Span obj) {
  const int a = span_head_token(s, subj);
  const int b = span_head_token(s, obj);
  return linearize_path(s, shortest_dep_path(s, a, b));
}

std::vector<CorpusHit> query_corpus(const Corpus& corpus, const Pattern& pattern,
                                    std::size_t limit) {
  if (!pattern.complete()) throw std::invalid_argument("query pattern has holes");
  std::vector<CorpusHit> hits;
  for (const SentencePtr& s : corpus) {
    if (hits.size() >= limit) break;
    for (const Span& span : find_matches(pattern, *s)) {
      if (hits.size() >= limit) break;
      hits.push_back({s, span});
    }
  }
  return hits;
}

}  // namespace ruleforge
