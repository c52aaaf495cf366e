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

// Annotated text, specifications, and the file formats that carry them.
//
// Corpus files hold one sentence per line:
//   {"id": "s1", "tokens": [{"word": "He", "lemma": "he", "tag": "PRP",
//    "entity": "PERSON"}, ...], "deps": [[3, 0, "nsubj"], ...]}
// where each dependency is [head, dependent, label].
//
// Annotation values keep their original spelling for display; matching uses
// a lowercased copy.

#ifndef RULEFORGE_CORPUS_H_
#define RULEFORGE_CORPUS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "ruleforge/pattern.h"

namespace ruleforge {

// Malformed input data (corpus, specification, episode, model files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Token {
 public:
  Token() = default;
  Token(std::string word, std::string lemma, std::string tag, std::string entity);

  const std::string& raw(Field f) const { return raw_[static_cast<int>(f)]; }
  // Lowercased value used for matching.
  const std::string& get(Field f) const { return norm_[static_cast<int>(f)]; }

  const std::string& word() const { return raw(Field::kWord); }

 private:
  std::array<std::string, kNumFields> raw_;
  std::array<std::string, kNumFields> norm_;
};

struct DepEdge {
  int head = 0;
  int dependent = 0;
  std::string label;
};

struct AnnotatedSentence {
  std::string id;
  std::vector<Token> tokens;
  std::vector<DepEdge> deps;

  int size() const { return static_cast<int>(tokens.size()); }
  std::string text() const;
};

using SentencePtr = std::shared_ptr<const AnnotatedSentence>;
using Corpus = std::vector<SentencePtr>;

// Half-open token range [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool contains(int i) const { return i >= start && i < end; }
  friend auto operator<=>(const Span&, const Span&) = default;
};

struct SpecEntry {
  SentencePtr sentence;
  // Sorted by start, pairwise disjoint; empty for a counter-example.
  std::vector<Span> selections;

  bool highlighted(int token) const;
  int highlighted_tokens() const;
};

enum class SpecMode { kSurface, kSimplifiedSyntax };

struct Specification {
  std::vector<SpecEntry> entries;
  SpecMode mode = SpecMode::kSurface;
};

// Throws DataError naming the failed invariant.
void validate(const AnnotatedSentence& s);
void validate(const SpecEntry& e);
void validate(const Specification& spec);

// Sorts selections and checks them against the sentence.
SpecEntry make_entry(SentencePtr sentence, std::vector<Span> selections);

nlohmann::json to_json(const AnnotatedSentence& s);
AnnotatedSentence sentence_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SpecEntry& e);
nlohmann::json to_json(const Specification& spec);

// Records are validated; errors name the line number and the field.
Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const Corpus& corpus);

class CorpusIndex {
 public:
  explicit CorpusIndex(const Corpus& corpus);
  SentencePtr find(std::string_view id) const;

 private:
  std::unordered_map<std::string, SentencePtr> by_id_;
};

// `{"mode": "surface"|"path", "entries": [...]}`. An entry's sentence is
// inline or `{"ref": "<corpus-id>"}` (resolved through `index`). In path
// mode an entry may carry `"pair": {"subj": [s, e], "obj": [s, e]}` instead
// of selections; the sentence is then reduced to the dependency path
// between the two spans and the whole result is selected.
Specification spec_from_json(const nlohmann::json& j, const CorpusIndex* index);
Specification load_specification(const std::filesystem::path& path,
                                 const CorpusIndex* index);

// Shortest undirected dependency path from `a` to `b`, inclusive; ties go to
// the lexicographically smallest index sequence.
std::vector<int> shortest_dep_path(const AnnotatedSentence& s, int a, int b);

// Token inside `span` whose head lies outside it (rightmost on ties).
int span_head_token(const AnnotatedSentence& s, Span span);

// Keeps only the path tokens, in sentence order; drops dependencies.
AnnotatedSentence linearize_path(const AnnotatedSentence& s, std::vector<int> path);

// Linearized dependency path between the head tokens of two spans.
AnnotatedSentence path_sentence(const AnnotatedSentence& s, Span subj, Span obj);

struct CorpusHit {
  SentencePtr sentence;
  Span span;
};

// Scans the corpus in order; `pattern` must be complete.
std::vector<CorpusHit> query_corpus(const Corpus& corpus, const Pattern& pattern,
                                    std::size_t limit);

// Writes a JSON value on one line.
std::string dump_line(const nlohmann::json& j);

}  // namespace ruleforge

#endif  // RULEFORGE_CORPUS_H_
