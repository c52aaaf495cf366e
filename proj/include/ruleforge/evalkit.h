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

// Evaluation: search effort on generated items against the oracle ceiling,
// and few-shot relation extraction with synthesized rules or the
// type-matching random baseline.
//
// Episode files hold one episode per line:
//   {"wayCount": 5, "shotCount": 1,
//    "support": {"<relation>": [<sentence>, ...], ...},
//    "queries": [<sentence>, ...]}
// where each sentence is
//   {"sentence": {...}, "subj": [s, e], "subjType": "PERSON",
//    "obj": [s, e], "objType": "ORGANIZATION", "gold": "<relation>"}.
// Background files hold one such sentence per line.

#ifndef RULEFORGE_EVALKIT_H_
#define RULEFORGE_EVALKIT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "ruleforge/corpus.h"
#include "ruleforge/random.h"
#include "ruleforge/scoring.h"
#include "ruleforge/search.h"
#include "ruleforge/selfsup.h"

namespace ruleforge {

inline constexpr const char* kNoRelation = "no_relation";

// ---------------------------------------------------------------------------
// Intrinsic evaluation

// Builds the scorer for one item (the oracle needs the item's rule).
using ScorerFactory = std::function<std::unique_ptr<Scorer>(const GeneratedItem&)>;

struct SummaryStats {
  int count = 0;
  double avg = 0.0;
  double median = 0.0;
  double max = 0.0;
  double min = 0.0;
};

SummaryStats summarize(std::vector<double> values);

struct IntrinsicRow {
  int index = 0;
  bool found = false;
  int steps = 0;
  int ceiling = 0;
  std::string rule;  // empty unless found
};

struct IntrinsicReport {
  std::string scorer;
  int budget = 0;
  int total = 0;
  int found = 0;
  SummaryStats steps;    // solved items only
  SummaryStats ceiling;  // all items
  // Solved items whose search used fewer steps than the ceiling, which is
  // possible when a smaller rule than the generating one fits the spec.
  int below_ceiling = 0;
  std::vector<IntrinsicRow> rows;
};

// Items are independent; `threads` > 1 splits them across workers and keeps
// the rows in input order.
IntrinsicReport intrinsic_eval(const std::vector<GeneratedItem>& items,
                               const ScorerFactory& factory, const SearchConfig& config,
                               const std::string& scorer_name, int threads = 1);

nlohmann::json to_json(const IntrinsicReport& r);
// Aligned text table with one column per report.
std::string format_table(const std::vector<IntrinsicReport>& reports);

// Scores +inf for states on the rule's oracle derivation and 0 otherwise.
class OraclePseudoScorer : public Scorer {
 public:
  OraclePseudoScorer(const PatternPtr& rule, const Specification& spec);

  double score_transition(const State& current, const State& candidate,
                          const SpecEntry& entry) const override;

 private:
  std::set<std::string> path_;
};

// A seeded hash of the printed states, uniform in [0, 1).
class RandomScorer : public Scorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}

  double score_transition(const State& current, const State& candidate,
                          const SpecEntry& entry) const override;

 private:
  std::uint64_t seed_;
};

// ---------------------------------------------------------------------------
// Few-shot relation extraction

struct EpisodeSentence {
  SentencePtr sentence;
  Span subj;
  std::string subj_type;
  Span obj;
  std::string obj_type;
  std::string gold;
};

struct Episode {
  int way_count = 0;
  int shot_count = 0;
  std::map<std::string, std::vector<EpisodeSentence>> support;
  std::vector<EpisodeSentence> queries;
};

EpisodeSentence episode_sentence_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EpisodeSentence& s);
Episode episode_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Episode& e);
std::vector<Episode> load_episodes(const std::filesystem::path& path);
std::vector<EpisodeSentence> load_background(const std::filesystem::path& path);

// The entry a relation mention contributes to a specification: in surface
// mode the sentence with the span from the first entity's start to the
// second one's end; in path mode the linearized dependency path between the
// entities, selected whole.
SpecEntry relation_entry(const EpisodeSentence& s, SpecMode mode);

struct FewShotConfig {
  SpecMode mode = SpecMode::kSurface;
  SearchConfig search;
  // Add the other relations' supports as counter-examples.
  bool negative_supports = false;
};

struct FewShotResult {
  std::map<std::string, PatternPtr> rules;  // relations that got a rule
  std::vector<std::string> predictions;     // one per query
};

FewShotResult fewshot_predict(const Episode& episode, const Scorer& scorer,
                              const FewShotConfig& config);

std::vector<std::string> baseline_predict(const Episode& episode,
                                          const std::vector<EpisodeSentence>& background,
                                          Rng& rng);

// Micro-averaged F1 over `targets`; predictions and golds outside the
// target set count as neither positives nor true labels.
double micro_f1(const std::vector<std::string>& predictions,
                const std::vector<std::string>& golds, const std::set<std::string>& targets);

}  // namespace ruleforge

#endif  // RULEFORGE_EVALKIT_H_
