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

// Self-supervised training data: random rules carved out of corpus spans,
// the specifications their corpus matches induce, and the shortest
// derivation of each rule under the expansion grammar.
//
// Items files are line-delimited JSON with a header line
//   {"format": "ruleforge-items", "version": 1, "count": N}
// followed by {"index", "seed", "rule", "spec"} records. Derivations are not
// stored; they are recomputed on load.

#ifndef RULEFORGE_SELFSUP_H_
#define RULEFORGE_SELFSUP_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "json.hpp"
#include "ruleforge/corpus.h"
#include "ruleforge/cost.h"
#include "ruleforge/grammar.h"
#include "ruleforge/pattern.h"
#include "ruleforge/random.h"
#include "ruleforge/training.h"

namespace ruleforge {

struct GeneratorConfig {
  int max_len = 7;
  double alt_p = 0.3;
  double quant_p = 0.3;
  int spec_k = 5;
  int retries = 20;
  // Negatives kept per derivation step when exporting training data.
  int negative_cap = 16;
};

nlohmann::json to_json(const GeneratorConfig& c);
// Missing keys keep their defaults.
GeneratorConfig generator_config_from_json(const nlohmann::json& j);

struct DerivationStep {
  State current;
  int chosen = 0;
  std::vector<State> siblings;
};

struct GeneratedItem {
  int index = 0;
  std::uint64_t seed = 0;
  PatternPtr rule;
  Specification spec;
  std::vector<DerivationStep> derivation;

  int ceiling() const { return static_cast<int>(derivation.size()); }
};

// A rule together with a corpus span it is known to match.
struct Witness {
  PatternPtr rule;
  SentencePtr sentence;
  Span span;
};

// One token constraint per span token, on the word, lemma or tag field.
Witness gen_base_rule(const Corpus& corpus, Rng& rng, const GeneratorConfig& config);

// Replaces one token item of a plain token sequence with an alternation of
// the original and a constraint taken from a corpus token the original does
// not accept. The witness is the sentence that supplied the new branch.
std::optional<Witness> add_alternation(const PatternPtr& rule, const Corpus& corpus, Rng& rng);

// Wraps one item in ?, * or + when that yields corpus matches the plain rule
// does not. The witness is a sentence whose matches changed (for +, one with
// a multi-token repetition).
std::optional<Witness> add_quantifier(const PatternPtr& rule, const Corpus& corpus, Rng& rng);

// Up to k sentences with matches: the `include` sentences first, the rest
// sampled from the corpus hits. Selections are the rule's matches.
Specification build_spec(const PatternPtr& rule, const Corpus& corpus, int k, Rng& rng,
                         const std::vector<SentencePtr>& include = {});

// Leftmost derivation of `rule` from the bare hole; one step per AST node.
// Throws DataError("rule not derivable under spec vocabulary") when a field
// value of the rule never occurs in the highlights, std::invalid_argument
// when the rule has holes.
std::vector<DerivationStep> oracle_derivation(const PatternPtr& rule, const Specification& spec,
                                              const CostTable& costs = CostTable::defaults());

// Rebuilds the rule from the recorded choices.
PatternPtr replay(const std::vector<DerivationStep>& derivation);

// One validated item from `seed`, or nullopt after config.retries attempts.
std::optional<GeneratedItem> generate_item(const Corpus& corpus, std::uint64_t seed,
                                           const GeneratorConfig& config);

// Item i is generated from derive_seed(seed, i), so the output does not
// depend on `threads`. 0 threads means one per hardware core.
std::vector<GeneratedItem> gen_dataset(const Corpus& corpus, int n, std::uint64_t seed,
                                       const GeneratorConfig& config, int threads = 0);

// One positive and up to config.negative_cap sampled unpruned negatives per
// derivation step, each paired with every specification entry.
std::vector<TrainingExample> export_training(const std::vector<GeneratedItem>& items,
                                             const GeneratorConfig& config);

void write_items(std::ostream& out, const std::vector<GeneratedItem>& items);
std::vector<GeneratedItem> read_items(std::istream& in);
std::vector<GeneratedItem> load_items(const std::filesystem::path& path);

}  // namespace ruleforge

#endif  // RULEFORGE_SELFSUP_H_
