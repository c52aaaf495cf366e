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

// Learned transition scorer: logistic regression over hashed features.
//
// The input mirrors a segment-tagged encoder input. Segment 1 holds the
// linearized current state, segment 2 the linearized candidate, segment 3
// the highlighted tokens of the entry and segment 4 the rest of the
// sentence. On top of these bags come crossing features between the node
// the candidate introduces and the highlighted text, including the token
// aligned with the hole's position in the rule.
//
// Feature names are hashed with 64-bit FNV-1a and reduced modulo `dim`.

#ifndef RULEFORGE_CONTEXTUAL_H_
#define RULEFORGE_CONTEXTUAL_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"
#include "ruleforge/corpus.h"
#include "ruleforge/grammar.h"
#include "ruleforge/scoring.h"

namespace ruleforge {

inline constexpr int kModelVersion = 1;
inline constexpr std::uint32_t kDefaultFeatureDim = 1u << 18;

// Active feature indices; repeated indices count repeatedly.
using FeatureVector = std::vector<std::uint32_t>;

// Segments 3 and 4: depends on the entry only.
void entry_features(const SpecEntry& entry, std::uint32_t dim, FeatureVector& out);
// Segment 1 (`segment` = 1) or 2 (`segment` = 2) for one state.
void state_features(const State& state, int segment, std::uint32_t dim, FeatureVector& out);
// Crossing features for the transition current -> candidate.
void transition_features(const State& current, const State& candidate,
                         const SpecEntry& entry, std::uint32_t dim, FeatureVector& out);

// All of the above. `dim` must be a power of two.
FeatureVector featurize(const State& current, const State& candidate,
                        const SpecEntry& entry, std::uint32_t dim);

struct ScorerModel {
  int version = kModelVersion;
  std::uint32_t dim = kDefaultFeatureDim;
  std::vector<double> weights;
  double bias = 0.0;
  nlohmann::json training_meta = nlohmann::json::object();

  static ScorerModel zeros(std::uint32_t dim);

  double logit(std::span<const std::uint32_t> features) const;
};

// Probability in (0, 1).
double contextual_score(const ScorerModel& model, std::span<const std::uint32_t> features);

// {"version", "dim", "bias", "weights": [[index, value], ...] (non-zero
// only), "trainingMeta"}.
nlohmann::json to_json(const ScorerModel& model);
ScorerModel model_from_json(const nlohmann::json& j);
void save_model(const ScorerModel& model, const std::filesystem::path& path);
ScorerModel load_model(const std::filesystem::path& path);

class ContextualScorer : public Scorer {
 public:
  explicit ContextualScorer(std::shared_ptr<const ScorerModel> model)
      : model_(std::move(model)) {}

  double score_transition(const State& current, const State& candidate,
                          const SpecEntry& entry) const override;
  std::vector<double> score_batch(const State& current, std::span<const State> candidates,
                                  const SpecEntry& entry) const override;

  const ScorerModel& model() const { return *model_; }

 private:
  std::shared_ptr<const ScorerModel> model_;
};

}  // namespace ruleforge

#endif  // RULEFORGE_CONTEXTUAL_H_
