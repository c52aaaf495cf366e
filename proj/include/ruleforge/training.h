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

// Training data for the contextual scorer and the curriculum trainer.
//
// Training files are line-delimited JSON. The first line is a header
//   {"format": "ruleforge-training", "version": 1, "count": N}
// and each following line one example:
//   {"entry": {...}, "current": "<rule>", "candidate": "<rule>",
//    "label": 0|1, "item": i, "step": j}

#ifndef RULEFORGE_TRAINING_H_
#define RULEFORGE_TRAINING_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "ruleforge/contextual.h"
#include "ruleforge/corpus.h"
#include "ruleforge/grammar.h"

namespace ruleforge {

struct TrainingExample {
  std::shared_ptr<const SpecEntry> entry;
  State current;
  State candidate;
  int label = 0;
  int item = 0;
  int step = 0;
};

void write_training(std::ostream& out, const std::vector<TrainingExample>& examples);
// Entries and states repeated across lines are shared after loading.
std::vector<TrainingExample> read_training(std::istream& in);
std::vector<TrainingExample> load_training(const std::filesystem::path& path);

struct CurriculumStage {
  int max_tokens = 0;       // exclusive; 0 means unbounded
  int max_highlighted = 0;  // exclusive; 0 means unbounded
  int epochs = 1;
};

struct TrainConfig {
  std::uint64_t seed = 1;
  std::uint32_t dim = kDefaultFeatureDim;
  // Triangular cyclical schedule whose amplitude halves every cycle.
  double lr_low = 6e-6;
  double lr_high = 3e-5;
  // The bounds were chosen for a large pretrained encoder; a linear model
  // needs far larger steps.
  double lr_scale = 1e4;
  int half_cycle = 500;  // batches from lr_low to lr_high
  int batch_size = 256;
  std::array<CurriculumStage, 3> stages = {CurriculumStage{20, 5, 3},
                                           CurriculumStage{30, 7, 2},
                                           CurriculumStage{0, 0, 1}};
};

nlohmann::json to_json(const TrainConfig& c);

bool in_stage(const SpecEntry& entry, const CurriculumStage& stage);

// Called after each epoch with (stage index, epoch index, model so far).
using EpochHook = std::function<void(int, int, const ScorerModel&)>;

// Plain minibatch gradient descent on logistic loss. Stages without data are
// skipped with a warning on stderr.
ScorerModel train_contextual(const std::vector<TrainingExample>& data,
                             const TrainConfig& config, const EpochHook& hook = {});

struct LossReport {
  double loss = 0.0;      // mean negative log-likelihood
  double accuracy = 0.0;  // threshold 0.5
  // Mean of the per-class accuracies; chance level is one half whatever the
  // class balance.
  double balanced_accuracy = 0.0;
  // Fraction of (positive, negative) pairs from the same derivation step and
  // entry that the model orders correctly; ties count one half.
  double ranking_accuracy = 0.0;
  std::size_t count = 0;
};

LossReport evaluate_loss(const ScorerModel& model, const std::vector<TrainingExample>& data);

}  // namespace ruleforge

#endif  // RULEFORGE_TRAINING_H_
