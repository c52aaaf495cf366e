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

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "ruleforge/contextual.h"
#include "ruleforge/selfsup.h"
#include "ruleforge/training.h"
#include "support.h"

using namespace ruleforge;

namespace {

const Corpus& bundled() {
  static const Corpus c = load_corpus(rftest::data_path("corpus.jsonl"));
  return c;
}

struct SmallData {
  std::vector<TrainingExample> train;
  std::vector<TrainingExample> heldout;
};

const SmallData& small_data() {
  static const SmallData d = [] {
    GeneratorConfig cfg;
    SmallData out;
    out.train = export_training(gen_dataset(bundled(), 150, 21, cfg, 1), cfg);
    out.heldout = export_training(gen_dataset(bundled(), 40, 22, cfg, 1), cfg);
    return out;
  }();
  return d;
}

}  // namespace

TEST_CASE("features are deterministic and sensitive") {
  auto s = rftest::he_son_anderson();
  SpecEntry e = make_entry(s, {{0, 3}});
  State cur = State::of(parse("[entity=person] HOLE"));
  State cand = State::of(parse("[entity=person] [HOLE] HOLE"));
  const std::uint32_t dim = 1u << 16;
  CHECK(featurize(cur, cand, e, dim) == featurize(cur, cand, e, dim));

  auto changed = rftest::share(rftest::make_sentence(
      {"He/he/PRP/PERSON", "sun/son/NN/O", "Anderson/anderson/NNP/PERSON"}));
  CHECK(featurize(cur, cand, make_entry(changed, {{0, 3}}), dim) != featurize(cur, cand, e, dim));

  auto a = featurize(cur, cand, e, dim);
  auto b = featurize(cand, cur, e, dim);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a != b);
  for (std::uint32_t f : a) CHECK(f < dim);
  CHECK_THROWS(featurize(cur, cand, e, 1000));
}

TEST_CASE("scores stay strictly inside the unit interval") {
  ScorerModel m = ScorerModel::zeros(16);
  CHECK(contextual_score(m, std::vector<std::uint32_t>{}) == doctest::Approx(0.5));
  m.weights[3] = 1e6;
  double hi = contextual_score(m, std::vector<std::uint32_t>{3, 3, 3});
  CHECK(hi < 1.0);
  CHECK(hi > 0.5);
  m.weights[3] = -1e6;
  double lo = contextual_score(m, std::vector<std::uint32_t>{3, 3, 3});
  CHECK(lo > 0.0);
  CHECK(lo < 0.5);
}

TEST_CASE("batched and single contextual scores agree") {
  auto model = std::make_shared<const ScorerModel>(load_model(rftest::data_path("model.json")));
  ContextualScorer scorer(model);
  SpecEntry e = make_entry(rftest::he_son_anderson(), {{0, 3}});
  State cur = State::root();
  auto kids = expansions(cur, rftest::single_entry(rftest::he_son_anderson(), {{0, 3}}));
  auto batch = scorer.score_batch(cur, kids, e);
  REQUIRE(batch.size() == kids.size());
  for (std::size_t i = 0; i < kids.size(); ++i) {
    CHECK(batch[i] == doctest::Approx(scorer.score_transition(cur, kids[i], e)).epsilon(1e-12));
    CHECK(batch[i] > 0.0);
    CHECK(batch[i] < 1.0);
  }
}

TEST_CASE("models survive save and load") {
  const auto& data = small_data();
  TrainConfig cfg;
  cfg.dim = 1u << 14;
  cfg.stages = {CurriculumStage{20, 5, 1}, CurriculumStage{0, 0, 0}, CurriculumStage{0, 0, 0}};
  ScorerModel m = train_contextual(data.train, cfg);
  auto path = std::filesystem::temp_directory_path() / "ruleforge_model_roundtrip.json";
  save_model(m, path);
  ScorerModel again = load_model(path);
  std::filesystem::remove(path);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const TrainingExample& ex = data.heldout[uniform_index(rng, data.heldout.size())];
    auto f = featurize(ex.current, ex.candidate, *ex.entry, m.dim);
    CHECK(contextual_score(again, f) == contextual_score(m, f));
  }
  CHECK(again.training_meta == m.training_meta);
}

TEST_CASE("malformed models are rejected") {
  nlohmann::json j = to_json(ScorerModel::zeros(8));
  CHECK_NOTHROW(model_from_json(j));
  auto bad = j;
  bad["version"] = 99;
  CHECK_THROWS_AS(model_from_json(bad), DataError);
  bad = j;
  bad["weights"] = {{8, 1.0}};
  CHECK_THROWS_AS(model_from_json(bad), DataError);
  bad = j;
  bad["dim"] = 12;
  CHECK_THROWS_AS(model_from_json(bad), DataError);
}

TEST_CASE("training beats chance after the first stage") {
  const auto& data = small_data();
  TrainConfig cfg;
  double after_stage1 = 1.0;
  ScorerModel m = train_contextual(data.train, cfg, [&](int stage, int epoch, const ScorerModel& mm) {
    if (stage == 0 && epoch == cfg.stages[0].epochs - 1) {
      after_stage1 = evaluate_loss(mm, data.heldout).loss;
    }
  });
  CHECK(after_stage1 < std::log(2.0));
  LossReport r = evaluate_loss(m, data.heldout);
  CHECK(r.loss < std::log(2.0));
  CHECK(r.ranking_accuracy > 0.8);
  CHECK(r.balanced_accuracy > 0.6);
  CHECK(r.count == data.heldout.size());
}

TEST_CASE("training is deterministic") {
  const auto& data = small_data();
  TrainConfig cfg;
  cfg.dim = 1u << 14;
  CHECK(to_json(train_contextual(data.train, cfg)) == to_json(train_contextual(data.train, cfg)));
}

TEST_CASE("shuffled labels teach nothing") {
  const auto& data = small_data();
  std::vector<TrainingExample> shuffled = data.train;
  std::vector<int> labels;
  for (const auto& ex : shuffled) labels.push_back(ex.label);
  Rng rng(99);
  shuffle(labels, rng);
  for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i].label = labels[i];
  ScorerModel m = train_contextual(shuffled, TrainConfig{});
  LossReport r = evaluate_loss(m, data.heldout);
  CHECK(std::abs(r.balanced_accuracy - 0.5) < 0.05);
}

TEST_CASE("curriculum stage membership") {
  SpecEntry small = make_entry(rftest::he_son_anderson(), {{0, 3}});
  CHECK(in_stage(small, CurriculumStage{20, 5, 3}));
  CHECK_FALSE(in_stage(small, CurriculumStage{3, 5, 3}));
  CHECK_FALSE(in_stage(small, CurriculumStage{20, 3, 3}));
  CHECK(in_stage(small, CurriculumStage{0, 0, 1}));
}

TEST_CASE("empty stages are skipped") {
  const auto& data = small_data();
  TrainConfig cfg;
  cfg.dim = 1u << 12;
  cfg.stages = {CurriculumStage{1, 1, 2}, CurriculumStage{0, 0, 1}, CurriculumStage{0, 0, 0}};
  std::vector<int> stages_seen;
  train_contextual(data.train, cfg, [&](int stage, int, const ScorerModel&) {
    stages_seen.push_back(stage);
  });
  CHECK(stages_seen == std::vector<int>{1});
}
