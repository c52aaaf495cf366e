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

#include "ruleforge/training.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <tuple>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "ruleforge/random.h"

namespace ruleforge {

using nlohmann::json;

void write_training(std::ostream& out, const std::vector<TrainingExample>& examples) {
  out << dump_line({{"format", "ruleforge-training"},
                    {"version", 1},
                    {"count", examples.size()}})
      << '\n';
  // Entries repeat across many lines; serialize each one once.
  std::unordered_map<const SpecEntry*, std::string> entry_text;
  for (const TrainingExample& ex : examples) {
    auto [it, fresh] = entry_text.try_emplace(ex.entry.get());
    if (fresh) it->second = dump_line(to_json(*ex.entry));
    out << "{\"entry\":" << it->second
        << ",\"current\":" << json(print(ex.current.pattern)).dump()
        << ",\"candidate\":" << json(print(ex.candidate.pattern)).dump()
        << ",\"label\":" << ex.label << ",\"item\":" << ex.item << ",\"step\":" << ex.step
        << "}\n";
  }
}

std::vector<TrainingExample> read_training(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("training file: missing header");
  try {
    const json header = json::parse(line);
    if (header.value("format", "") != "ruleforge-training" || header.value("version", 0) != 1) {
      throw DataError("training file: unrecognized header");
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("training file: bad header (") + e.what() + ")");
  }
  std::vector<TrainingExample> out;
  std::unordered_map<std::string, std::shared_ptr<const SpecEntry>> entries;
  std::unordered_map<std::string, State> states;
  auto state_of = [&](const std::string& text) -> const State& {
    auto it = states.find(text);
    if (it == states.end()) it = states.emplace(text, State::of(parse(text))).first;
    return it->second;
  };
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "training file: line " + std::to_string(lineno);
    try {
      const json j = json::parse(line);
      TrainingExample ex;
      const std::string key = j.at("entry").dump();
      auto it = entries.find(key);
      if (it == entries.end()) {
        Specification one = spec_from_json({{"entries", json::array({j.at("entry")})}}, nullptr);
        it = entries.emplace(key, std::make_shared<const SpecEntry>(one.entries.front())).first;
      }
      ex.entry = it->second;
      ex.current = state_of(j.at("current").get<std::string>());
      ex.candidate = state_of(j.at("candidate").get<std::string>());
      ex.label = j.at("label").get<int>();
      if (ex.label != 0 && ex.label != 1) throw DataError("label must be 0 or 1");
      ex.item = j.at("item").get<int>();
      ex.step = j.at("step").get<int>();
      out.push_back(std::move(ex));
    } catch (const json::exception& e) {
      throw DataError(where + ": " + e.what());
    } catch (const ParseError& e) {
      throw DataError(where + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return out;
}

std::vector<TrainingExample> load_training(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open training file '" + path.string() + "'");
  return read_training(in);
}

json to_json(const TrainConfig& c) {
  json stages = json::array();
  for (const CurriculumStage& s : c.stages) {
    stages.push_back({{"maxTokens", s.max_tokens},
                      {"maxHighlighted", s.max_highlighted},
                      {"epochs", s.epochs}});
  }
  return {{"seed", c.seed},         {"dim", c.dim},
          {"lrLow", c.lr_low},      {"lrHigh", c.lr_high},
          {"lrScale", c.lr_scale},  {"halfCycle", c.half_cycle},
          {"batchSize", c.batch_size}, {"stages", std::move(stages)}};
}

bool in_stage(const SpecEntry& entry, const CurriculumStage& stage) {
  if (stage.max_tokens > 0 && entry.sentence->size() >= stage.max_tokens) return false;
  if (stage.max_highlighted > 0 && entry.highlighted_tokens() >= stage.max_highlighted) {
    return false;
  }
  return true;
}

namespace {

// Features of an example, reusing the parts that only depend on the entry
// or the current state.
class FeatureCache {
 public:
  explicit FeatureCache(std::uint32_t dim) : dim_(dim) {}

  void collect(const TrainingExample& ex, FeatureVector& out) {
    out.clear();
    auto [eit, efresh] = entry_.try_emplace(ex.entry.get());
    if (efresh) entry_features(*ex.entry, dim_, eit->second);
    auto [sit, sfresh] = current_.try_emplace(ex.current.pattern.get());
    if (sfresh) state_features(ex.current, 1, dim_, sit->second);
    out.insert(out.end(), eit->second.begin(), eit->second.end());
    out.insert(out.end(), sit->second.begin(), sit->second.end());
    state_features(ex.candidate, 2, dim_, out);
    transition_features(ex.current, ex.candidate, *ex.entry, dim_, out);
  }

 private:
  std::uint32_t dim_;
  std::unordered_map<const SpecEntry*, FeatureVector> entry_;
  std::unordered_map<const Pattern*, FeatureVector> current_;
};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double triangular2(const TrainConfig& c, long batch) {
  const long period = 2L * c.half_cycle;
  const long cycle = batch / period;
  const double x = std::abs(static_cast<double>(batch % period) / c.half_cycle - 1.0);
  const double amplitude = (c.lr_high - c.lr_low) * std::max(0.0, 1.0 - x) /
                           std::pow(2.0, static_cast<double>(cycle));
  return (c.lr_low + amplitude) * c.lr_scale;
}

}  // namespace

ScorerModel train_contextual(const std::vector<TrainingExample>& data, const TrainConfig& config,
                             const EpochHook& hook) {
  if (config.batch_size <= 0 || config.half_cycle <= 0) {
    throw std::invalid_argument("batch size and half cycle must be positive");
  }
  ScorerModel model = ScorerModel::zeros(config.dim);
  // Start from the base rate. With a zero bias every active feature would
  // first be pushed towards the base rate in proportion to its frequency,
  // which leaves a ranking prior that has nothing to do with the labels.
  const auto positives = std::count_if(data.begin(), data.end(),
                                       [](const TrainingExample& ex) { return ex.label == 1; });
  if (positives > 0 && positives < static_cast<long>(data.size())) {
    const double rate = static_cast<double>(positives) / static_cast<double>(data.size());
    model.bias = std::log(rate / (1.0 - rate));
  }
  Rng rng(config.seed);
  FeatureCache cache(config.dim);
  std::vector<double> grad(config.dim, 0.0);
  std::vector<std::uint32_t> touched;
  FeatureVector features;
  long batch_no = 0;
  json stages_meta = json::array();

  for (std::size_t si = 0; si < config.stages.size(); ++si) {
    const CurriculumStage& stage = config.stages[si];
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (in_stage(*data[i].entry, stage)) order.push_back(i);
    }
    stages_meta.push_back({{"examples", order.size()}, {"epochs", stage.epochs}});
    if (order.empty()) {
      std::cerr << "warning: curriculum stage " << si + 1 << " has no examples; skipped\n";
      continue;
    }
    for (int epoch = 0; epoch < stage.epochs; ++epoch) {
      shuffle(order, rng);
      for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
        const std::size_t e = std::min(order.size(), b + config.batch_size);
        double bias_grad = 0.0;
        for (std::size_t k = b; k < e; ++k) {
          const TrainingExample& ex = data[order[k]];
          cache.collect(ex, features);
          const double g = sigmoid(model.logit(features)) - ex.label;
          bias_grad += g;
          for (std::uint32_t f : features) {
            if (grad[f] == 0.0) touched.push_back(f);
            grad[f] += g;
          }
        }
        const double lr = triangular2(config, batch_no++) / static_cast<double>(e - b);
        model.bias -= lr * bias_grad;
        for (std::uint32_t f : touched) {
          model.weights[f] -= lr * grad[f];
          grad[f] = 0.0;
        }
        touched.clear();
      }
      if (hook) hook(static_cast<int>(si), epoch, model);
    }
  }
  model.training_meta = {{"config", to_json(config)},
                         {"stages", std::move(stages_meta)},
                         {"examples", data.size()},
                         {"batches", batch_no}};
  return model;
}

LossReport evaluate_loss(const ScorerModel& model, const std::vector<TrainingExample>& data) {
  LossReport r;
  FeatureCache cache(model.dim);
  FeatureVector features;
  double loss = 0.0;
  std::size_t correct = 0;
  std::size_t seen[2] = {0, 0};
  std::size_t right[2] = {0, 0};
  using GroupKey = std::tuple<int, int, const SpecEntry*>;
  std::map<GroupKey, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const TrainingExample& ex : data) {
    cache.collect(ex, features);
    const double z = model.logit(features);
    const double p = contextual_score(model, features);
    loss -= ex.label ? std::log(p) : std::log1p(-p);
    const bool ok = (p >= 0.5) == (ex.label == 1);
    correct += ok;
    ++seen[ex.label == 1];
    right[ex.label == 1] += ok;
    auto& g = groups[{ex.item, ex.step, ex.entry.get()}];
    (ex.label ? g.first : g.second).push_back(z);
  }
  double ordered = 0.0;
  double pairs = 0.0;
  for (const auto& [key, g] : groups) {
    for (double pos : g.first) {
      for (double neg : g.second) {
        ordered += pos > neg ? 1.0 : (pos == neg ? 0.5 : 0.0);
        pairs += 1.0;
      }
    }
  }
  if (pairs > 0) r.ranking_accuracy = ordered / pairs;
  r.count = data.size();
  if (r.count > 0) {
    r.loss = loss / static_cast<double>(r.count);
    r.accuracy = static_cast<double>(correct) / static_cast<double>(r.count);
    double sum = 0.0;
    int classes = 0;
    for (int c = 0; c < 2; ++c) {
      if (seen[c] == 0) continue;
      sum += static_cast<double>(right[c]) / static_cast<double>(seen[c]);
      ++classes;
    }
    r.balanced_accuracy = sum / classes;
  }
  return r;
}

}  // namespace ruleforge
