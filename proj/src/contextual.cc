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

#include "ruleforge/contextual.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>

#include "ruleforge/text.h"

namespace ruleforge {

namespace {

class Hasher {
 public:
  Hasher(std::uint32_t dim, FeatureVector& out) : mask_(dim - 1), out_(out) {}

  template <typename... Parts>
  void add(const Parts&... parts) {
    std::uint64_t h = kFnvOffset;
    ((h = fnv1a_byte(0x1f, fnv1a(std::string_view(parts), h))), ...);
    out_.push_back(static_cast<std::uint32_t>(h & mask_));
  }

 private:
  std::uint64_t mask_;
  FeatureVector& out_;
};

void check_dim(std::uint32_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("feature dimension must be a power of two");
  }
}

std::string_view bucket(int n) {
  if (n <= 0) return n == 0 ? "0" : "neg";
  if (n <= 3) {
    static constexpr std::string_view kSmall[] = {"", "1", "2", "3"};
    return kSmall[n];
  }
  if (n <= 5) return "4-5";
  if (n <= 9) return "6-9";
  return "10+";
}

// Where a hole sits relative to its ancestors.
std::string_view hole_context(const Pattern& root, const HoleSite& site) {
  if (site.under_quantifier) return "quant";
  if (site.under_not) return "not";
  const Pattern* node = &root;
  bool in_alt = false;
  bool in_quant = false;
  for (int step : site.path) {
    if (node->kind() == Pattern::Kind::kToken || node->kind() == Pattern::Kind::kHole) break;
    in_alt |= node->kind() == Pattern::Kind::kAlternation;
    in_quant |= node->kind() == Pattern::Kind::kQuantified;
    node = step == 0 ? node->left().get() : node->right().get();
  }
  if (in_alt) return "alt";
  if (in_quant) return "inquant";
  return "seq";
}

}  // namespace

void entry_features(const SpecEntry& entry, std::uint32_t dim, FeatureVector& out) {
  check_dim(dim);
  Hasher h(dim, out);
  const AnnotatedSentence& s = *entry.sentence;
  for (int i = 0; i < s.size(); ++i) {
    const std::string_view seg = entry.highlighted(i) ? "3" : "4";
    for (Field f : kAllFields) h.add(seg, field_name(f), s.tokens[i].get(f));
  }
}

void state_features(const State& state, int segment, std::uint32_t dim, FeatureVector& out) {
  check_dim(dim);
  Hasher h(dim, out);
  const std::string seg = std::to_string(segment);
  const std::string seg_bigram = seg + "b";
  const std::vector<std::string> syms = linearize_ast(*state.pattern);
  for (std::size_t i = 0; i < syms.size(); ++i) {
    h.add(seg, syms[i]);
    if (i + 1 < syms.size()) h.add(seg_bigram, syms[i], syms[i + 1]);
  }
}

void transition_features(const State& current, const State& candidate,
                         const SpecEntry& entry, std::uint32_t dim, FeatureVector& out) {
  check_dim(dim);
  const auto site = leftmost_hole(*current.pattern);
  if (!site) return;
  Hasher h(dim, out);
  std::string intro;
  ConstraintPtr introduced;
  try {
    intro = introduced_symbol(*current.pattern, *candidate.pattern);
    if (site->level == HoleLevel::kConstraint) introduced = constraint_at(candidate.pattern, site->path);
  } catch (const std::invalid_argument&) {
    // Not a single expansion of `current`; only the bags apply.
    h.add("k", "unrelated");
    return;
  }
  const std::string kind = intro.substr(0, intro.find('|'));
  const AnnotatedSentence& s = *entry.sentence;

  h.add("k", kind);
  h.add("kc", kind, hole_context(*current.pattern, *site));
  h.add("kh", kind, bucket(current.pattern->holes()));

  const bool field_is =
      introduced && introduced->kind() == Constraint::Kind::kFieldIs;

  if (entry.selections.empty()) h.add("neg", kind);
  const std::size_t max_selections = std::min<std::size_t>(entry.selections.size(), 3);
  for (std::size_t k = 0; k < max_selections; ++k) {
    const Span& sel = entry.selections[k];
    h.add("rem", kind, bucket(sel.length() - site->item_index));
    if (site->level != HoleLevel::kConstraint) continue;
    const int aligned = sel.start + site->item_index;
    if (aligned >= sel.end) {
      h.add("al", kind, "past");
    } else if (field_is) {
      const bool hit = s.tokens[aligned].get(introduced->field()) == introduced->value();
      h.add("al", kind, hit ? "match" : "miss");
    } else {
      h.add("alk", kind);
    }
  }

  if (field_is) {
    int inside = 0;
    int outside = 0;
    for (int i = 0; i < s.size(); ++i) {
      if (s.tokens[i].get(introduced->field()) != introduced->value()) continue;
      ++(entry.highlighted(i) ? inside : outside);
    }
    h.add("hl", kind, bucket(inside));
    h.add("out", kind, bucket(outside));
  }

  for (const Span& sel : entry.selections) {
    for (int i = sel.start; i < sel.end; ++i) {
      for (Field f : kAllFields) h.add("x", intro, field_name(f), s.tokens[i].get(f));
    }
  }
}

FeatureVector featurize(const State& current, const State& candidate, const SpecEntry& entry,
                        std::uint32_t dim) {
  FeatureVector out;
  entry_features(entry, dim, out);
  state_features(current, 1, dim, out);
  state_features(candidate, 2, dim, out);
  transition_features(current, candidate, entry, dim, out);
  return out;
}

// ---------------------------------------------------------------------------
// Model

ScorerModel ScorerModel::zeros(std::uint32_t dim) {
  check_dim(dim);
  ScorerModel m;
  m.dim = dim;
  m.weights.assign(dim, 0.0);
  return m;
}

double ScorerModel::logit(std::span<const std::uint32_t> features) const {
  double z = bias;
  for (std::uint32_t f : features) z += weights[f];
  return z;
}

namespace {

double sigmoid_open(double z) {
  const double p = 1.0 / (1.0 + std::exp(-z));
  constexpr double kLow = std::numeric_limits<double>::min();
  constexpr double kHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  return std::clamp(p, kLow, kHigh);
}

double sum_weights(const ScorerModel& m, const FeatureVector& f) {
  double z = 0.0;
  for (std::uint32_t i : f) z += m.weights[i];
  return z;
}

}  // namespace

double contextual_score(const ScorerModel& model, std::span<const std::uint32_t> features) {
  return sigmoid_open(model.logit(features));
}

nlohmann::json to_json(const ScorerModel& model) {
  nlohmann::json weights = nlohmann::json::array();
  for (std::uint32_t i = 0; i < model.weights.size(); ++i) {
    if (model.weights[i] != 0.0) weights.push_back(nlohmann::json::array({i, model.weights[i]}));
  }
  return {{"version", model.version},
          {"dim", model.dim},
          {"bias", model.bias},
          {"weights", std::move(weights)},
          {"trainingMeta", model.training_meta}};
}

ScorerModel model_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("version").get<int>();
    if (version != kModelVersion) {
      throw DataError("unsupported model version " + std::to_string(version));
    }
    ScorerModel m = ScorerModel::zeros(j.at("dim").get<std::uint32_t>());
    m.bias = j.at("bias").get<double>();
    if (!std::isfinite(m.bias)) throw DataError("model bias is not finite");
    for (const auto& w : j.at("weights")) {
      const std::uint32_t i = w.at(0).get<std::uint32_t>();
      const double v = w.at(1).get<double>();
      if (i >= m.dim) throw DataError("model weight index out of range");
      if (!std::isfinite(v)) throw DataError("model weight is not finite");
      m.weights[i] = v;
    }
    if (j.contains("trainingMeta")) m.training_meta = j.at("trainingMeta");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  }
}

void save_model(const ScorerModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model '" + path.string() + "'");
  out << to_json(model).dump() << '\n';
}

ScorerModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  }
  return model_from_json(j);
}

double ContextualScorer::score_transition(const State& current, const State& candidate,
                                          const SpecEntry& entry) const {
  return score_batch(current, std::span<const State>(&candidate, 1), entry).front();
}

std::vector<double> ContextualScorer::score_batch(const State& current,
                                                  std::span<const State> candidates,
                                                  const SpecEntry& entry) const {
  const ScorerModel& m = *model_;
  FeatureVector shared;
  entry_features(entry, m.dim, shared);
  state_features(current, 1, m.dim, shared);
  const double base = m.bias + sum_weights(m, shared);
  std::vector<double> out;
  out.reserve(candidates.size());
  FeatureVector own;
  for (const State& c : candidates) {
    own.clear();
    state_features(c, 2, m.dim, own);
    transition_features(current, c, entry, m.dim, own);
    out.push_back(sigmoid_open(base + sum_weights(m, own)));
  }
  return out;
}

}  // namespace ruleforge
