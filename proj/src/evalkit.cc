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

#include "ruleforge/evalkit.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "ruleforge/matcher.h"
#include "ruleforge/text.h"

namespace ruleforge {

using nlohmann::json;

SummaryStats summarize(std::vector<double> values) {
  SummaryStats s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const std::size_t n = values.size();
  s.avg = sum / static_cast<double>(n);
  s.median = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
  s.min = values.front();
  s.max = values.back();
  return s;
}

IntrinsicReport intrinsic_eval(const std::vector<GeneratedItem>& items,
                               const ScorerFactory& factory, const SearchConfig& config,
                               const std::string& scorer_name, int threads) {
  IntrinsicReport report;
  report.scorer = scorer_name;
  report.budget = config.max_states;
  report.total = static_cast<int>(items.size());
  report.rows.resize(items.size());
  SearchConfig quiet = config;
  quiet.record_trace = false;

  auto run = [&](std::size_t i) {
    const GeneratedItem& item = items[i];
    const std::unique_ptr<Scorer> scorer = factory(item);
    const SearchReport r = synthesize(item.spec, *scorer, quiet);
    IntrinsicRow& row = report.rows[i];
    row.index = item.index;
    row.found = r.found;
    row.steps = r.states_explored;
    row.ceiling = item.ceiling();
    if (r.found) row.rule = print(r.rule);
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(items.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < items.size(); ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = static_cast<std::size_t>(w); i < items.size();
               i += static_cast<std::size_t>(threads)) {
            run(i);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<double> steps;
  std::vector<double> ceilings;
  for (const IntrinsicRow& row : report.rows) {
    ceilings.push_back(row.ceiling);
    if (!row.found) continue;
    ++report.found;
    steps.push_back(row.steps);
    if (row.steps < row.ceiling) ++report.below_ceiling;
  }
  report.steps = summarize(std::move(steps));
  report.ceiling = summarize(std::move(ceilings));
  return report;
}

namespace {

json to_json(const SummaryStats& s) {
  return {{"count", s.count}, {"avg", s.avg}, {"median", s.median}, {"max", s.max},
          {"min", s.min}};
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

json to_json(const IntrinsicReport& r) {
  json rows = json::array();
  for (const IntrinsicRow& row : r.rows) {
    rows.push_back({{"index", row.index},
                    {"found", row.found},
                    {"steps", row.steps},
                    {"ceiling", row.ceiling},
                    {"rule", row.rule}});
  }
  return {{"scorer", r.scorer},
          {"budget", r.budget},
          {"total", r.total},
          {"found", r.found},
          {"steps", to_json(r.steps)},
          {"ceiling", to_json(r.ceiling)},
          {"belowCeiling", r.below_ceiling},
          {"note", "steps statistics cover solved items only; ceiling covers all items"},
          {"rows", std::move(rows)}};
}

std::string format_table(const std::vector<IntrinsicReport>& reports) {
  std::vector<std::pair<std::string, std::vector<std::string>>> lines;
  auto row = [&](const std::string& name, auto cell) {
    std::vector<std::string> cells;
    for (const IntrinsicReport& r : reports) cells.push_back(cell(r));
    lines.emplace_back(name, std::move(cells));
  };
  row("", [](const IntrinsicReport& r) { return r.scorer; });
  row("Timeout (states)", [](const IntrinsicReport& r) { return std::to_string(r.budget); });
  row("Rules found", [](const IntrinsicReport& r) {
    return std::to_string(r.found) + "/" + std::to_string(r.total);
  });
  row("Ceiling avg", [](const IntrinsicReport& r) { return fixed(r.ceiling.avg); });
  row("Ceiling median", [](const IntrinsicReport& r) { return fixed(r.ceiling.median); });
  row("Ceiling max", [](const IntrinsicReport& r) { return fixed(r.ceiling.max); });
  row("Ceiling min", [](const IntrinsicReport& r) { return fixed(r.ceiling.min); });
  row("Steps avg", [](const IntrinsicReport& r) { return fixed(r.steps.avg); });
  row("Steps median", [](const IntrinsicReport& r) { return fixed(r.steps.median); });
  row("Steps max", [](const IntrinsicReport& r) { return fixed(r.steps.max); });
  row("Steps min", [](const IntrinsicReport& r) { return fixed(r.steps.min); });

  std::size_t name_width = 0;
  std::vector<std::size_t> widths(reports.size(), 0);
  for (const auto& [name, cells] : lines) {
    name_width = std::max(name_width, name.size());
    for (std::size_t i = 0; i < cells.size(); ++i) widths[i] = std::max(widths[i], cells[i].size());
  }
  std::ostringstream out;
  for (const auto& [name, cells] : lines) {
    out << name << std::string(name_width - name.size(), ' ');
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << "  " << std::string(widths[i] - cells[i].size(), ' ') << cells[i];
    }
    out << '\n';
  }
  out << "(steps over solved items only)\n";
  return out.str();
}

OraclePseudoScorer::OraclePseudoScorer(const PatternPtr& rule, const Specification& spec) {
  for (const DerivationStep& step : oracle_derivation(rule, spec)) {
    path_.insert(print(step.siblings[step.chosen].pattern));
  }
}

double OraclePseudoScorer::score_transition(const State&, const State& candidate,
                                            const SpecEntry&) const {
  return path_.count(print(candidate.pattern)) ? std::numeric_limits<double>::infinity() : 0.0;
}

double RandomScorer::score_transition(const State& current, const State& candidate,
                                      const SpecEntry&) const {
  std::uint64_t h = fnv1a(print(current.pattern));
  h = fnv1a_byte(0x1f, h);
  h = fnv1a(print(candidate.pattern), h);
  return static_cast<double>(splitmix64(h ^ splitmix64(seed_)) >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Episodes

namespace {

Span span_at(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2) {
    throw DataError(std::string("field '") + key + "' must be [start, end]");
  }
  return Span{v[0].get<int>(), v[1].get<int>()};
}

void check_mention(const EpisodeSentence& s) {
  for (const Span& sp : {s.subj, s.obj}) {
    if (sp.start < 0 || sp.start >= sp.end || sp.end > s.sentence->size()) {
      throw DataError("entity span out of range");
    }
  }
  if (s.subj.start < s.obj.end && s.obj.start < s.subj.end) {
    throw DataError("entity spans overlap");
  }
  if (s.subj_type.empty() || s.obj_type.empty()) throw DataError("empty entity type");
}

}  // namespace

EpisodeSentence episode_sentence_from_json(const json& j) {
  try {
    EpisodeSentence s;
    auto sentence = std::make_shared<AnnotatedSentence>(sentence_from_json(j.at("sentence")));
    s.sentence = std::move(sentence);
    s.subj = span_at(j, "subj");
    s.obj = span_at(j, "obj");
    s.subj_type = j.at("subjType").get<std::string>();
    s.obj_type = j.at("objType").get<std::string>();
    s.gold = j.value("gold", std::string());
    check_mention(s);
    return s;
  } catch (const json::exception& e) {
    throw DataError(std::string("episode sentence: ") + e.what());
  }
}

json to_json(const EpisodeSentence& s) {
  return {{"sentence", to_json(*s.sentence)},
          {"subj", json::array({s.subj.start, s.subj.end})},
          {"subjType", s.subj_type},
          {"obj", json::array({s.obj.start, s.obj.end})},
          {"objType", s.obj_type},
          {"gold", s.gold}};
}

Episode episode_from_json(const json& j) {
  try {
    Episode e;
    e.way_count = j.at("wayCount").get<int>();
    e.shot_count = j.at("shotCount").get<int>();
    for (const auto& [label, list] : j.at("support").items()) {
      if (label == kNoRelation) throw DataError("no_relation cannot be a support relation");
      auto& out = e.support[label];
      for (const json& sj : list) {
        EpisodeSentence s = episode_sentence_from_json(sj);
        if (s.gold.empty()) s.gold = label;
        if (s.gold != label) throw DataError("support sentence labelled '" + s.gold + "'");
        out.push_back(std::move(s));
      }
      if (static_cast<int>(out.size()) != e.shot_count) {
        throw DataError("relation '" + label + "' does not have shotCount supports");
      }
    }
    if (static_cast<int>(e.support.size()) != e.way_count) {
      throw DataError("support does not have wayCount relations");
    }
    for (const json& qj : j.at("queries")) {
      EpisodeSentence q = episode_sentence_from_json(qj);
      if (q.gold != kNoRelation && !e.support.count(q.gold)) {
        throw DataError("query gold '" + q.gold + "' is not a support relation");
      }
      e.queries.push_back(std::move(q));
    }
    return e;
  } catch (const json::exception& ex) {
    throw DataError(std::string("episode: ") + ex.what());
  }
}

json to_json(const Episode& e) {
  json support = json::object();
  for (const auto& [label, list] : e.support) {
    json arr = json::array();
    for (const EpisodeSentence& s : list) arr.push_back(to_json(s));
    support[label] = std::move(arr);
  }
  json queries = json::array();
  for (const EpisodeSentence& q : e.queries) queries.push_back(to_json(q));
  return {{"wayCount", e.way_count},
          {"shotCount", e.shot_count},
          {"support", std::move(support)},
          {"queries", std::move(queries)}};
}

namespace {

template <typename T, typename Parse>
std::vector<T> load_lines(const std::filesystem::path& path, const char* what, Parse parse_one) {
  std::ifstream in(path);
  if (!in) throw DataError(std::string("cannot open ") + what + " '" + path.string() + "'");
  std::vector<T> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_one(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<Episode> load_episodes(const std::filesystem::path& path) {
  return load_lines<Episode>(path, "episodes", [](const json& j) { return episode_from_json(j); });
}

std::vector<EpisodeSentence> load_background(const std::filesystem::path& path) {
  return load_lines<EpisodeSentence>(path, "background", [](const json& j) {
    EpisodeSentence s = episode_sentence_from_json(j);
    if (s.gold.empty()) s.gold = kNoRelation;
    return s;
  });
}

SpecEntry relation_entry(const EpisodeSentence& s, SpecMode mode) {
  if (mode == SpecMode::kSurface) {
    const Span hull{std::min(s.subj.start, s.obj.start), std::max(s.subj.end, s.obj.end)};
    return make_entry(s.sentence, {hull});
  }
  auto path = std::make_shared<AnnotatedSentence>(path_sentence(*s.sentence, s.subj, s.obj));
  const int n = path->size();
  return make_entry(std::move(path), {Span{0, n}});
}

FewShotResult fewshot_predict(const Episode& episode, const Scorer& scorer,
                              const FewShotConfig& config) {
  FewShotResult result;
  SearchConfig search = config.search;
  search.record_trace = false;
  for (const auto& [label, supports] : episode.support) {
    Specification spec;
    spec.mode = config.mode;
    for (const EpisodeSentence& s : supports) spec.entries.push_back(relation_entry(s, config.mode));
    if (config.negative_supports) {
      for (const auto& [other, others] : episode.support) {
        if (other == label) continue;
        for (const EpisodeSentence& s : others) {
          SpecEntry e = relation_entry(s, config.mode);
          e.selections.clear();
          spec.entries.push_back(std::move(e));
        }
      }
    }
    const SearchReport r = synthesize(spec, scorer, search);
    if (r.found) result.rules.emplace(label, r.rule);
  }
  for (const EpisodeSentence& q : episode.queries) {
    const SpecEntry entry = relation_entry(q, config.mode);
    std::string best = kNoRelation;
    int best_tokens = -1;
    for (const auto& [label, rule] : result.rules) {
      if (!matches_exact(*rule, *entry.sentence, entry.selections.front())) continue;
      // Labels come in increasing order, so ties keep the smaller one.
      if (rule->token_patterns() > best_tokens) {
        best = label;
        best_tokens = rule->token_patterns();
      }
    }
    result.predictions.push_back(best);
  }
  return result;
}

std::vector<std::string> baseline_predict(const Episode& episode,
                                          const std::vector<EpisodeSentence>& background,
                                          Rng& rng) {
  std::vector<std::string> out;
  for (const EpisodeSentence& q : episode.queries) {
    auto same_types = [&](const EpisodeSentence& s) {
      return s.subj_type == q.subj_type && s.obj_type == q.obj_type;
    };
    std::vector<std::pair<std::string, double>> weights;
    for (const auto& [label, supports] : episode.support) {
      const auto n = std::count_if(supports.begin(), supports.end(), same_types);
      if (n > 0) weights.emplace_back(label, static_cast<double>(n));
    }
    if (std::any_of(background.begin(), background.end(), same_types)) {
      weights.emplace_back(kNoRelation, 1.0);
    }
    double total = 0.0;
    for (const auto& w : weights) total += w.second;
    if (total == 0.0) {
      out.emplace_back(kNoRelation);
      continue;
    }
    double x = uniform01(rng) * total;
    std::string pick = weights.back().first;
    for (const auto& [label, w] : weights) {
      if (x < w) {
        pick = label;
        break;
      }
      x -= w;
    }
    out.push_back(pick);
  }
  return out;
}

double micro_f1(const std::vector<std::string>& predictions, const std::vector<std::string>& golds,
                const std::set<std::string>& targets) {
  if (predictions.size() != golds.size()) {
    throw std::invalid_argument("predictions and golds differ in length");
  }
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred_target = targets.count(predictions[i]) > 0;
    const bool gold_target = targets.count(golds[i]) > 0;
    if (predictions[i] == golds[i]) {
      if (pred_target) tp += 1.0;
      continue;
    }
    if (pred_target) fp += 1.0;
    if (gold_target) fn += 1.0;
  }
  const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  const double r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

}  // namespace ruleforge
