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

#include "ruleforge/cli.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ruleforge/apphost.h"
#include "ruleforge/contextual.h"
#include "ruleforge/evalkit.h"
#include "ruleforge/matcher.h"
#include "ruleforge/selfsup.h"
#include "ruleforge/service.h"
#include "ruleforge/training.h"

namespace ruleforge {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

std::shared_ptr<const ScorerModel> maybe_model(const std::string& path) {
  if (path.empty()) return nullptr;
  return std::make_shared<const ScorerModel>(load_model(path));
}

struct Globals {
  std::string config_path;
};

AppConfig resolve_config(const Globals& g) {
  AppConfig c;
  if (!g.config_path.empty()) c = load_config(g.config_path, c);
  return apply_env(std::move(c), [](const char* name) { return std::getenv(name); });
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string spec;
  std::string scorer = "augmented";
  std::string model;
  std::string costs;
  std::string corpus;
  std::string remote;
  std::optional<int> max_states;
  std::optional<double> lambda;
  std::string trace;
  std::string out;
};

int run_synth(const Globals& g, const SynthArgs& a, std::ostream& out) {
  AppConfig config = resolve_config(g);
  if (!a.costs.empty()) {
    std::ifstream in(a.costs);
    if (!in) throw DataError("cannot open costs '" + a.costs + "'");
    try {
      config.costs = cost_table_from_json(json::parse(in), config.costs);
    } catch (const json::exception& e) {
      throw DataError(std::string("costs: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string("costs: ") + e.what());
    }
  }
  if (a.max_states) config.max_states = *a.max_states;
  if (a.lambda) config.lambda = *a.lambda;
  if (!a.remote.empty()) config.remote_url = a.remote;

  std::optional<Corpus> corpus;
  std::optional<CorpusIndex> index;
  if (!a.corpus.empty()) {
    corpus = load_corpus(a.corpus);
    index.emplace(*corpus);
  }
  const Specification spec = load_specification(a.spec, index ? &*index : nullptr);
  const auto scorer = make_scorer(a.scorer, config, maybe_model(a.model));

  std::ofstream trace;
  TraceSink sink;
  if (!a.trace.empty()) {
    trace = open_out(a.trace);
    sink = [&trace](const TraceEvent& e) { trace << dump_line(to_json(e)) << '\n'; };
  }
  const json report = run_synthesis(spec, *scorer, config, sink);
  if (!a.out.empty()) open_out(a.out) << report.dump(2) << '\n';
  if (report.at("found").get<bool>()) {
    out << report.at("rule").get<std::string>() << '\n';
  } else {
    out << "no rule found within " << report.at("statesExplored").get<int>() << " states\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct MatchArgs {
  std::string rule;
  std::string corpus;
  std::string sentence;
};

int run_match(const MatchArgs& a, std::ostream& out) {
  const PatternPtr rule = parse(a.rule);
  if (!rule->complete()) throw DataError("rule has holes");
  const Corpus corpus = load_corpus(a.corpus);
  Corpus selected;
  if (!a.sentence.empty()) {
    const SentencePtr s = CorpusIndex(corpus).find(a.sentence);
    if (!s) throw DataError("unknown sentence id '" + a.sentence + "'");
    selected.push_back(s);
  } else {
    selected = corpus;
  }
  for (const SentencePtr& s : selected) {
    for (const Span& span : find_matches(*rule, *s)) {
      out << s->id << '\t' << span.start << '\t' << span.end << '\t';
      for (int i = span.start; i < span.end; ++i) {
        out << (i > span.start ? " " : "") << s->tokens[i].word();
      }
      out << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string corpus;
  int n = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string items;
  std::optional<double> alt_p;
  std::optional<double> quant_p;
  std::optional<int> spec_k;
  std::optional<int> max_len;
  int threads = 0;
};

int run_gen(const Globals& g, const GenArgs& a, std::ostream& out) {
  AppConfig config = resolve_config(g);
  json patch = json::object();
  if (a.alt_p) patch["altP"] = *a.alt_p;
  if (a.quant_p) patch["quantP"] = *a.quant_p;
  if (a.spec_k) patch["specK"] = *a.spec_k;
  if (a.max_len) patch["maxLen"] = *a.max_len;
  config = merge_config(config, {{"generator", patch}});
  const Corpus corpus = load_corpus(a.corpus);
  const std::vector<GeneratedItem> items = gen_dataset(corpus, a.n, a.seed, config.generator, a.threads);
  const std::vector<TrainingExample> examples = export_training(items, config.generator);
  {
    std::ofstream f = open_out(a.out);
    write_training(f, examples);
  }
  if (!a.items.empty()) {
    std::ofstream f = open_out(a.items);
    write_items(f, items);
  }
  out << "generated " << items.size() << " items, " << examples.size() << " training examples\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string out;
  std::string heldout;
  TrainConfig config;
};

int run_train(const TrainArgs& a, std::ostream& out) {
  const std::vector<TrainingExample> data = load_training(a.data);
  std::vector<TrainingExample> heldout;
  if (!a.heldout.empty()) heldout = load_training(a.heldout);
  EpochHook hook;
  if (!heldout.empty()) {
    hook = [&](int stage, int epoch, const ScorerModel& m) {
      const LossReport r = evaluate_loss(m, heldout);
      out << "stage " << stage + 1 << " epoch " << epoch + 1 << ": held-out loss " << r.loss
          << ", balanced accuracy " << r.balanced_accuracy
          << ", ranking accuracy " << r.ranking_accuracy << '\n';
    };
  }
  const ScorerModel model = train_contextual(data, a.config, hook);
  save_model(model, a.out);
  out << "trained on " << data.size() << " examples\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string items;
  std::vector<std::string> scorers = {"static"};
  std::string model;
  std::optional<int> budget;
  std::string report;
  std::uint64_t seed = 1;
  int threads = 1;
  bool no_prune = false;
};

int run_eval_intrinsic(const Globals& g, const EvalArgs& a, std::ostream& out) {
  AppConfig config = resolve_config(g);
  if (a.budget) config.max_states = *a.budget;
  const std::vector<GeneratedItem> items = load_items(a.items);
  const auto model = maybe_model(a.model);
  SearchConfig search;
  search.max_states = config.max_states;
  search.costs = config.costs;
  search.pruning = !a.no_prune;

  std::vector<IntrinsicReport> reports;
  for (const std::string& name : a.scorers) {
    ScorerFactory factory;
    if (name == "oracle") {
      factory = [](const GeneratedItem& it) {
        return std::make_unique<OraclePseudoScorer>(it.rule, it.spec);
      };
    } else if (name == "random") {
      factory = [seed = a.seed](const GeneratedItem&) {
        return std::make_unique<RandomScorer>(seed);
      };
    } else {
      make_scorer(name, config, model);  // fail early on a bad name or missing model
      factory = [&config, &model, name](const GeneratedItem&) {
        return make_scorer(name, config, model);
      };
    }
    reports.push_back(intrinsic_eval(items, factory, search, name, a.threads));
  }
  json doc = {{"items", items.size()}, {"reports", json::array()}};
  for (const IntrinsicReport& r : reports) doc["reports"].push_back(to_json(r));
  open_out(a.report) << doc.dump(2) << '\n';
  out << format_table(reports);
  return 0;
}

// ---------------------------------------------------------------------------

struct FewShotArgs {
  std::string episodes;
  std::string mode = "surface";
  std::string scorer = "augmented";
  std::string model;
  std::string report;
  std::optional<int> budget;
  bool baseline = false;
  std::string background;
  std::uint64_t seed = 1;
  bool negative_supports = false;
};

int run_eval_fewshot(const Globals& g, const FewShotArgs& a, std::ostream& out) {
  AppConfig config = resolve_config(g);
  if (a.budget) config.max_states = *a.budget;
  const std::vector<Episode> episodes = load_episodes(a.episodes);
  const auto scorer = make_scorer(a.scorer, config, maybe_model(a.model));
  FewShotConfig fs;
  fs.mode = a.mode == "path" ? SpecMode::kSimplifiedSyntax : SpecMode::kSurface;
  fs.search.max_states = config.max_states;
  fs.search.costs = config.costs;
  fs.negative_supports = a.negative_supports;

  std::vector<std::string> all_pred;
  std::vector<std::string> all_gold;
  std::set<std::string> targets;
  json per_episode = json::array();
  for (const Episode& e : episodes) {
    const FewShotResult r = fewshot_predict(e, *scorer, fs);
    json rules = json::object();
    for (const auto& [label, rule] : r.rules) rules[label] = print(rule);
    json golds = json::array();
    for (const EpisodeSentence& q : e.queries) {
      golds.push_back(q.gold);
      all_gold.push_back(q.gold);
    }
    for (const auto& [label, supports] : e.support) targets.insert(label);
    all_pred.insert(all_pred.end(), r.predictions.begin(), r.predictions.end());
    per_episode.push_back(
        {{"rules", std::move(rules)}, {"predictions", r.predictions}, {"golds", std::move(golds)}});
  }
  const double f1 = micro_f1(all_pred, all_gold, targets);
  json doc = {{"mode", a.mode},           {"scorer", a.scorer},
              {"budget", config.max_states}, {"episodes", episodes.size()},
              {"f1", f1},                 {"perEpisode", std::move(per_episode)}};
  out << "synthesis micro-F1: " << f1 << '\n';
  if (a.baseline) {
    std::vector<EpisodeSentence> background;
    if (!a.background.empty()) background = load_background(a.background);
    Rng rng(a.seed);
    std::vector<std::string> base_pred;
    json per = json::array();
    for (const Episode& e : episodes) {
      std::vector<std::string> p = baseline_predict(e, background, rng);
      per.push_back(p);
      base_pred.insert(base_pred.end(), p.begin(), p.end());
    }
    const double bf1 = micro_f1(base_pred, all_gold, targets);
    doc["baseline"] = {{"seed", a.seed}, {"f1", bf1}, {"predictions", std::move(per)}};
    out << "baseline micro-F1: " << bf1 << '\n';
  }
  open_out(a.report) << doc.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string corpus;
  std::string model;
};

int run_serve(const Globals& g, const ServeArgs& a, std::ostream& out) {
  const AppConfig config = resolve_config(g);
  Service service(load_corpus(a.corpus), maybe_model(a.model), config);
  out << "listening on " << a.host << ':' << a.port << '\n' << std::flush;
  if (!serve(service, a.host, a.port)) throw DataError("cannot listen on port " + std::to_string(a.port));
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesize token-pattern rules from highlighted examples."};
  app.name("ruleforge");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Synthesize a rule for a specification");
  s->add_option("--spec", synth.spec, "Specification file")->required();
  s->add_option("--scorer", synth.scorer, "static|augmented|contextual|remote")
      ->check(CLI::IsMember({"static", "augmented", "contextual", "remote"}));
  s->add_option("--model", synth.model, "Contextual scorer model");
  s->add_option("--costs", synth.costs, "Cost table JSON");
  s->add_option("--corpus", synth.corpus, "Corpus for sentence references");
  s->add_option("--remote", synth.remote, "Remote scorer URL");
  s->add_option("--max-states", synth.max_states, "Search budget")->check(CLI::PositiveNumber);
  s->add_option("--lambda", synth.lambda, "Weight of the partial-match reward");
  s->add_option("--trace", synth.trace, "Write the search trace (JSON lines)");
  s->add_option("--out", synth.out, "Write the search report (JSON)");

  MatchArgs match;
  auto* m = app.add_subcommand("match", "Run a rule over a corpus");
  m->add_option("--rule", match.rule, "Rule text")->required();
  m->add_option("--corpus", match.corpus, "Corpus file")->required();
  m->add_option("--sentence", match.sentence, "Only this sentence id");

  GenArgs gen;
  auto* gd = app.add_subcommand("gen-data", "Generate self-supervised training data");
  gd->add_option("--corpus", gen.corpus, "Corpus file")->required();
  gd->add_option("--n", gen.n, "Number of items")->required()->check(CLI::NonNegativeNumber);
  gd->add_option("--seed", gen.seed, "Random seed")->required();
  gd->add_option("--out", gen.out, "Training file")->required();
  gd->add_option("--items", gen.items, "Also write the items (rule + spec)");
  gd->add_option("--alt-p", gen.alt_p, "Alternation probability");
  gd->add_option("--quant-p", gen.quant_p, "Quantifier probability");
  gd->add_option("--spec-k", gen.spec_k, "Sentences per specification");
  gd->add_option("--max-len", gen.max_len, "Longest source span");
  gd->add_option("--threads", gen.threads, "Worker threads (0: one per core)");

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train the contextual scorer");
  t->add_option("--data", train.data, "Training file")->required();
  t->add_option("--out", train.out, "Model file")->required();
  t->add_option("--heldout", train.heldout, "Training file for progress reports");
  t->add_option("--dim", train.config.dim, "Feature dimension (power of two)");
  t->add_option("--seed", train.config.seed, "Random seed");
  t->add_option("--lr-low", train.config.lr_low, "Lower learning-rate bound");
  t->add_option("--lr-high", train.config.lr_high, "Upper learning-rate bound");
  t->add_option("--lr-scale", train.config.lr_scale, "Learning-rate multiplier");
  t->add_option("--batch", train.config.batch_size, "Batch size")->check(CLI::PositiveNumber);

  EvalArgs ev;
  auto* ei = app.add_subcommand("eval-intrinsic", "Search effort on generated items");
  ei->add_option("--items", ev.items, "Items file")->required();
  ei->add_option("--scorer", ev.scorers, "Comma-separated scorers")
      ->delimiter(',')
      ->check(CLI::IsMember({"static", "augmented", "contextual", "remote", "oracle", "random"}));
  ei->add_option("--model", ev.model, "Contextual scorer model");
  ei->add_option("--budget", ev.budget, "States per item")->check(CLI::PositiveNumber);
  ei->add_option("--report", ev.report, "Report file (JSON)")->required();
  ei->add_option("--seed", ev.seed, "Seed of the random scorer");
  ei->add_option("--threads", ev.threads, "Worker threads")->check(CLI::PositiveNumber);
  ei->add_flag("--no-prune", ev.no_prune, "Disable pruning");

  FewShotArgs fs;
  auto* ef = app.add_subcommand("eval-fewshot", "Few-shot relation extraction");
  ef->add_option("--episodes", fs.episodes, "Episodes file")->required();
  ef->add_option("--mode", fs.mode, "surface|path")->check(CLI::IsMember({"surface", "path"}));
  ef->add_option("--scorer", fs.scorer, "static|augmented|contextual|remote")
      ->check(CLI::IsMember({"static", "augmented", "contextual", "remote"}));
  ef->add_option("--model", fs.model, "Contextual scorer model");
  ef->add_option("--report", fs.report, "Report file (JSON)")->required();
  ef->add_option("--budget", fs.budget, "States per relation")->check(CLI::PositiveNumber);
  ef->add_flag("--baseline", fs.baseline, "Also run the type-matching baseline");
  ef->add_option("--background", fs.background, "Background sentences for the baseline");
  ef->add_option("--seed", fs.seed, "Baseline seed");
  ef->add_flag("--negative-supports", fs.negative_supports,
               "Use other relations' supports as counter-examples");

  ServeArgs serve_args;
  auto* sv = app.add_subcommand("serve", "Run the HTTP service");
  sv->add_option("--port", serve_args.port, "Port")->required();
  sv->add_option("--host", serve_args.host, "Bind address");
  sv->add_option("--corpus", serve_args.corpus, "Corpus file")->required();
  sv->add_option("--model", serve_args.model, "Contextual scorer model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*s) return run_synth(g, synth, out);
    if (*m) return run_match(match, out);
    if (*gd) return run_gen(g, gen, out);
    if (*t) return run_train(train, out);
    if (*ei) return run_eval_intrinsic(g, ev, out);
    if (*ef) return run_eval_fewshot(g, fs, out);
    if (*sv) return run_serve(g, serve_args, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ScorerError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace ruleforge
