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

#include "ruleforge/selfsup.h"

#include <algorithm>
#include <istream>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "ruleforge/matcher.h"

namespace ruleforge {

using nlohmann::json;

json to_json(const GeneratorConfig& c) {
  return {{"maxLen", c.max_len},   {"altP", c.alt_p},         {"quantP", c.quant_p},
          {"specK", c.spec_k},     {"retries", c.retries},    {"negativeCap", c.negative_cap}};
}

GeneratorConfig generator_config_from_json(const json& j) {
  GeneratorConfig c;
  c.max_len = j.value("maxLen", c.max_len);
  c.alt_p = j.value("altP", c.alt_p);
  c.quant_p = j.value("quantP", c.quant_p);
  c.spec_k = j.value("specK", c.spec_k);
  c.retries = j.value("retries", c.retries);
  c.negative_cap = j.value("negativeCap", c.negative_cap);
  if (c.max_len < 1 || c.spec_k < 1 || c.retries < 1 || c.negative_cap < 0 ||
      !(c.alt_p >= 0 && c.alt_p <= 1) || !(c.quant_p >= 0 && c.quant_p <= 1)) {
    throw DataError("generator config out of range");
  }
  return c;
}

namespace {

constexpr Field kGeneratedFields[] = {Field::kWord, Field::kLemma, Field::kTag};

ConstraintPtr random_constraint(const Token& t, Rng& rng) {
  const Field f = kGeneratedFields[uniform_index(rng, 3)];
  return Constraint::field_is(f, t.get(f));
}

}  // namespace

Witness gen_base_rule(const Corpus& corpus, Rng& rng, const GeneratorConfig& config) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  const SentencePtr& s = corpus[uniform_index(rng, corpus.size())];
  const int len = 1 + static_cast<int>(uniform_index(
                          rng, static_cast<std::size_t>(std::min(config.max_len, s->size()))));
  const int start = static_cast<int>(uniform_index(rng, s->size() - len + 1));
  std::vector<PatternPtr> items;
  for (int i = start; i < start + len; ++i) {
    items.push_back(Pattern::token(random_constraint(s->tokens[i], rng)));
  }
  return {concat_of(items), s, Span{start, start + len}};
}

std::optional<Witness> add_alternation(const PatternPtr& rule, const Corpus& corpus, Rng& rng) {
  std::vector<PatternPtr> items = concat_items(rule);
  for (const PatternPtr& item : items) {
    if (item->kind() != Pattern::Kind::kToken) {
      throw std::invalid_argument("alternation needs a plain token sequence");
    }
  }
  const std::size_t pos = uniform_index(rng, items.size());
  const PatternPtr original = items[pos];
  std::vector<PatternPtr> probe_items = items;
  probe_items[pos] = Pattern::token(Constraint::wildcard());
  const PatternPtr probe = concat_of(probe_items);

  std::vector<CorpusHit> candidates;
  for (const CorpusHit& hit : query_corpus(corpus, *probe, SIZE_MAX)) {
    const Token& t = hit.sentence->tokens[hit.span.start + static_cast<int>(pos)];
    if (!satisfies(*original->constraint(), t)) candidates.push_back(hit);
  }
  if (candidates.empty()) return std::nullopt;
  const CorpusHit& pick = candidates[uniform_index(rng, candidates.size())];
  const Token& t = pick.sentence->tokens[pick.span.start + static_cast<int>(pos)];
  items[pos] = Pattern::alternation(original, Pattern::token(random_constraint(t, rng)));
  return Witness{concat_of(items), pick.sentence, pick.span};
}

std::optional<Witness> add_quantifier(const PatternPtr& rule, const Corpus& corpus, Rng& rng) {
  std::vector<PatternPtr> items = concat_items(rule);
  const std::size_t pos = uniform_index(rng, items.size());
  if (items[pos]->kind() == Pattern::Kind::kQuantified) return std::nullopt;
  static constexpr Quantifier kChoices[] = {Quantifier::kZeroOrOne, Quantifier::kZeroOrMore,
                                            Quantifier::kOneOrMore};
  const Quantifier q = kChoices[uniform_index(rng, 3)];
  items[pos] = Pattern::quantified(items[pos], q);
  const PatternPtr wrapped = concat_of(items);
  const int plain_len = static_cast<int>(items.size());

  std::size_t before = 0;
  std::size_t after = 0;
  std::vector<CorpusHit> witnesses;
  for (const SentencePtr& s : corpus) {
    const std::vector<Span> old_spans = find_matches(*rule, *s);
    const std::vector<Span> new_spans = find_matches(*wrapped, *s);
    before += old_spans.size();
    after += new_spans.size();
    for (const Span& span : new_spans) {
      const bool repeated = span.length() > plain_len;
      if (q == Quantifier::kOneOrMore ? repeated : old_spans != new_spans) {
        witnesses.push_back({s, span});
        break;
      }
    }
  }
  const bool keep = q == Quantifier::kOneOrMore ? after >= before && !witnesses.empty()
                                                : after > before && !witnesses.empty();
  if (!keep) return std::nullopt;
  const CorpusHit& pick = witnesses[uniform_index(rng, witnesses.size())];
  return Witness{wrapped, pick.sentence, pick.span};
}

Specification build_spec(const PatternPtr& rule, const Corpus& corpus, int k, Rng& rng,
                         const std::vector<SentencePtr>& include) {
  Specification spec;
  std::set<const AnnotatedSentence*> used;
  auto add = [&](const SentencePtr& s) {
    if (static_cast<int>(spec.entries.size()) >= k || !used.insert(s.get()).second) return;
    std::vector<Span> spans = find_matches(*rule, *s);
    if (!spans.empty()) spec.entries.push_back(make_entry(s, std::move(spans)));
  };
  for (const SentencePtr& s : include) add(s);
  std::vector<SentencePtr> pool;
  for (const CorpusHit& hit : query_corpus(corpus, *rule, SIZE_MAX)) {
    if (!used.count(hit.sentence.get()) && (pool.empty() || pool.back() != hit.sentence)) {
      pool.push_back(hit.sentence);
    }
  }
  shuffle(pool, rng);
  for (const SentencePtr& s : pool) add(s);
  return spec;
}

std::vector<DerivationStep> oracle_derivation(const PatternPtr& rule, const Specification& spec,
                                              const CostTable& costs) {
  if (!rule->complete()) throw std::invalid_argument("oracle derivation needs a complete rule");
  const PatternPtr target = canonicalize(rule);
  const Vocabulary vocab(spec);
  std::vector<DerivationStep> out;
  State s = State::root(costs);
  while (!s.pattern->complete()) {
    DerivationStep step{s, -1, expansions(s, vocab, costs)};
    const std::string want = introduced_symbol(*s.pattern, *target);
    for (std::size_t i = 0; i < step.siblings.size(); ++i) {
      if (introduced_symbol(*s.pattern, *step.siblings[i].pattern) == want) {
        step.chosen = static_cast<int>(i);
        break;
      }
    }
    if (step.chosen < 0) throw DataError("rule not derivable under spec vocabulary");
    s = step.siblings[step.chosen];
    out.push_back(std::move(step));
  }
  if (!equal(*s.pattern, *target)) throw DataError("oracle derivation diverged from the rule");
  return out;
}

PatternPtr replay(const std::vector<DerivationStep>& derivation) {
  if (derivation.empty()) return Pattern::hole();
  const DerivationStep& last = derivation.back();
  return last.siblings.at(last.chosen).pattern;
}

std::optional<GeneratedItem> generate_item(const Corpus& corpus, std::uint64_t seed,
                                           const GeneratorConfig& config) {
  Rng rng(seed);
  for (int attempt = 0; attempt < config.retries; ++attempt) {
    Witness base = gen_base_rule(corpus, rng, config);
    PatternPtr rule = base.rule;
    std::vector<SentencePtr> include = {base.sentence};
    if (bernoulli(rng, config.alt_p)) {
      if (auto w = add_alternation(rule, corpus, rng)) {
        rule = w->rule;
        include.push_back(w->sentence);
      }
    }
    if (bernoulli(rng, config.quant_p)) {
      if (auto w = add_quantifier(rule, corpus, rng)) {
        rule = w->rule;
        include.push_back(w->sentence);
      }
    }
    Specification spec = build_spec(rule, corpus, config.spec_k, rng, include);
    if (spec.entries.empty()) continue;
    if (!check_spec(*rule, spec)) throw std::logic_error("generated spec disagrees with its rule");
    GeneratedItem item;
    try {
      item.derivation = oracle_derivation(rule, spec);
    } catch (const DataError&) {
      continue;
    }
    // The derivation must rebuild the rule exactly.
    if (!equal(*replay(item.derivation), *canonicalize(rule))) continue;
    item.seed = seed;
    item.rule = canonicalize(rule);
    item.spec = std::move(spec);
    return item;
  }
  return std::nullopt;
}

std::vector<GeneratedItem> gen_dataset(const Corpus& corpus, int n, std::uint64_t seed,
                                       const GeneratorConfig& config, int threads) {
  if (n < 0) throw std::invalid_argument("item count must be non-negative");
  if (n > 0 && corpus.empty()) throw DataError("cannot generate from an empty corpus");
  std::vector<GeneratedItem> items(static_cast<std::size_t>(n));
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(n, 1));
  constexpr int kMaxReseeds = 100;
  auto work = [&](int worker) {
    for (int i = worker; i < n; i += threads) {
      const std::uint64_t item_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
      std::optional<GeneratedItem> item;
      for (int r = 0; r < kMaxReseeds && !item; ++r) {
        item = generate_item(corpus, r == 0 ? item_seed : derive_seed(item_seed, r), config);
      }
      if (!item) throw DataError("corpus yields no usable rules");
      item->index = i;
      items[static_cast<std::size_t>(i)] = std::move(*item);
    }
  };
  if (threads == 1) {
    work(0);
    return items;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        work(w);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return items;
}

std::vector<TrainingExample> export_training(const std::vector<GeneratedItem>& items,
                                             const GeneratorConfig& config) {
  std::vector<TrainingExample> out;
  for (const GeneratedItem& item : items) {
    std::vector<std::shared_ptr<const SpecEntry>> entries;
    for (const SpecEntry& e : item.spec.entries) {
      entries.push_back(std::make_shared<const SpecEntry>(e));
    }
    for (std::size_t j = 0; j < item.derivation.size(); ++j) {
      const DerivationStep& step = item.derivation[j];
      std::vector<int> negatives;
      for (int i = 0; i < static_cast<int>(step.siblings.size()); ++i) {
        if (i != step.chosen && !prune_check(step.siblings[i], item.spec)) negatives.push_back(i);
      }
      if (static_cast<int>(negatives.size()) > config.negative_cap) {
        Rng rng(derive_seed(item.seed ^ 0x6e6567ULL, j));
        shuffle(negatives, rng);
        negatives.resize(static_cast<std::size_t>(config.negative_cap));
        std::sort(negatives.begin(), negatives.end());
      }
      for (const auto& entry : entries) {
        auto emit = [&](int sibling, int label) {
          out.push_back({entry, step.current, step.siblings[sibling], label, item.index,
                         static_cast<int>(j)});
        };
        emit(step.chosen, 1);
        for (int i : negatives) emit(i, 0);
      }
    }
  }
  return out;
}

void write_items(std::ostream& out, const std::vector<GeneratedItem>& items) {
  out << dump_line({{"format", "ruleforge-items"}, {"version", 1}, {"count", items.size()}})
      << '\n';
  for (const GeneratedItem& item : items) {
    out << dump_line({{"index", item.index},
                      {"seed", item.seed},
                      {"rule", print(item.rule)},
                      {"spec", to_json(item.spec)}})
        << '\n';
  }
}

std::vector<GeneratedItem> read_items(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("items file: missing header");
  try {
    const json header = json::parse(line);
    if (header.value("format", "") != "ruleforge-items" || header.value("version", 0) != 1) {
      throw DataError("items file: unrecognized header");
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("items file: bad header (") + e.what() + ")");
  }
  std::vector<GeneratedItem> items;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "items file: line " + std::to_string(lineno);
    try {
      const json j = json::parse(line);
      GeneratedItem item;
      item.index = j.at("index").get<int>();
      item.seed = j.at("seed").get<std::uint64_t>();
      item.rule = parse(j.at("rule").get<std::string>());
      item.spec = spec_from_json(j.at("spec"), nullptr);
      item.derivation = oracle_derivation(item.rule, item.spec);
      items.push_back(std::move(item));
    } catch (const json::exception& e) {
      throw DataError(where + ": " + e.what());
    } catch (const ParseError& e) {
      throw DataError(where + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return items;
}

std::vector<GeneratedItem> load_items(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open items file '" + path.string() + "'");
  return read_items(in);
}

}  // namespace ruleforge
