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

#include "ruleforge/apphost.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>

#include "ruleforge/remote.h"

namespace ruleforge {

using nlohmann::json;

AppConfig merge_config(AppConfig base, const json& j) {
  if (!j.is_object()) throw DataError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "costs") {
        base.costs = cost_table_from_json(value, base.costs);
      } else if (key == "generator") {
        json merged = to_json(base.generator);
        merged.update(value);
        base.generator = generator_config_from_json(merged);
      } else if (key == "lambda") {
        base.lambda = value.get<double>();
      } else if (key == "maxStates") {
        base.max_states = value.get<int>();
      } else if (key == "maxJobs") {
        base.max_jobs = value.get<int>();
      } else if (key == "remote") {
        base.remote_url = value.value("url", base.remote_url);
        base.remote_timeout_ms = value.value("timeoutMs", base.remote_timeout_ms);
      } else {
        throw DataError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  if (base.max_states < 1 || base.max_jobs < 1 || base.remote_timeout_ms < 1) {
    throw DataError("config: maxStates, maxJobs and timeoutMs must be positive");
  }
  if (!std::isfinite(base.lambda) || base.lambda < 0) {
    throw DataError("config: lambda must be a non-negative number");
  }
  return base;
}

AppConfig load_config(const std::filesystem::path& path, AppConfig base) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  return merge_config(std::move(base), j);
}

namespace {

double env_number(const char* name, const char* text) {
  char* end = nullptr;
  const double v = std::strtod(text, &end);
  if (end == text || *end != '\0') {
    throw DataError(std::string(name) + ": not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

AppConfig apply_env(AppConfig base, const EnvLookup& getenv) {
  json patch = json::object();
  auto number = [&](const char* name, const json::json_pointer& where, bool integral) {
    if (const char* v = getenv(name)) {
      const double d = env_number(name, v);
      if (integral) {
        patch[where] = static_cast<int>(d);
      } else {
        patch[where] = d;
      }
    }
  };
  number("RULEFORGE_LAMBDA", json::json_pointer("/lambda"), false);
  number("RULEFORGE_MAX_STATES", json::json_pointer("/maxStates"), true);
  number("RULEFORGE_MAX_JOBS", json::json_pointer("/maxJobs"), true);
  number("RULEFORGE_REMOTE_TIMEOUT_MS", json::json_pointer("/remote/timeoutMs"), true);
  number("RULEFORGE_ALT_P", json::json_pointer("/generator/altP"), false);
  number("RULEFORGE_QUANT_P", json::json_pointer("/generator/quantP"), false);
  number("RULEFORGE_SPEC_K", json::json_pointer("/generator/specK"), true);
  if (const char* v = getenv("RULEFORGE_REMOTE_URL")) patch["remote"]["url"] = v;
  for (int k = 0; k < kNumCostKeys; ++k) {
    std::string key(cost_key_name(static_cast<CostKey>(k)));
    std::string name = "RULEFORGE_COST_" + key;
    for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    number(name.c_str(), json::json_pointer("/costs/" + key), false);
  }
  for (Field f : kAllFields) {
    std::string key(field_name(f));
    std::string name = "RULEFORGE_COST_" + key;
    for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    number(name.c_str(), json::json_pointer("/costs/" + key), false);
  }
  return merge_config(std::move(base), patch);
}

json to_json(const AppConfig& c) {
  json costs = json::object();
  for (int k = 0; k < kNumCostKeys; ++k) {
    costs[std::string(cost_key_name(static_cast<CostKey>(k)))] = c.costs.node[k];
  }
  for (Field f : kAllFields) costs[std::string(field_name(f))] = c.costs.of(f);
  return {{"costs", std::move(costs)},
          {"generator", to_json(c.generator)},
          {"lambda", c.lambda},
          {"maxStates", c.max_states},
          {"maxJobs", c.max_jobs},
          {"remote", {{"url", c.remote_url}, {"timeoutMs", c.remote_timeout_ms}}}};
}

std::unique_ptr<Scorer> make_scorer(const std::string& name, const AppConfig& config,
                                    std::shared_ptr<const ScorerModel> model) {
  if (name == "static") return std::make_unique<StaticScorer>(config.costs);
  if (name == "augmented") return std::make_unique<AugmentedStaticScorer>(config.costs, config.lambda);
  if (name == "contextual") {
    if (!model) throw DataError("the contextual scorer needs a model");
    return std::make_unique<ContextualScorer>(std::move(model));
  }
  if (name == "remote") {
    if (config.remote_url.empty()) throw DataError("the remote scorer needs a URL");
    return std::make_unique<RemoteScorer>(config.remote_url, config.remote_timeout_ms);
  }
  throw DataError("unknown scorer '" + name + "'");
}

json run_synthesis(const Specification& spec, const Scorer& scorer, const AppConfig& config,
                   const TraceSink& sink) {
  SearchConfig search;
  search.max_states = config.max_states;
  search.costs = config.costs;
  return to_json(synthesize(spec, scorer, search, sink), spec);
}

}  // namespace ruleforge
