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

// Process-level configuration and scorer construction shared by the command
// line and the service.
//
// Config files are JSON; every key is optional:
//   {"costs": {"not": 5.0, "word": 1.0, ...},
//    "generator": {"maxLen": 7, "altP": 0.3, "quantP": 0.3, "specK": 5, ...},
//    "lambda": 1.0, "maxStates": 1000, "maxJobs": 4,
//    "remote": {"url": "http://host:port/score", "timeoutMs": 10000}}
// Environment variables override the file: RULEFORGE_LAMBDA,
// RULEFORGE_MAX_STATES, RULEFORGE_MAX_JOBS, RULEFORGE_REMOTE_URL,
// RULEFORGE_REMOTE_TIMEOUT_MS, RULEFORGE_ALT_P, RULEFORGE_QUANT_P,
// RULEFORGE_SPEC_K and RULEFORGE_COST_<KEY> (e.g. RULEFORGE_COST_NOT).

#ifndef RULEFORGE_APPHOST_H_
#define RULEFORGE_APPHOST_H_

#include <filesystem>
#include <functional>
#include <memory>
#include <string>

#include "json.hpp"
#include "ruleforge/contextual.h"
#include "ruleforge/cost.h"
#include "ruleforge/scoring.h"
#include "ruleforge/search.h"
#include "ruleforge/selfsup.h"

namespace ruleforge {

struct AppConfig {
  CostTable costs = CostTable::defaults();
  GeneratorConfig generator;
  double lambda = 1.0;
  int max_states = 1000;
  int max_jobs = 4;
  std::string remote_url;
  int remote_timeout_ms = 10000;
};

// Applies the keys present in `j` on top of `base`.
AppConfig merge_config(AppConfig base, const nlohmann::json& j);
AppConfig load_config(const std::filesystem::path& path, AppConfig base = {});

// Reads RULEFORGE_* variables through `getenv` (injectable for tests).
using EnvLookup = std::function<const char*(const char*)>;
AppConfig apply_env(AppConfig base, const EnvLookup& getenv);

nlohmann::json to_json(const AppConfig& c);

// "static", "augmented", "contextual" (needs `model`) or "remote" (needs
// config.remote_url). Throws DataError for unknown names or missing inputs.
std::unique_ptr<Scorer> make_scorer(const std::string& name, const AppConfig& config,
                                    std::shared_ptr<const ScorerModel> model);

// The synthesis path behind both `synth` and /api/synthesize: searches with
// the configured costs and budget and returns the report as JSON.
nlohmann::json run_synthesis(const Specification& spec, const Scorer& scorer,
                             const AppConfig& config, const TraceSink& sink = {});

}  // namespace ruleforge

#endif  // RULEFORGE_APPHOST_H_
