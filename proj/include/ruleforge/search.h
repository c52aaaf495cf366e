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

// Best-first enumerative synthesis over a single global priority queue.
//
// The queue is seeded with the bare hole at score 0. Each step pops the
// highest-scoring state (FIFO among equal scores). A complete state is
// accepted if it satisfies the specification; otherwise the leftmost hole is
// expanded, children that cannot cover the highlights are pruned, and the
// survivors are scored once and pushed.

#ifndef RULEFORGE_SEARCH_H_
#define RULEFORGE_SEARCH_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ruleforge/corpus.h"
#include "ruleforge/cost.h"
#include "ruleforge/pattern.h"
#include "ruleforge/scoring.h"

namespace ruleforge {

struct SearchConfig {
  int max_states = 1000;
  bool pruning = true;
  bool record_trace = false;
  CostTable costs = CostTable::defaults();
};

struct TraceEvent {
  int step = 0;
  std::string state;
  double score = 0.0;
  // Best score left in the queue right after this pop (-inf when empty).
  double queue_max_after = 0.0;
};

nlohmann::json to_json(const TraceEvent& e);

struct SearchReport {
  PatternPtr rule;  // null unless found
  bool found = false;
  // Popped states that were expanded or rejected. The accepting pop is not
  // counted, so an oracle-guided search explores exactly one state per
  // derivation step.
  int states_explored = 0;
  int states_pruned = 0;
  std::size_t queue_peak = 0;
  std::vector<TraceEvent> trace;
};

nlohmann::json to_json(const SearchReport& r, const Specification& spec);

using TraceSink = std::function<void(const TraceEvent&)>;

// Throws DataError on an invalid specification and ScorerError when the
// scorer fails or returns NaN. `sink`, when set, sees every pop as it
// happens, independent of config.record_trace.
SearchReport synthesize(const Specification& spec, const Scorer& scorer,
                        const SearchConfig& config, const TraceSink& sink = {});

}  // namespace ruleforge

#endif  // RULEFORGE_SEARCH_H_
