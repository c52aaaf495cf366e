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

// HTTP service over one loaded corpus and an optional model.
//
//   POST /api/synthesize  {"spec", "scorer", "maxStates", "trace"}
//   POST /api/match       {"rule", "sentences": [<sentence> | "<id>", ...]}
//   GET  /api/corpus      ?q=<text>&rule=<rule>&limit=N&offset=N
//   GET  /api/health
//   POST /api/parse       {"rule"}
//   POST /api/linearize   {"sentence": <sentence> | {"ref": "<id>"},
//                          "subj": [s, e], "obj": [s, e]}
//
// Invalid input yields 400 with {"error", "location"}. With "trace": true
// the synthesis reply is line-delimited JSON: one line per popped state and
// the report as the last line.

#ifndef RULEFORGE_SERVICE_H_
#define RULEFORGE_SERVICE_H_

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

#include "ruleforge/apphost.h"
#include "ruleforge/contextual.h"
#include "ruleforge/corpus.h"

namespace httplib {
class Server;
}

namespace ruleforge {

// Admits at most `limit` holders at once, in arrival order.
class JobGate {
 public:
  explicit JobGate(int limit) : limit_(limit) {}

  void acquire();
  void release();

  int active() const;

 private:
  int limit_;
  int active_ = 0;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t serving_ = 0;
  mutable std::mutex mu_;
  std::condition_variable cv_;
};

class JobSlot {
 public:
  explicit JobSlot(JobGate& gate) : gate_(gate) { gate_.acquire(); }
  ~JobSlot() { gate_.release(); }
  JobSlot(const JobSlot&) = delete;
  JobSlot& operator=(const JobSlot&) = delete;

 private:
  JobGate& gate_;
};

class Service {
 public:
  Service(Corpus corpus, std::shared_ptr<const ScorerModel> model, AppConfig config);

  void mount(httplib::Server& server);

  const Corpus& corpus() const { return corpus_; }
  JobGate& gate() { return gate_; }

 private:
  Corpus corpus_;
  CorpusIndex index_;
  std::shared_ptr<const ScorerModel> model_;
  AppConfig config_;
  JobGate gate_;
};

// Serves until the process is stopped. Returns false if the port is taken.
bool serve(Service& service, const std::string& host, int port);

}  // namespace ruleforge

#endif  // RULEFORGE_SERVICE_H_
