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

// The ruleforge command line.

#ifndef RULEFORGE_CLI_H_
#define RULEFORGE_CLI_H_

#include <iosfwd>

namespace ruleforge {

// Exit codes: 0 success, 1 domain error (bad data, failed scorer), 2 usage.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ruleforge

#endif  // RULEFORGE_CLI_H_
