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

// Small string and hashing helpers shared across modules.

#ifndef RULEFORGE_TEXT_H_
#define RULEFORGE_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace ruleforge {

// ASCII lowercasing; bytes outside ASCII pass through unchanged.
std::string to_lower(std::string_view s);

// 64-bit FNV-1a.
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
  for (char ch : s) {
    h ^= static_cast<std::uint8_t>(ch);
    h *= kFnvPrime;
  }
  return h;
}

constexpr std::uint64_t fnv1a_byte(std::uint8_t b, std::uint64_t h) {
  h ^= b;
  h *= kFnvPrime;
  return h;
}

}  // namespace ruleforge

#endif  // RULEFORGE_TEXT_H_
