// Copyright 2026 The cftext Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFTEXT_HARNESS_ORACLE_H_
#define CFTEXT_HARNESS_ORACLE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "cftext/gateways.h"
#include "cftext/objective.h"
#include "cftext/semantics.h"

namespace cftext::harness {

inline constexpr std::size_t kDefaultOracleTokenCap = 12;

struct Depth1Solution {
  std::string text;
  std::size_t position = 0;
  std::string token;
  int vocab_index = 0;
  double target_prob = 0.0;
  double distance = 0.0;
  double cost = 0.0;
};

// Exhaustive single-edit search: every position, every one of the
// filler's config.topk proposals (minus the original token). Returns the
// acceptable edit of minimum cost, ties going to the lower position and
// then the lower vocabulary index, or nothing if no single edit is
// acceptable. Scores one text at a time through the plain gateway calls,
// independently of the search code path.
//
// Throws InputError if the origin has more than `max_tokens` tokens.
std::optional<Depth1Solution> BruteForceDepth1(
    std::string_view origin, const ClassifierGateway& classifier,
    const MaskFillerGateway& filler, const SemanticMeasure& measure,
    const SearchConfig& config, int target,
    std::size_t max_tokens = kDefaultOracleTokenCap);

}  // namespace cftext::harness

#endif  // CFTEXT_HARNESS_ORACLE_H_
