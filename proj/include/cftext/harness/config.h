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

#ifndef CFTEXT_HARNESS_CONFIG_H_
#define CFTEXT_HARNESS_CONFIG_H_

#include <string>
#include <string_view>

#include "cftext/objective.h"
#include "json.hpp"

namespace cftext::harness {

// Everything a run needs beyond the search itself.
struct RunConfig {
  SearchConfig search;
  // "pretrained" or "finetuned" mask filler.
  std::string filler = "finetuned";
  // Diversity kernel regularizer.
  double lambda = 1.0;
};

// Parses a JSON config document. "preset" ("default" or "relaxed") is
// applied first and the remaining keys override it. Unknown keys, wrong
// types and out-of-range values throw InputError.
//
// Keys: preset, alpha, topk, beam_width, mask_div, margin, strategy,
// early_stop, p, seed, similarity_source, importance, filler,
// shapley_permutations, queue_cap, record_trace, lambda.
RunConfig ParseRunConfig(const nlohmann::json& document);
RunConfig ParseRunConfig(std::string_view text);
RunConfig LoadRunConfig(const std::string& path);

nlohmann::ordered_json ToJson(const RunConfig& config);

}  // namespace cftext::harness

#endif  // CFTEXT_HARNESS_CONFIG_H_
