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

#ifndef CFTEXT_HARNESS_SWEEP_H_
#define CFTEXT_HARNESS_SWEEP_H_

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cftext/harness/config.h"
#include "cftext/metrics.h"
#include "json.hpp"

namespace cftext::harness {

// Random-search space over the tunable hyperparameters. Integer ranges are
// inclusive; continuous ranges are sampled uniformly in [lo, hi).
struct SweepSpace {
  double alpha_lo = 0.0, alpha_hi = 1.0;
  int topk_lo = 10, topk_hi = 100;
  int beam_width_lo = 2, beam_width_hi = 6;
  int mask_div_lo = 1, mask_div_hi = 4;
  double margin_lo = 0.05, margin_hi = 0.3;
  std::vector<Strategy> strategies = {Strategy::kStatic, Strategy::kEvolutive};
  std::vector<std::string> importances = {"random", "attention"};
  std::vector<std::string> fillers = {"pretrained", "finetuned"};
  std::vector<SimilarityKind> similarities = {
      SimilarityKind::kSentenceEmbedder,
      SimilarityKind::kClassifierClsEmbedding};

  // Throws InputError on empty or inverted ranges, or if some sample could
  // have mask_div > topk.
  void Validate() const;
};

// Keys mirror the fields: "alpha": [lo, hi], "topk": [lo, hi], ...,
// "strategy": [...], "importance": [...], "filler": [...],
// "similarity_source": [...]. Missing keys keep the defaults; unknown keys
// throw InputError.
SweepSpace ParseSweepSpace(const nlohmann::json& document);

// `base` with every swept field replaced by a draw from `space`.
RunConfig SampleConfig(const SweepSpace& space, const RunConfig& base,
                       std::mt19937_64& rng);

// The four objectives trials are compared on.
struct TrialObjectives {
  std::optional<double> success_rate;  // higher is better
  std::optional<double> similarity;    // higher is better
  std::optional<double> diversity;     // higher is better
  std::optional<double> sparsity;      // lower is better
};

TrialObjectives ObjectivesOf(const RunReport& report);

// Per trial, the sum over objectives of its rank (1 = best, ties share
// the average rank, missing values rank last).
std::vector<double> RankSums(const std::vector<TrialObjectives>& trials);

// Index of the smallest rank sum; ties go to the earliest trial.
std::size_t BestTrial(const std::vector<double>& rank_sums);

}  // namespace cftext::harness

#endif  // CFTEXT_HARNESS_SWEEP_H_
