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

#ifndef CFTEXT_METRICS_H_
#define CFTEXT_METRICS_H_

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cftext/gateways.h"
#include "cftext/search.h"
#include "json.hpp"

namespace cftext {

// Unit-cost edit distance over word sequences.
std::size_t WordLevenshtein(std::span<const std::string> a,
                            std::span<const std::string> b);

// Word-level Levenshtein distance divided by the origin's word count.
double Sparsity(std::string_view origin, std::string_view counterfactual);

// Cosine similarity of sentence-embedder embeddings.
double Proximity(std::string_view origin, std::string_view counterfactual,
                 const EmbedderGateway& embedder);

// perplexity(counterfactual) / perplexity(origin).
double PplRatio(std::string_view origin, std::string_view counterfactual,
                const FluencyScorerGateway& scorer);

// det(K) with K_ij = 1 / (lambda + d(x_i, x_j)), d the embedding distance.
double Diversity(std::span<const std::string> counterfactuals,
                 const EmbedderGateway& embedder, double lambda = 1.0);
// Same determinant from a precomputed symmetric distance matrix.
double DiversityFromDistances(
    const std::vector<std::vector<double>>& distances, double lambda = 1.0);

// One generated instance, as read back from generation output.
struct GeneratedInstance {
  std::string id;
  std::string origin;
  std::vector<std::string> counterfactuals;
  int requested = 1;
};

GeneratedInstance FromSearchResult(std::string id, const SearchResult& result,
                                   int requested);

struct InstanceMetrics {
  std::string id;
  int requested = 0;
  int found = 0;
  bool success = false;         // at least one counterfactual
  bool strict_success = false;  // at least `requested`
  // Means over the instance's counterfactuals; empty when none or when
  // every value was excluded.
  std::optional<double> sparsity;
  std::optional<double> similarity;
  std::optional<double> best_similarity;
  std::optional<double> ppl_ratio;
  std::optional<double> diversity;
};

struct RunReport {
  std::size_t instances = 0;
  double success_rate = 0.0;
  double strict_success_rate = 0.0;
  // Means over successful instances; empty if there are none.
  std::optional<double> mean_sparsity;
  std::optional<double> mean_similarity;
  std::optional<double> mean_best_similarity;
  std::optional<double> mean_ppl_ratio;
  std::optional<double> mean_diversity;
  std::vector<InstanceMetrics> per_instance;
};

// Throws InputError on an empty batch. Degenerate embeddings and scorer
// failures drop the affected value with a logged warning.
RunReport Aggregate(std::span<const GeneratedInstance> batch,
                    const EmbedderGateway& embedder,
                    const FluencyScorerGateway& scorer, double lambda = 1.0);

nlohmann::ordered_json ToJson(const RunReport& report);
// One row per instance.
void WriteCsv(const RunReport& report, std::ostream& out);

}  // namespace cftext

#endif  // CFTEXT_METRICS_H_
