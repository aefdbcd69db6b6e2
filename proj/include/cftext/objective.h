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

#ifndef CFTEXT_OBJECTIVE_H_
#define CFTEXT_OBJECTIVE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cftext/gateways.h"
#include "cftext/semantics.h"
#include "cftext/tokenizer.h"

namespace cftext {

enum class Strategy { kStatic, kEvolutive };

std::string_view ToString(Strategy strategy);
Strategy ParseStrategy(std::string_view name);

// Every knob of the search. Defaults are the tuned values for binary
// sentiment; RelaxedConfig() is the looser profile for harder tasks.
struct SearchConfig {
  double alpha = 0.3;
  int topk = 50;
  int beam_width = 4;
  int mask_div = 4;
  double margin = 0.15;
  Strategy strategy = Strategy::kEvolutive;
  // Budget in mask-inference calls, one per (parent, position) pair.
  int early_stop = 1000;
  // Number of counterfactuals requested.
  int num_counterfactuals = 3;
  std::uint64_t seed = 0;
  SimilarityKind similarity = SimilarityKind::kSentenceEmbedder;
  std::string importance = "attention";
  // Permutations for the "shapley" importance provider.
  int shapley_permutations = 64;
  // 0 means unbounded.
  std::size_t queue_cap = 0;
  bool record_trace = true;

  // Throws InputError on any violated range, including
  // margin > (k - 1) / k and mask_div > topk.
  void Validate(int num_classes) const;
};

SearchConfig RelaxedConfig();

struct Candidate {
  std::string text;
  TokenSequence tokens;
  double target_prob = 0.0;
  double distance = 0.0;
  double cost = 0.0;
  int depth = 0;
  // Sorted, unique.
  std::vector<std::size_t> edited_positions;
  std::shared_ptr<const Candidate> parent;
};

// cost = -(p(target | x) - alpha * d(x, x0)).
inline double CostFrom(double target_prob, double distance, double alpha) {
  return -(target_prob - alpha * distance);
}

double Cost(std::string_view candidate_text, std::string_view origin,
            int target, double alpha, const SemanticMeasure& measure,
            const ClassifierGateway& classifier);

// 1/k + margin.
inline double AcceptanceThreshold(int num_classes, double margin) {
  return 1.0 / static_cast<double>(num_classes) + margin;
}

// argmax(probs) == target and probs[target] >= 1/k + margin.
bool IsAccepted(std::span<const double> probs, int target, double margin);
bool IsAccepted(std::string_view candidate_text, int target, double margin,
                const ClassifierGateway& classifier);

// The requested class if given (must differ from the predicted class),
// otherwise the second most probable class of `origin`.
int ResolveTarget(const ClassifierGateway& classifier, std::string_view origin,
                  std::optional<int> requested = std::nullopt);

// Scores candidate texts for one search: probability, distance to the
// origin, cost and acceptance, with one batched classifier call.
class CandidateEvaluator {
 public:
  struct Evaluation {
    double target_prob = 0.0;
    double distance = 0.0;
    double cost = 0.0;
    bool accepted = false;
  };

  CandidateEvaluator(const ClassifierGateway& classifier,
                     const SemanticMeasure& measure, std::string origin,
                     int target, double alpha, double margin);

  std::vector<Evaluation> Evaluate(std::span<const std::string> texts) const;
  Evaluation Evaluate(const std::string& text) const;

  const std::string& origin() const { return origin_; }
  int target() const { return target_; }
  const ClassifierGateway& classifier() const { return classifier_; }

 private:
  const ClassifierGateway& classifier_;
  const SemanticMeasure& measure_;
  std::string origin_;
  int target_;
  double alpha_;
  double margin_;
};

}  // namespace cftext

#endif  // CFTEXT_OBJECTIVE_H_
