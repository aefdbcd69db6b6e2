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

#include "cftext/objective.h"

#include <algorithm>
#include <cmath>

#include "cftext/errors.h"

namespace cftext {

std::string_view ToString(Strategy strategy) {
  return strategy == Strategy::kStatic ? "static" : "evolutive";
}

Strategy ParseStrategy(std::string_view name) {
  if (name == "static") return Strategy::kStatic;
  if (name == "evolutive") return Strategy::kEvolutive;
  throw InputError("unknown strategy '" + std::string(name) + "'");
}

void SearchConfig::Validate(int num_classes) const {
  auto fail = [](const std::string& what) { throw InputError(what); };
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail("alpha must lie in [0, 1]");
  if (topk < 1) fail("topk must be >= 1");
  if (beam_width < 1) fail("beam_width must be >= 1");
  if (mask_div < 1) fail("mask_div must be >= 1");
  if (mask_div > topk) fail("mask_div must not exceed topk");
  if (early_stop < 0) fail("early_stop must be >= 0");
  if (num_counterfactuals < 1) fail("p (counterfactuals requested) must be >= 1");
  if (shapley_permutations < 1) fail("shapley_permutations must be >= 1");
  if (num_classes < 2) fail("classifier must have at least two classes");
  const double upper =
      static_cast<double>(num_classes - 1) / static_cast<double>(num_classes);
  if (!(margin >= 0.0 && margin <= upper)) {
    fail("margin must lie in [0, (k-1)/k] = [0, " + std::to_string(upper) + "]");
  }
}

SearchConfig RelaxedConfig() {
  SearchConfig config;
  config.margin = 0.05;
  config.alpha = 0.15;
  return config;
}

double Cost(std::string_view candidate_text, std::string_view origin,
            int target, double alpha, const SemanticMeasure& measure,
            const ClassifierGateway& classifier) {
  const auto probs = classifier.PredictProba(candidate_text);
  return CostFrom(probs.at(target), measure.Distance(candidate_text, origin),
                  alpha);
}

bool IsAccepted(std::span<const double> probs, int target, double margin) {
  const int k = static_cast<int>(probs.size());
  if (target < 0 || target >= k) throw InputError("target out of range");
  return ArgMax(probs) == target &&
         probs[target] >= AcceptanceThreshold(k, margin);
}

bool IsAccepted(std::string_view candidate_text, int target, double margin,
                const ClassifierGateway& classifier) {
  return IsAccepted(classifier.PredictProba(candidate_text), target, margin);
}

int ResolveTarget(const ClassifierGateway& classifier, std::string_view origin,
                  std::optional<int> requested) {
  const auto probs = classifier.PredictProba(origin);
  const int predicted = ArgMax(probs);
  if (requested) {
    if (*requested < 0 || *requested >= classifier.num_classes()) {
      throw InputError("requested target " + std::to_string(*requested) +
                       " out of range");
    }
    if (*requested == predicted) {
      throw InputError("requested target equals the predicted class " +
                       std::to_string(predicted));
    }
    return *requested;
  }
  // Second argmax; ties resolve to the lowest index.
  int best = -1;
  for (int c = 0; c < static_cast<int>(probs.size()); ++c) {
    if (c == predicted) continue;
    if (best < 0 || probs[c] > probs[best]) best = c;
  }
  return best;
}

CandidateEvaluator::CandidateEvaluator(const ClassifierGateway& classifier,
                                       const SemanticMeasure& measure,
                                       std::string origin, int target,
                                       double alpha, double margin)
    : classifier_(classifier),
      measure_(measure),
      origin_(std::move(origin)),
      target_(target),
      alpha_(alpha),
      margin_(margin) {}

std::vector<CandidateEvaluator::Evaluation> CandidateEvaluator::Evaluate(
    std::span<const std::string> texts) const {
  std::vector<Evaluation> out;
  if (texts.empty()) return out;
  const auto probs = classifier_.PredictProbaBatch(texts);
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Evaluation e;
    e.target_prob = probs[i].at(target_);
    e.distance = measure_.Distance(texts[i], origin_);
    e.cost = CostFrom(e.target_prob, e.distance, alpha_);
    e.accepted = IsAccepted(probs[i], target_, margin_);
    out.push_back(e);
  }
  return out;
}

CandidateEvaluator::Evaluation CandidateEvaluator::Evaluate(
    const std::string& text) const {
  return Evaluate(std::span<const std::string>(&text, 1)).front();
}

}  // namespace cftext
