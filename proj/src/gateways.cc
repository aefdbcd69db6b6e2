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

#include "cftext/gateways.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "cftext/errors.h"

namespace cftext {
namespace {

constexpr double kProbabilitySumTolerance = 1e-6;

void RequireTokens(std::string_view text) {
  if (SplitTokens(text).empty()) {
    throw InputError("text is empty after tokenization");
  }
}

void CheckProbabilities(const std::vector<double>& probs, int num_classes) {
  if (static_cast<int>(probs.size()) != num_classes) {
    throw GatewayError("classifier returned " + std::to_string(probs.size()) +
                       " probabilities, expected " +
                       std::to_string(num_classes));
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw GatewayError("classifier returned a probability outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    throw GatewayError("classifier probabilities sum to " +
                       std::to_string(sum));
  }
}

}  // namespace

std::vector<double> ClassifierGateway::PredictProba(std::string_view text) const {
  RequireTokens(text);
  auto probs = DoPredictProba(text);
  CheckProbabilities(probs, num_classes());
  return probs;
}

std::vector<std::vector<double>> ClassifierGateway::PredictProbaBatch(
    std::span<const std::string> texts) const {
  for (const auto& t : texts) RequireTokens(t);
  auto batch = DoPredictProbaBatch(texts);
  if (batch.size() != texts.size()) {
    throw GatewayError("classifier batch answer has wrong length");
  }
  for (const auto& probs : batch) CheckProbabilities(probs, num_classes());
  return batch;
}

std::vector<std::vector<double>> ClassifierGateway::DoPredictProbaBatch(
    std::span<const std::string> texts) const {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(DoPredictProba(t));
  return out;
}

std::vector<double> ClassifierGateway::Attention(std::string_view text) const {
  if (!capabilities().exposes_attention) {
    throw CapabilityError("classifier does not expose attention");
  }
  RequireTokens(text);
  auto weights = DoAttention(text);
  if (weights.size() != SplitTokens(text).size()) {
    throw GatewayError("attention vector is not aligned with the tokens");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw GatewayError("attention weights must be finite and nonnegative");
    }
    sum += w;
  }
  if (sum <= 0.0) throw GatewayError("attention weights sum to zero");
  for (double& w : weights) w /= sum;
  return weights;
}

std::vector<double> ClassifierGateway::ClsEmbedding(std::string_view text) const {
  if (!capabilities().exposes_cls_embedding) {
    throw CapabilityError("classifier does not expose a CLS embedding");
  }
  RequireTokens(text);
  return DoClsEmbedding(text);
}

std::vector<double> ClassifierGateway::DoAttention(std::string_view) const {
  throw CapabilityError("classifier does not expose attention");
}

std::vector<double> ClassifierGateway::DoClsEmbedding(std::string_view) const {
  throw CapabilityError("classifier does not expose a CLS embedding");
}

bool MaskFillerGateway::IsSpecialToken(std::string_view token) const {
  return token == kMaskToken;
}

std::vector<FillProposal> MaskFillerGateway::TopCandidates(
    const TokenSequence& masked, int k) const {
  if (k < 1) throw InputError("top_candidates needs k >= 1");
  if (masked.CountMasks() != 1) {
    throw InputError("masked sequence must contain exactly one mask, found " +
                     std::to_string(masked.CountMasks()));
  }
  std::size_t mask_position = 0;
  while (masked[mask_position] != kMaskToken) ++mask_position;

  auto proposals = DoTopCandidates(masked, mask_position, k);
  std::erase_if(proposals, [this](const FillProposal& p) {
    return IsSpecialToken(p.token);
  });
  std::stable_sort(proposals.begin(), proposals.end(),
                   [](const FillProposal& a, const FillProposal& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.vocab_index < b.vocab_index;
                   });
  if (proposals.size() > static_cast<std::size_t>(k)) proposals.resize(k);
  return proposals;
}

std::vector<double> EmbedderGateway::Embed(std::string_view text) const {
  RequireTokens(text);
  auto v = DoEmbed(text);
  if (v.size() != dimension()) {
    throw GatewayError("embedding has dimension " + std::to_string(v.size()) +
                       ", expected " + std::to_string(dimension()));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw GatewayError("embedding is not finite");
  }
  return v;
}

double FluencyScorerGateway::Perplexity(std::string_view text) const {
  RequireTokens(text);
  const double ppl = DoPerplexity(text);
  if (!std::isfinite(ppl) || ppl <= 0.0) {
    throw GatewayError("perplexity must be positive and finite");
  }
  return ppl;
}

int ArgMax(std::span<const double> probabilities) {
  return static_cast<int>(
      std::max_element(probabilities.begin(), probabilities.end()) -
      probabilities.begin());
}

}  // namespace cftext
