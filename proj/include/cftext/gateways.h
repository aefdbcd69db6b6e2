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

#ifndef CFTEXT_GATEWAYS_H_
#define CFTEXT_GATEWAYS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cftext/tokenizer.h"

namespace cftext {

// Abstract boundaries to the learned models the engine consumes. Each
// interface has a non-virtual public surface that checks the contract
// (preconditions and output shape) around a protected virtual hook, so
// backends only implement the model-specific part.
//
// All gateways must be safe for concurrent const use.

struct ClassifierCapabilities {
  bool exposes_attention = false;
  bool exposes_cls_embedding = false;
};

class ClassifierGateway {
 public:
  virtual ~ClassifierGateway() = default;

  virtual int num_classes() const = 0;
  virtual ClassifierCapabilities capabilities() const { return {}; }

  // Class probabilities of `text`. Throws InputError for text that
  // tokenizes to nothing and GatewayError for a malformed backend answer.
  std::vector<double> PredictProba(std::string_view text) const;
  std::vector<std::vector<double>> PredictProbaBatch(
      std::span<const std::string> texts) const;

  // Per-token attention of the classification query, aligned with
  // Tokenize(text), nonnegative and summing to one.
  std::vector<double> Attention(std::string_view text) const;

  // Embedding of the classification token.
  std::vector<double> ClsEmbedding(std::string_view text) const;

 protected:
  virtual std::vector<double> DoPredictProba(std::string_view text) const = 0;
  // Default forwards to DoPredictProba one text at a time.
  virtual std::vector<std::vector<double>> DoPredictProbaBatch(
      std::span<const std::string> texts) const;
  virtual std::vector<double> DoAttention(std::string_view text) const;
  virtual std::vector<double> DoClsEmbedding(std::string_view text) const;
};

struct FillProposal {
  std::string token;
  double score = 0.0;
  // Position of the token in the filler's vocabulary; the tie-break key.
  int vocab_index = 0;
};

class MaskFillerGateway {
 public:
  virtual ~MaskFillerGateway() = default;

  // Up to `k` substitutes for the single mask sentinel in `masked`,
  // ordered by nonincreasing score then ascending vocabulary index.
  // Throws InputError unless exactly one mask is present and k >= 1.
  std::vector<FillProposal> TopCandidates(const TokenSequence& masked,
                                          int k) const;

  // Tokens never proposed. Always contains the mask sentinel.
  virtual bool IsSpecialToken(std::string_view token) const;

 protected:
  // May return more than k entries and in any order; the caller sorts,
  // filters special tokens and truncates.
  virtual std::vector<FillProposal> DoTopCandidates(
      const TokenSequence& masked, std::size_t mask_position, int k) const = 0;
};

class EmbedderGateway {
 public:
  virtual ~EmbedderGateway() = default;

  virtual std::size_t dimension() const = 0;
  // Throws InputError on empty text.
  std::vector<double> Embed(std::string_view text) const;

 protected:
  virtual std::vector<double> DoEmbed(std::string_view text) const = 0;
};

class FluencyScorerGateway {
 public:
  virtual ~FluencyScorerGateway() = default;

  // Strictly positive, finite. Throws InputError on empty text.
  double Perplexity(std::string_view text) const;

 protected:
  virtual double DoPerplexity(std::string_view text) const = 0;
};

// Index of the largest probability; ties resolve to the lowest index.
int ArgMax(std::span<const double> probabilities);

}  // namespace cftext

#endif  // CFTEXT_GATEWAYS_H_
