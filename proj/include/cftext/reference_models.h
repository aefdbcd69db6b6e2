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

#ifndef CFTEXT_REFERENCE_MODELS_H_
#define CFTEXT_REFERENCE_MODELS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cftext/gateways.h"

namespace cftext {

// Deterministic stand-ins for the neural models. They are small enough to
// reason about exactly, which is what the tests rely on.

// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
std::uint64_t Fnv1a(std::string_view s);

// Softmax of per-class logits, each logit being bias[c] plus the sum of
// weight(token, c) over the tokens of the text. Unknown tokens (and the
// mask sentinel) weigh zero, so replacing t by t' moves logit c by exactly
// weight(t', c) - weight(t, c).
//
// Attention is softmax over tokens of the class spread
// max_c weight(t, c) - min_c weight(t, c); it ignores the target class.
// The CLS embedding is the logit vector with a constant 1 appended.
class ReferenceLinearClassifier : public ClassifierGateway {
 public:
  using WeightTable = std::unordered_map<std::string, std::vector<double>>;

  ReferenceLinearClassifier(int num_classes, WeightTable weights,
                            std::vector<double> bias,
                            ClassifierCapabilities capabilities = {
                                .exposes_attention = true,
                                .exposes_cls_embedding = true});

  // Multinomial naive Bayes written as a linear model: weight(t, c) =
  // log P(t | c) with add-`smoothing` counts, bias[c] = log P(c).
  static ReferenceLinearClassifier FitNaiveBayes(
      std::span<const std::string> texts, std::span<const int> labels,
      int num_classes, double smoothing = 1.0);

  int num_classes() const override { return num_classes_; }
  ClassifierCapabilities capabilities() const override { return caps_; }

  double Weight(std::string_view token, int label) const;
  std::vector<double> Logits(std::string_view text) const;
  const WeightTable& weights() const { return weights_; }
  std::span<const double> bias() const { return bias_; }

 protected:
  std::vector<double> DoPredictProba(std::string_view text) const override;
  std::vector<double> DoAttention(std::string_view text) const override;
  std::vector<double> DoClsEmbedding(std::string_view text) const override;

 private:
  int num_classes_;
  WeightTable weights_;
  std::vector<double> bias_;
  ClassifierCapabilities caps_;
};

std::vector<double> Softmax(std::span<const double> logits);

// Context-free filler: always proposes the vocabulary by descending score.
class UnigramMaskFiller : public MaskFillerGateway {
 public:
  explicit UnigramMaskFiller(std::vector<std::pair<std::string, double>> vocab);

  std::size_t vocab_size() const { return vocab_.size(); }

 protected:
  std::vector<FillProposal> DoTopCandidates(const TokenSequence& masked,
                                            std::size_t mask_position,
                                            int k) const override;

 private:
  std::vector<std::pair<std::string, double>> vocab_;
};

// Context-aware filler fitted on a corpus: score(w) is proportional to
// P(w | left) * P(right | w) under an add-k smoothed bigram model, with
// sentence boundaries as context at the edges.
class BigramMaskFiller : public MaskFillerGateway {
 public:
  static BigramMaskFiller Fit(std::span<const std::string> texts,
                              double add_k = 0.1);

  std::size_t vocab_size() const { return vocab_.size(); }

 protected:
  std::vector<FillProposal> DoTopCandidates(const TokenSequence& masked,
                                            std::size_t mask_position,
                                            int k) const override;

 private:
  BigramMaskFiller() = default;
  double Transition(int from, int to) const;

  // Lexicographically sorted vocabulary; index 0 is the boundary symbol.
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> index_;
  std::map<std::pair<int, int>, double> bigram_counts_;
  std::vector<double> context_counts_;
  double add_k_ = 0.1;
};

// Hashed bag of words: each token adds 1 to bucket Fnv1a(token) % dim.
// With a vocabulary, out-of-vocabulary tokens contribute nothing, so a
// fully out-of-vocabulary text embeds to the zero vector.
class HashedBagOfWordsEmbedder : public EmbedderGateway {
 public:
  explicit HashedBagOfWordsEmbedder(
      std::size_t dimension,
      std::optional<std::set<std::string, std::less<>>> vocabulary =
          std::nullopt);

  std::size_t dimension() const override { return dimension_; }
  std::size_t Bucket(std::string_view token) const;

 protected:
  std::vector<double> DoEmbed(std::string_view text) const override;

 private:
  std::size_t dimension_;
  std::optional<std::set<std::string, std::less<>>> vocabulary_;
};

// Explicit text -> vector table; unknown texts are a GatewayError.
class TableEmbedder : public EmbedderGateway {
 public:
  TableEmbedder(std::size_t dimension,
                std::map<std::string, std::vector<double>, std::less<>> table);

  std::size_t dimension() const override { return dimension_; }

 protected:
  std::vector<double> DoEmbed(std::string_view text) const override;

 private:
  std::size_t dimension_;
  std::map<std::string, std::vector<double>, std::less<>> table_;
};

// Unigram or bigram language model over shared-tokenizer tokens.
// Perplexity is exp of the mean negative log-likelihood per predicted
// token; the bigram model also predicts the end-of-sentence symbol.
class NgramLanguageModel : public FluencyScorerGateway {
 public:
  // Every token (known or not) has probability 1 / |vocabulary|.
  static NgramLanguageModel Uniform(std::size_t vocabulary_size);
  // order is 1 or 2. Add-k smoothing over the fitted vocabulary plus one
  // unknown-token slot (and the end symbol for order 2).
  static NgramLanguageModel Fit(std::span<const std::string> texts, int order,
                                double add_k = 1.0);

  int order() const { return order_; }

 protected:
  double DoPerplexity(std::string_view text) const override;

 private:
  NgramLanguageModel() = default;
  double LogProb(const std::string& previous, const std::string& token) const;

  int order_ = 1;
  double uniform_probability_ = 0.0;  // > 0 only for Uniform().
  double add_k_ = 1.0;
  std::size_t types_ = 0;  // smoothing denominator slots
  std::unordered_map<std::string, double> unigram_counts_;
  double total_ = 0.0;
  std::map<std::pair<std::string, std::string>, double> bigram_counts_;
  std::unordered_map<std::string, double> context_counts_;
};

}  // namespace cftext

#endif  // CFTEXT_REFERENCE_MODELS_H_
