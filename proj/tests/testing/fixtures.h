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

// Fixtures shared by the unit and acceptance suites.

#ifndef CFTEXT_TESTS_TESTING_FIXTURES_H_
#define CFTEXT_TESTS_TESTING_FIXTURES_H_

#include <atomic>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cftext/gateways.h"
#include "cftext/importance.h"
#include "cftext/reference_models.h"

namespace cftext::testing {

// Counts how often the wrapped provider is asked for importance.
class CountingProvider : public ImportanceProvider {
 public:
  explicit CountingProvider(const ImportanceProvider& inner) : inner_(inner) {}
  std::string_view id() const override { return inner_.id(); }
  ImportanceVector Compute(const TokenSequence& text,
                           const ClassifierGateway& classifier, int target,
                           std::uint64_t seed) const override {
    ++calls_;
    return inner_.Compute(text, classifier, target, seed);
  }
  int calls() const { return calls_; }

 private:
  const ImportanceProvider& inner_;
  mutable std::atomic<int> calls_{0};
};

// Proposals looked up by the rendered masked text; unknown contexts get
// `fallback`. Vocabulary indices follow first appearance in the script.
class ScriptedMaskFiller : public MaskFillerGateway {
 public:
  using Proposals = std::vector<std::pair<std::string, double>>;

  explicit ScriptedMaskFiller(std::map<std::string, Proposals> script,
                              Proposals fallback = {})
      : script_(std::move(script)), fallback_(std::move(fallback)) {
    for (const auto& [context, proposals] : script_) Register(proposals);
    Register(fallback_);
  }

 protected:
  std::vector<FillProposal> DoTopCandidates(const TokenSequence& masked,
                                            std::size_t, int) const override {
    const auto it = script_.find(masked.Render());
    const Proposals& p = it == script_.end() ? fallback_ : it->second;
    std::vector<FillProposal> out;
    for (const auto& [token, score] : p) {
      out.push_back({token, score, index_.at(token)});
    }
    return out;
  }

 private:
  void Register(const Proposals& proposals) {
    for (const auto& [token, score] : proposals) {
      index_.try_emplace(token, static_cast<int>(index_.size()));
    }
  }

  std::map<std::string, Proposals> script_;
  Proposals fallback_;
  std::map<std::string, int> index_;
};

// Two-class classifier with fixed probabilities and uniform attention.
class UniformAttentionClassifier : public ClassifierGateway {
 public:
  int num_classes() const override { return 2; }
  ClassifierCapabilities capabilities() const override {
    return {.exposes_attention = true, .exposes_cls_embedding = false};
  }

 protected:
  std::vector<double> DoPredictProba(std::string_view) const override {
    return {0.7, 0.3};
  }
  std::vector<double> DoAttention(std::string_view text) const override {
    return std::vector<double>(SplitTokens(text).size(), 3.0);
  }
};

// A random linear classifier over a small vocabulary plus a context-free
// filler over the same vocabulary and a sentence drawn from it.
struct LinearFixture {
  std::vector<std::string> vocabulary;
  std::unique_ptr<ReferenceLinearClassifier> classifier;
  std::unique_ptr<UnigramMaskFiller> filler;
  std::string sentence;
};

inline LinearFixture MakeLinearFixture(std::uint64_t seed, int num_classes,
                                       int vocab_size, int min_tokens,
                                       int max_tokens,
                                       double weight_scale = 1.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> weight(0.0, weight_scale);
  std::uniform_real_distribution<double> score(0.01, 1.0);
  std::uniform_int_distribution<int> length(min_tokens, max_tokens);
  std::uniform_int_distribution<int> pick(0, vocab_size - 1);

  LinearFixture f;
  ReferenceLinearClassifier::WeightTable weights;
  std::vector<std::pair<std::string, double>> filler_vocab;
  for (int i = 0; i < vocab_size; ++i) {
    const std::string word = "w" + std::to_string(i);
    f.vocabulary.push_back(word);
    std::vector<double> row(num_classes);
    for (double& w : row) w = weight(rng);
    weights.emplace(word, std::move(row));
    filler_vocab.emplace_back(word, score(rng));
  }
  f.classifier = std::make_unique<ReferenceLinearClassifier>(
      num_classes, std::move(weights), std::vector<double>(num_classes, 0.0));
  f.filler = std::make_unique<UnigramMaskFiller>(std::move(filler_vocab));
  const int n = length(rng);
  for (int i = 0; i < n; ++i) {
    if (i > 0) f.sentence += ' ';
    f.sentence += f.vocabulary[pick(rng)];
  }
  return f;
}

// The tree of the "I hate this movie" walkthrough: two classes (0
// negative, 1 positive), "hate" the most important token and "movie" the
// second. Masking "hate" offers love / watch / like, masking "movie"
// offers film / show.
struct HateMovieFixture {
  std::unique_ptr<ReferenceLinearClassifier> classifier;
  std::unique_ptr<ScriptedMaskFiller> filler;
  std::unique_ptr<HashedBagOfWordsEmbedder> embedder;
};

inline HateMovieFixture MakeHateMovieFixture() {
  HateMovieFixture f;
  // Only the class-1 logit moves; class 0 stays at 0.
  ReferenceLinearClassifier::WeightTable weights = {
      {"hate", {0.0, -2.0}},  {"movie", {0.0, -0.3}}, {"love", {0.0, 1.4}},
      {"watch", {0.0, 0.5}},  {"like", {0.0, -0.2}},  {"film", {0.0, 0.0}},
      {"show", {0.0, -0.1}},  {"great", {0.0, 1.5}},  {"fine", {0.0, 0.4}},
  };
  f.classifier = std::make_unique<ReferenceLinearClassifier>(
      2, std::move(weights), std::vector<double>{0.0, 0.0});
  f.filler = std::make_unique<ScriptedMaskFiller>(
      std::map<std::string, ScriptedMaskFiller::Proposals>{
          {"I [MASK] this movie", {{"love", 0.5}, {"watch", 0.3}, {"like", 0.2}}},
          {"I hate this [MASK]", {{"film", 0.6}, {"show", 0.4}}},
          {"I watch this [MASK]", {{"film", 0.6}, {"show", 0.4}}},
          {"I [MASK] this film", {{"love", 0.5}, {"watch", 0.3}, {"like", 0.2}}},
      },
      ScriptedMaskFiller::Proposals{{"great", 0.5}, {"fine", 0.5}});
  f.embedder = std::make_unique<HashedBagOfWordsEmbedder>(1024);
  return f;
}

}  // namespace cftext::testing

#endif  // CFTEXT_TESTS_TESTING_FIXTURES_H_
