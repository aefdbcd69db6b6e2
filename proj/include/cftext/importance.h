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

#ifndef CFTEXT_IMPORTANCE_H_
#define CFTEXT_IMPORTANCE_H_

#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cftext/gateways.h"
#include "cftext/tokenizer.h"

namespace cftext {

// Per-token contribution scores aligned with a TokenSequence. Larger means
// the token pushes harder towards the current prediction.
struct ImportanceVector {
  std::vector<double> scores;
  std::string provider_id;
};

class ImportanceProvider {
 public:
  virtual ~ImportanceProvider() = default;
  virtual std::string_view id() const = 0;
  // Result has exactly text.size() entries. Throws CapabilityError if the
  // classifier lacks what the provider needs.
  virtual ImportanceVector Compute(const TokenSequence& text,
                                   const ClassifierGateway& classifier,
                                   int target, std::uint64_t seed) const = 0;
};

// Attention of the classification query, renormalized to sum to one.
ImportanceVector AttentionImportance(const TokenSequence& text,
                                     const ClassifierGateway& classifier);

// score_i = p(c | x) - p(c | x with token i masked), c the predicted class.
ImportanceVector OcclusionImportance(const TokenSequence& text,
                                     const ClassifierGateway& classifier);

// Permutation-sampling estimate of Shapley values for the game
// v(S) = p(c | tokens outside S masked), c the predicted class. If
// num_permutations >= n! every ordering is enumerated once and the result
// is the exact Shapley value.
ImportanceVector SampledShapley(const TokenSequence& text,
                                const ClassifierGateway& classifier,
                                int num_permutations, std::uint64_t seed);

// Uniform [0, 1) scores from a seeded generator.
ImportanceVector RandomImportance(const TokenSequence& text,
                                  std::uint64_t seed);

class AttentionProvider final : public ImportanceProvider {
 public:
  std::string_view id() const override { return "attention"; }
  ImportanceVector Compute(const TokenSequence& text,
                           const ClassifierGateway& classifier, int target,
                           std::uint64_t seed) const override;
};

class OcclusionProvider final : public ImportanceProvider {
 public:
  std::string_view id() const override { return "agnostic"; }
  ImportanceVector Compute(const TokenSequence& text,
                           const ClassifierGateway& classifier, int target,
                           std::uint64_t seed) const override;
};

class SampledShapleyProvider final : public ImportanceProvider {
 public:
  explicit SampledShapleyProvider(int num_permutations = 64);
  std::string_view id() const override { return "shapley"; }
  ImportanceVector Compute(const TokenSequence& text,
                           const ClassifierGateway& classifier, int target,
                           std::uint64_t seed) const override;

 private:
  int num_permutations_;
};

class RandomProvider final : public ImportanceProvider {
 public:
  std::string_view id() const override { return "random"; }
  ImportanceVector Compute(const TokenSequence& text,
                           const ClassifierGateway& classifier, int target,
                           std::uint64_t seed) const override;
};

// Serves attributions computed elsewhere (e.g. an exact KernelSHAP run),
// keyed by the exact text. Records are JSONL {"text": ..., "scores": [...]};
// a score count that differs from the token count is an InputError.
class PrecomputedProvider final : public ImportanceProvider {
 public:
  static PrecomputedProvider FromJsonl(std::istream& in);
  void Add(std::string text, std::vector<double> scores);

  std::string_view id() const override { return "precomputed"; }
  ImportanceVector Compute(const TokenSequence& text,
                           const ClassifierGateway& classifier, int target,
                           std::uint64_t seed) const override;

 private:
  std::map<std::string, std::vector<double>, std::less<>> table_;
};

// "attention", "agnostic", "shapley" or "random".
std::unique_ptr<ImportanceProvider> MakeImportanceProvider(
    std::string_view id, int num_permutations = 64);

}  // namespace cftext

#endif  // CFTEXT_IMPORTANCE_H_
