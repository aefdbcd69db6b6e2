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

#ifndef CFTEXT_SEMANTICS_H_
#define CFTEXT_SEMANTICS_H_

#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cftext/gateways.h"

namespace cftext {

enum class SimilarityKind { kSentenceEmbedder, kClassifierClsEmbedding };

std::string_view ToString(SimilarityKind kind);
// Accepts "sentence_embedder" and "classifier_cls_embedding".
SimilarityKind ParseSimilarityKind(std::string_view name);

// Cosine of two vectors, clamped to [-1, 1]. Throws
// DegenerateEmbeddingError if either has zero norm.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

// d = (1 - s) / 2, mapping similarity [-1, 1] onto distance [0, 1].
inline double DistanceFromSimilarity(double similarity) {
  return 0.5 * (1.0 - similarity);
}

// Semantic similarity and distance between texts, backed by either a
// sentence embedder or the classifier's CLS embedding. Embeddings are
// cached by exact text for the lifetime of the object, which is meant to
// be one search run. Safe for concurrent use.
class SemanticMeasure {
 public:
  explicit SemanticMeasure(const EmbedderGateway& embedder);
  // Throws CapabilityError if the classifier has no CLS embedding.
  explicit SemanticMeasure(const ClassifierGateway& classifier);

  SemanticMeasure(const SemanticMeasure&) = delete;
  SemanticMeasure& operator=(const SemanticMeasure&) = delete;

  SimilarityKind kind() const { return kind_; }

  double Similarity(std::string_view a, std::string_view b) const;
  double Distance(std::string_view a, std::string_view b) const {
    return DistanceFromSimilarity(Similarity(a, b));
  }

  std::vector<double> Embedding(std::string_view text) const;
  std::size_t cache_size() const;

 private:
  SimilarityKind kind_;
  const EmbedderGateway* embedder_ = nullptr;
  const ClassifierGateway* classifier_ = nullptr;

  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::string, std::vector<double>> cache_;
};

}  // namespace cftext

#endif  // CFTEXT_SEMANTICS_H_
