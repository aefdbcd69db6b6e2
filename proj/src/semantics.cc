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

#include "cftext/semantics.h"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "cftext/errors.h"

namespace cftext {

std::string_view ToString(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::kSentenceEmbedder:
      return "sentence_embedder";
    case SimilarityKind::kClassifierClsEmbedding:
      return "classifier_cls_embedding";
  }
  return "unknown";
}

SimilarityKind ParseSimilarityKind(std::string_view name) {
  if (name == "sentence_embedder") return SimilarityKind::kSentenceEmbedder;
  if (name == "classifier_cls_embedding") {
    return SimilarityKind::kClassifierClsEmbedding;
  }
  throw InputError("unknown similarity source '" + std::string(name) + "'");
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("cosine similarity of vectors with different lengths");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw DegenerateEmbeddingError("zero-norm embedding");
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

SemanticMeasure::SemanticMeasure(const EmbedderGateway& embedder)
    : kind_(SimilarityKind::kSentenceEmbedder), embedder_(&embedder) {}

SemanticMeasure::SemanticMeasure(const ClassifierGateway& classifier)
    : kind_(SimilarityKind::kClassifierClsEmbedding), classifier_(&classifier) {
  if (!classifier.capabilities().exposes_cls_embedding) {
    throw CapabilityError(
        "classifier_cls_embedding similarity needs a classifier exposing its "
        "CLS embedding");
  }
}

std::vector<double> SemanticMeasure::Embedding(std::string_view text) const {
  {
    std::shared_lock lock(mu_);
    const auto it = cache_.find(std::string(text));
    if (it != cache_.end()) return it->second;
  }
  auto v = embedder_ != nullptr ? embedder_->Embed(text)
                                : classifier_->ClsEmbedding(text);
  std::unique_lock lock(mu_);
  return cache_.try_emplace(std::string(text), std::move(v)).first->second;
}

double SemanticMeasure::Similarity(std::string_view a,
                                   std::string_view b) const {
  const auto ea = Embedding(a);
  const auto eb = Embedding(b);
  return CosineSimilarity(ea, eb);
}

std::size_t SemanticMeasure::cache_size() const {
  std::shared_lock lock(mu_);
  return cache_.size();
}

}  // namespace cftext
