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

#include "cftext/harness/model_suite.h"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "cftext/errors.h"
#include "cftext/reference_models.h"

namespace cftext::harness {
namespace {
constexpr std::size_t kEmbeddingDimension = 256;
}  // namespace

const MaskFillerGateway& ModelSuite::Filler(std::string_view variant) const {
  if (variant == "pretrained") return *pretrained_filler;
  if (variant == "finetuned") return *finetuned_filler;
  throw InputError("unknown filler variant '" + std::string(variant) + "'");
}

WireBackends ModelSuite::AsWireBackends() const {
  return {classifier.get(), pretrained_filler.get(), finetuned_filler.get(),
          embedder.get(), scorer.get()};
}

ModelSuite BuildReferenceSuite(const Corpus& training) {
  if (!training.labeled()) {
    throw InputError(
        "reference models need a labeled corpus (set --train or " +
        std::string(kModelEndpointEnv) + ")");
  }
  const auto texts = training.texts();
  std::vector<int> labels;
  int num_classes = 2;
  for (const auto& i : training.instances) {
    labels.push_back(*i.label);
    num_classes = std::max(num_classes, *i.label + 1);
  }

  std::map<std::string, double> frequency;
  double total = 0.0;
  for (const auto& t : texts) {
    for (const auto& token : SplitTokens(t)) {
      frequency[token] += 1.0;
      total += 1.0;
    }
  }
  std::vector<std::pair<std::string, double>> unigram;
  for (const auto& [token, count] : frequency) {
    if (token != kMaskToken) unigram.emplace_back(token, count / total);
  }

  ModelSuite suite;
  suite.classifier = std::make_shared<ReferenceLinearClassifier>(
      ReferenceLinearClassifier::FitNaiveBayes(texts, labels, num_classes));
  suite.pretrained_filler =
      std::make_shared<UnigramMaskFiller>(std::move(unigram));
  suite.finetuned_filler =
      std::make_shared<BigramMaskFiller>(BigramMaskFiller::Fit(texts));
  suite.embedder =
      std::make_shared<HashedBagOfWordsEmbedder>(kEmbeddingDimension);
  suite.scorer =
      std::make_shared<NgramLanguageModel>(NgramLanguageModel::Fit(texts, 2));
  return suite;
}

ModelSuite ConnectWireSuite(const std::string& command) {
  auto client = std::make_shared<const WireClient>(
      std::make_shared<SubprocessTransport>(command));
  ModelSuite suite;
  suite.classifier = std::make_shared<WireClassifier>(client);
  suite.pretrained_filler = std::make_shared<WireMaskFiller>(client, "pretrained");
  suite.finetuned_filler = std::make_shared<WireMaskFiller>(client, "finetuned");
  suite.embedder = std::make_shared<WireEmbedder>(client);
  suite.scorer = std::make_shared<WireFluencyScorer>(client);
  return suite;
}

ModelSuite ResolveSuite(const Corpus& training) {
  if (const char* endpoint = std::getenv(kModelEndpointEnv);
      endpoint != nullptr && *endpoint != '\0') {
    return ConnectWireSuite(endpoint);
  }
  return BuildReferenceSuite(training);
}

}  // namespace cftext::harness
