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

#ifndef CFTEXT_HARNESS_MODEL_SUITE_H_
#define CFTEXT_HARNESS_MODEL_SUITE_H_

#include <memory>
#include <string>
#include <string_view>

#include "cftext/gateways.h"
#include "cftext/harness/corpus.h"
#include "cftext/wire.h"

namespace cftext::harness {

// Environment variable holding the shell command of a wire-protocol model
// backend. When set, the CLI uses it instead of the reference models.
inline constexpr char kModelEndpointEnv[] = "CFTEXT_MODEL_ENDPOINT";

struct ModelSuite {
  std::shared_ptr<const ClassifierGateway> classifier;
  std::shared_ptr<const MaskFillerGateway> pretrained_filler;
  std::shared_ptr<const MaskFillerGateway> finetuned_filler;
  std::shared_ptr<const EmbedderGateway> embedder;
  std::shared_ptr<const FluencyScorerGateway> scorer;

  // "pretrained" or "finetuned".
  const MaskFillerGateway& Filler(std::string_view variant) const;
  WireBackends AsWireBackends() const;
};

// Reference models fitted on a labeled corpus: naive Bayes classifier,
// unigram ("pretrained") and bigram ("finetuned") fillers, a hashed
// bag-of-words embedder and a bigram fluency scorer. Throws InputError if
// any instance lacks a label.
ModelSuite BuildReferenceSuite(const Corpus& training);

// Gateways backed by a spawned wire-protocol server.
ModelSuite ConnectWireSuite(const std::string& command);

// Wire suite if kModelEndpointEnv is set, reference suite otherwise.
ModelSuite ResolveSuite(const Corpus& training);

}  // namespace cftext::harness

#endif  // CFTEXT_HARNESS_MODEL_SUITE_H_
