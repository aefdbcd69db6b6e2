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

#ifndef CFTEXT_MLI_H_
#define CFTEXT_MLI_H_

#include <cstddef>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "cftext/gateways.h"
#include "cftext/objective.h"
#include "cftext/tokenizer.h"

namespace cftext {

// Texts already scored in the current search run.
using VisitedSet = std::unordered_set<std::string>;

// `tokens` with `position` replaced. Throws InputError on a bad position.
TokenSequence ApplySubstitution(const TokenSequence& tokens,
                                std::size_t position, std::string replacement);

struct MliChild {
  Candidate candidate;
  std::string token;          // substitute placed at the masked position
  double filler_score = 0.0;
  int vocab_index = 0;
  bool accepted = false;
};

// Mask inference on one position of `parent`: mask it, ask the filler for
// config.topk substitutes, score every resulting text with the cost and
// keep the config.mask_div cheapest, in nondecreasing cost (ties: higher
// filler score, then lower vocabulary index).
//
// Substitutes equal to the original token, substitutes that are not a
// single token, and texts already in `visited` are skipped; every text
// scored here is added to `visited`. Throws EmptyProposalError when no
// substitute survives.
std::vector<MliChild> MaskLanguageInference(
    const std::shared_ptr<const Candidate>& parent, std::size_t position,
    const MaskFillerGateway& filler, const CandidateEvaluator& evaluator,
    const SearchConfig& config, VisitedSet* visited);

}  // namespace cftext

#endif  // CFTEXT_MLI_H_
