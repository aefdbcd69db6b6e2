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

#include "cftext/harness/oracle.h"

#include <algorithm>

#include "cftext/errors.h"
#include "cftext/tokenizer.h"

namespace cftext::harness {

std::optional<Depth1Solution> BruteForceDepth1(
    std::string_view origin, const ClassifierGateway& classifier,
    const MaskFillerGateway& filler, const SemanticMeasure& measure,
    const SearchConfig& config, int target, std::size_t max_tokens) {
  const TokenSequence tokens = Tokenize(origin);
  if (tokens.size() > max_tokens) {
    throw InputError("oracle enumeration capped at " +
                     std::to_string(max_tokens) + " tokens, text has " +
                     std::to_string(tokens.size()));
  }
  std::optional<Depth1Solution> best;
  for (std::size_t position = 0; position < tokens.size(); ++position) {
    auto proposals = filler.TopCandidates(tokens.WithMask(position), config.topk);
    std::sort(proposals.begin(), proposals.end(),
              [](const FillProposal& a, const FillProposal& b) {
                return a.vocab_index < b.vocab_index;
              });
    for (const auto& proposal : proposals) {
      if (proposal.token == tokens[position] || !IsSingleToken(proposal.token)) {
        continue;
      }
      const std::string text = tokens.WithToken(position, proposal.token).Render();
      const auto probs = classifier.PredictProba(text);
      if (!IsAccepted(probs, target, config.margin)) continue;
      const double distance = measure.Distance(text, origin);
      const double cost = -(probs[target] - config.alpha * distance);
      if (!best || cost < best->cost) {
        best = Depth1Solution{text,          position,      proposal.token,
                              proposal.vocab_index, probs[target], distance,
                              cost};
      }
    }
  }
  return best;
}

}  // namespace cftext::harness
