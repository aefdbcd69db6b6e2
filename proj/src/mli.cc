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

#include "cftext/mli.h"

#include <algorithm>
#include <utility>

#include "cftext/errors.h"

namespace cftext {

TokenSequence ApplySubstitution(const TokenSequence& tokens,
                                std::size_t position, std::string replacement) {
  return tokens.WithToken(position, std::move(replacement));
}

std::vector<MliChild> MaskLanguageInference(
    const std::shared_ptr<const Candidate>& parent, std::size_t position,
    const MaskFillerGateway& filler, const CandidateEvaluator& evaluator,
    const SearchConfig& config, VisitedSet* visited) {
  if (position >= parent->tokens.size()) {
    throw InputError("mask position " + std::to_string(position) +
                     " out of range");
  }
  if (config.mask_div > config.topk) {
    throw InputError("mask_div must not exceed topk");
  }
  const std::string& original = parent->tokens[position];
  const auto proposals =
      filler.TopCandidates(parent->tokens.WithMask(position), config.topk);

  std::vector<MliChild> children;
  std::vector<std::string> texts;
  VisitedSet batch;
  for (const auto& proposal : proposals) {
    if (proposal.token == original || !IsSingleToken(proposal.token)) continue;
    auto tokens = ApplySubstitution(parent->tokens, position, proposal.token);
    auto text = tokens.Render();
    if ((visited != nullptr && visited->contains(text)) ||
        !batch.insert(text).second) {
      continue;
    }
    MliChild child;
    child.token = proposal.token;
    child.filler_score = proposal.score;
    child.vocab_index = proposal.vocab_index;
    child.candidate.tokens = std::move(tokens);
    child.candidate.text = text;
    texts.push_back(std::move(text));
    children.push_back(std::move(child));
  }
  if (children.empty()) {
    throw EmptyProposalError("no usable substitute for position " +
                             std::to_string(position));
  }

  const auto scores = evaluator.Evaluate(texts);
  for (std::size_t i = 0; i < children.size(); ++i) {
    Candidate& c = children[i].candidate;
    c.target_prob = scores[i].target_prob;
    c.distance = scores[i].distance;
    c.cost = scores[i].cost;
    c.depth = parent->depth + 1;
    c.edited_positions = parent->edited_positions;
    if (!std::binary_search(c.edited_positions.begin(),
                            c.edited_positions.end(), position)) {
      c.edited_positions.insert(
          std::upper_bound(c.edited_positions.begin(),
                           c.edited_positions.end(), position),
          position);
    }
    c.parent = parent;
    children[i].accepted = scores[i].accepted;
  }
  if (visited != nullptr) visited->insert(texts.begin(), texts.end());

  std::stable_sort(children.begin(), children.end(),
                   [](const MliChild& a, const MliChild& b) {
                     if (a.candidate.cost != b.candidate.cost) {
                       return a.candidate.cost < b.candidate.cost;
                     }
                     if (a.filler_score != b.filler_score) {
                       return a.filler_score > b.filler_score;
                     }
                     return a.vocab_index < b.vocab_index;
                   });
  if (children.size() > static_cast<std::size_t>(config.mask_div)) {
    children.resize(config.mask_div);
  }
  return children;
}

}  // namespace cftext
