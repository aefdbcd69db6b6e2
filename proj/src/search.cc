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

#include "cftext/search.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cftext/errors.h"
#include "cftext/mli.h"
#include "cftext/semantics.h"
#include "json.hpp"

namespace cftext {

void CandidateQueue::Push(std::shared_ptr<const Candidate> candidate) {
  const double cost = candidate->cost;
  entries_.emplace(Key{cost, next_sequence_++}, std::move(candidate));
  if (cap_ > 0 && entries_.size() > cap_) entries_.erase(std::prev(entries_.end()));
}

std::shared_ptr<const Candidate> CandidateQueue::Pop() {
  if (entries_.empty()) throw std::out_of_range("pop from empty queue");
  auto node = entries_.extract(entries_.begin());
  return std::move(node.mapped());
}

std::string_view ToString(Termination t) {
  switch (t) {
    case Termination::kFoundP:
      return "found_p";
    case Termination::kEarlyStop:
      return "early_stop";
    case Termination::kQueueExhausted:
      return "queue_exhausted";
  }
  return "unknown";
}

std::vector<std::size_t> RankPositions(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

std::vector<std::size_t> OrderPositions(const Candidate& candidate,
                                        const ImportanceProvider& provider,
                                        Strategy strategy,
                                        const ImportanceVector* root_importance,
                                        const ClassifierGateway& classifier,
                                        int target, std::uint64_t seed) {
  if (candidate.tokens.empty()) throw InputError("candidate has no tokens");
  if (strategy == Strategy::kStatic) {
    if (root_importance == nullptr ||
        root_importance->scores.size() != candidate.tokens.size()) {
      throw InputError("static strategy needs root importance of equal length");
    }
    return RankPositions(root_importance->scores);
  }
  const auto importance =
      provider.Compute(candidate.tokens, classifier, target, seed);
  return RankPositions(importance.scores);
}

namespace {

std::unique_ptr<SemanticMeasure> MakeMeasure(const SearchBackends& backends,
                                             SimilarityKind kind) {
  if (kind == SimilarityKind::kClassifierClsEmbedding) {
    return std::make_unique<SemanticMeasure>(*backends.classifier);
  }
  if (backends.embedder == nullptr) {
    throw InputError("sentence_embedder similarity needs an embedder");
  }
  return std::make_unique<SemanticMeasure>(*backends.embedder);
}

// Per-expansion seed for the evolutive strategy.
std::uint64_t ExpansionSeed(std::uint64_t seed, std::uint64_t expansion) {
  return seed ^ (0x9e3779b97f4a7c15ull * (expansion + 1));
}

}  // namespace

SearchResult RunSearch(std::string_view origin, const SearchBackends& backends,
                       const SearchConfig& config,
                       std::optional<int> requested_target) {
  if (backends.classifier == nullptr || backends.filler == nullptr ||
      backends.importance == nullptr) {
    throw InputError("search needs a classifier, a filler and an importance "
                     "provider");
  }
  const ClassifierGateway& classifier = *backends.classifier;
  config.Validate(classifier.num_classes());

  auto root = std::make_shared<Candidate>();
  root->tokens = Tokenize(origin);
  if (root->tokens.empty()) throw InputError("origin text has no tokens");
  root->text = std::string(origin);

  SearchResult result;
  result.origin = root->text;
  result.target = ResolveTarget(classifier, origin, requested_target);

  const auto measure = MakeMeasure(backends, config.similarity);
  const CandidateEvaluator evaluator(classifier, *measure, root->text,
                                     result.target, config.alpha,
                                     config.margin);
  const auto root_score = evaluator.Evaluate(root->text);
  root->target_prob = root_score.target_prob;
  root->distance = root_score.distance;
  root->cost = root_score.cost;

  VisitedSet visited{root->text};
  CandidateQueue queue(config.queue_cap);
  queue.Push(root);

  std::optional<ImportanceVector> root_importance;
  if (config.strategy == Strategy::kStatic) {
    root_importance = backends.importance->Compute(root->tokens, classifier,
                                                   result.target, config.seed);
    ++result.importance_calls;
  }

  std::vector<Candidate> found;
  const auto wanted = static_cast<std::size_t>(config.num_counterfactuals);
  int& used = result.evaluations_used;
  std::uint64_t pops = 0;
  while (found.size() < wanted && used < config.early_stop) {
    if (queue.empty()) break;
    const auto parent = queue.Pop();
    const std::uint64_t pop_index = pops++;

    TraceExpansion expansion{parent->text, parent->cost,
                             result.trace.edges.size(), 0};
    std::vector<std::size_t> positions;
    if (config.strategy == Strategy::kStatic) {
      positions = OrderPositions(*parent, *backends.importance, config.strategy,
                                 &*root_importance, classifier, result.target,
                                 config.seed);
    } else {
      positions = OrderPositions(
          *parent, *backends.importance, config.strategy, nullptr, classifier,
          result.target,
          ExpansionSeed(config.seed, pop_index));
      ++result.importance_calls;
    }
    if (positions.size() > static_cast<std::size_t>(config.beam_width)) {
      positions.resize(config.beam_width);
    }

    for (std::size_t position : positions) {
      if (used >= config.early_stop) break;
      ++used;
      std::vector<MliChild> children;
      try {
        children = MaskLanguageInference(parent, position, *backends.filler,
                                         evaluator, config, &visited);
      } catch (const EmptyProposalError&) {
        continue;
      }
      for (auto& child : children) {
        if (config.record_trace) {
          result.trace.edges.push_back({parent->text, child.candidate.text,
                                        position, child.token,
                                        child.candidate.cost, child.accepted});
        }
        if (child.accepted) {
          found.push_back(std::move(child.candidate));
        } else {
          queue.Push(std::make_shared<const Candidate>(
              std::move(child.candidate)));
        }
      }
    }
    expansion.edge_count = result.trace.edges.size() - expansion.first_edge;
    if (config.record_trace) result.trace.expansions.push_back(expansion);
  }

  if (found.size() >= wanted) {
    result.terminated_by = Termination::kFoundP;
  } else if (used >= config.early_stop) {
    result.terminated_by = Termination::kEarlyStop;
  } else {
    result.terminated_by = Termination::kQueueExhausted;
  }

  std::stable_sort(found.begin(), found.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.cost < b.cost;
                   });
  if (found.size() > wanted) found.resize(wanted);
  result.counterfactuals = std::move(found);
  return result;
}

void WriteTraceJsonl(const SearchTrace& trace, std::ostream& out) {
  for (const auto& edge : trace.edges) {
    nlohmann::ordered_json line;
    line["parent"] = edge.parent;
    line["child"] = edge.child;
    line["position"] = edge.position;
    line["token"] = edge.token;
    line["cost"] = edge.cost;
    line["accepted"] = edge.accepted;
    out << line.dump() << '\n';
  }
}

}  // namespace cftext
