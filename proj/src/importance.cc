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

#include "cftext/importance.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "cftext/errors.h"
#include "json.hpp"

namespace cftext {
namespace {

void RequireNonEmpty(const TokenSequence& text) {
  if (text.empty()) throw InputError("importance of an empty token sequence");
}

// Probability of class `label` for every coalition in `masks`, where
// masks[j][i] is true when token i is masked. Results are memoized in
// `cache` so each coalition is classified once.
std::vector<double> CoalitionValues(
    const TokenSequence& text, const ClassifierGateway& classifier, int label,
    const std::vector<std::vector<bool>>& masks,
    std::map<std::vector<bool>, double>* cache) {
  std::vector<std::string> pending_texts;
  std::vector<const std::vector<bool>*> pending;
  std::set<std::vector<bool>> queued;
  for (const auto& mask : masks) {
    if (cache->contains(mask) || !queued.insert(mask).second) continue;
    TokenSequence masked = text;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) masked = masked.WithMask(i);
    }
    pending.push_back(&mask);
    pending_texts.push_back(masked.Render());
  }
  if (!pending.empty()) {
    const auto probs = classifier.PredictProbaBatch(pending_texts);
    for (std::size_t j = 0; j < pending.size(); ++j) {
      cache->emplace(*pending[j], probs[j][label]);
    }
  }
  std::vector<double> values;
  values.reserve(masks.size());
  for (const auto& mask : masks) values.push_back(cache->at(mask));
  return values;
}

// n! if it fits below `cap`, otherwise `cap`.
long long CappedFactorial(std::size_t n, long long cap) {
  long long f = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (f > cap / static_cast<long long>(i)) return cap;
    f *= static_cast<long long>(i);
  }
  return f;
}

}  // namespace

ImportanceVector AttentionImportance(const TokenSequence& text,
                                     const ClassifierGateway& classifier) {
  RequireNonEmpty(text);
  auto weights = classifier.Attention(text.Render());
  if (weights.size() != text.size()) {
    throw GatewayError("attention is not aligned with the token sequence");
  }
  return {std::move(weights), "attention"};
}

ImportanceVector OcclusionImportance(const TokenSequence& text,
                                     const ClassifierGateway& classifier) {
  RequireNonEmpty(text);
  const auto base = classifier.PredictProba(text.Render());
  const int predicted = ArgMax(base);
  std::vector<std::string> occluded;
  occluded.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    occluded.push_back(text.WithMask(i).Render());
  }
  const auto probs = classifier.PredictProbaBatch(occluded);
  ImportanceVector out{std::vector<double>(text.size()), "agnostic"};
  for (std::size_t i = 0; i < text.size(); ++i) {
    out.scores[i] = base[predicted] - probs[i][predicted];
  }
  return out;
}

ImportanceVector SampledShapley(const TokenSequence& text,
                                const ClassifierGateway& classifier,
                                int num_permutations, std::uint64_t seed) {
  RequireNonEmpty(text);
  if (num_permutations < 1) {
    throw InputError("sampled Shapley needs num_permutations >= 1");
  }
  const std::size_t n = text.size();
  const int predicted = ArgMax(classifier.PredictProba(text.Render()));

  const long long orderings = CappedFactorial(n, num_permutations + 1LL);
  const bool enumerate = orderings <= num_permutations;
  const long long rounds = enumerate ? orderings : num_permutations;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::map<std::vector<bool>, double> cache;
  std::vector<double> totals(n, 0.0);

  for (long long r = 0; r < rounds; ++r) {
    if (enumerate) {
      if (r > 0) std::next_permutation(order.begin(), order.end());
    } else {
      std::shuffle(order.begin(), order.end(), rng);
    }
    // Coalitions along the ordering: everything masked, then unmask one
    // token at a time.
    std::vector<std::vector<bool>> chain;
    chain.reserve(n + 1);
    std::vector<bool> mask(n, true);
    chain.push_back(mask);
    for (std::size_t position : order) {
      mask[position] = false;
      chain.push_back(mask);
    }
    const auto values = CoalitionValues(text, classifier, predicted, chain,
                                        &cache);
    for (std::size_t step = 0; step < n; ++step) {
      totals[order[step]] += values[step + 1] - values[step];
    }
  }
  ImportanceVector out{std::move(totals), "shapley"};
  for (double& s : out.scores) s /= static_cast<double>(rounds);
  return out;
}

ImportanceVector RandomImportance(const TokenSequence& text,
                                  std::uint64_t seed) {
  RequireNonEmpty(text);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  ImportanceVector out{std::vector<double>(text.size()), "random"};
  for (double& s : out.scores) s = uniform(rng);
  return out;
}

ImportanceVector AttentionProvider::Compute(const TokenSequence& text,
                                            const ClassifierGateway& classifier,
                                            int, std::uint64_t) const {
  return AttentionImportance(text, classifier);
}

ImportanceVector OcclusionProvider::Compute(const TokenSequence& text,
                                            const ClassifierGateway& classifier,
                                            int, std::uint64_t) const {
  return OcclusionImportance(text, classifier);
}

SampledShapleyProvider::SampledShapleyProvider(int num_permutations)
    : num_permutations_(num_permutations) {
  if (num_permutations_ < 1) {
    throw InputError("sampled Shapley needs num_permutations >= 1");
  }
}

ImportanceVector SampledShapleyProvider::Compute(
    const TokenSequence& text, const ClassifierGateway& classifier, int,
    std::uint64_t seed) const {
  return SampledShapley(text, classifier, num_permutations_, seed);
}

ImportanceVector RandomProvider::Compute(const TokenSequence& text,
                                         const ClassifierGateway&, int,
                                         std::uint64_t seed) const {
  return RandomImportance(text, seed);
}

PrecomputedProvider PrecomputedProvider::FromJsonl(std::istream& in) {
  PrecomputedProvider provider;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
      provider.Add(record.at("text").get<std::string>(),
                   record.at("scores").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
      throw InputError("attribution line " + std::to_string(line_number) +
                       ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("attribution line " + std::to_string(line_number) +
                       ": " + e.what());
    }
  }
  return provider;
}

void PrecomputedProvider::Add(std::string text, std::vector<double> scores) {
  const std::size_t tokens = SplitTokens(text).size();
  if (scores.size() != tokens) {
    throw InputError("attribution has " + std::to_string(scores.size()) +
                     " scores for " + std::to_string(tokens) + " tokens");
  }
  table_.insert_or_assign(std::move(text), std::move(scores));
}

ImportanceVector PrecomputedProvider::Compute(const TokenSequence& text,
                                              const ClassifierGateway&, int,
                                              std::uint64_t) const {
  const auto it = table_.find(text.Render());
  if (it == table_.end()) {
    throw InputError("no precomputed attribution for '" + text.Render() + "'");
  }
  if (it->second.size() != text.size()) {
    throw InputError("precomputed attribution is not aligned with the tokens");
  }
  return {it->second, "precomputed"};
}

std::unique_ptr<ImportanceProvider> MakeImportanceProvider(
    std::string_view id, int num_permutations) {
  if (id == "attention") return std::make_unique<AttentionProvider>();
  if (id == "agnostic") return std::make_unique<OcclusionProvider>();
  if (id == "shapley") {
    return std::make_unique<SampledShapleyProvider>(num_permutations);
  }
  if (id == "random") return std::make_unique<RandomProvider>();
  throw InputError("unknown importance provider '" + std::string(id) + "'");
}

}  // namespace cftext
