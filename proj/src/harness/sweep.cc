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

#include "cftext/harness/sweep.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "cftext/errors.h"

namespace cftext::harness {
namespace {

using nlohmann::json;

template <typename T>
void ReadRange(const json& doc, const char* key, T* lo, T* hi) {
  if (!doc.contains(key)) return;
  const auto& v = doc.at(key);
  if (!v.is_array() || v.size() != 2) {
    throw InputError(std::string("sweep key '") + key + "' must be [lo, hi]");
  }
  try {
    *lo = v[0].get<T>();
    *hi = v[1].get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("sweep key '") + key + "': " + e.what());
  }
}

std::vector<std::string> ReadChoices(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_array() || v.empty()) {
    throw InputError(std::string("sweep key '") + key +
                     "' must be a nonempty list");
  }
  return v.get<std::vector<std::string>>();
}

template <typename T>
const T& Pick(const std::vector<T>& choices, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> index(0, choices.size() - 1);
  return choices[index(rng)];
}

// Ranks of `keys` (smaller key = better = rank 1), ties averaged.
std::vector<double> AverageRanks(const std::vector<double>& keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<double> ranks(keys.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && keys[order[j + 1]] == keys[order[i]]) ++j;
    const double rank = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

void SweepSpace::Validate() const {
  auto fail = [](const std::string& what) { throw InputError(what); };
  if (!(alpha_lo >= 0.0 && alpha_lo <= alpha_hi && alpha_hi <= 1.0)) {
    fail("sweep alpha range must lie within [0, 1]");
  }
  if (topk_lo < 1 || topk_lo > topk_hi) fail("sweep topk range is invalid");
  if (beam_width_lo < 1 || beam_width_lo > beam_width_hi) {
    fail("sweep beam_width range is invalid");
  }
  if (mask_div_lo < 1 || mask_div_lo > mask_div_hi) {
    fail("sweep mask_div range is invalid");
  }
  if (mask_div_hi > topk_lo) fail("sweep mask_div may exceed topk");
  if (!(margin_lo >= 0.0 && margin_lo <= margin_hi && margin_hi < 1.0)) {
    fail("sweep margin range is invalid");
  }
  if (strategies.empty() || importances.empty() || fillers.empty() ||
      similarities.empty()) {
    fail("sweep choice lists must be nonempty");
  }
}

SweepSpace ParseSweepSpace(const json& doc) {
  static const std::set<std::string> kKeys = {
      "alpha", "topk", "beam_width", "mask_div", "margin", "strategy",
      "importance", "filler", "similarity_source"};
  if (!doc.is_object()) throw InputError("sweep space must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.contains(key)) throw InputError("unknown sweep key '" + key + "'");
  }
  SweepSpace space;
  ReadRange(doc, "alpha", &space.alpha_lo, &space.alpha_hi);
  ReadRange(doc, "topk", &space.topk_lo, &space.topk_hi);
  ReadRange(doc, "beam_width", &space.beam_width_lo, &space.beam_width_hi);
  ReadRange(doc, "mask_div", &space.mask_div_lo, &space.mask_div_hi);
  ReadRange(doc, "margin", &space.margin_lo, &space.margin_hi);
  if (doc.contains("strategy")) {
    space.strategies.clear();
    for (const auto& s : ReadChoices(doc, "strategy")) {
      space.strategies.push_back(ParseStrategy(s));
    }
  }
  if (doc.contains("importance")) {
    space.importances = ReadChoices(doc, "importance");
    for (const auto& s : space.importances) {
      if (s != "random" && s != "attention" && s != "agnostic" && s != "shapley") {
        throw InputError("unknown importance provider '" + s + "'");
      }
    }
  }
  if (doc.contains("filler")) {
    space.fillers = ReadChoices(doc, "filler");
    for (const auto& s : space.fillers) {
      if (s != "pretrained" && s != "finetuned") {
        throw InputError("unknown filler '" + s + "'");
      }
    }
  }
  if (doc.contains("similarity_source")) {
    space.similarities.clear();
    for (const auto& s : ReadChoices(doc, "similarity_source")) {
      space.similarities.push_back(ParseSimilarityKind(s));
    }
  }
  space.Validate();
  return space;
}

RunConfig SampleConfig(const SweepSpace& space, const RunConfig& base,
                       std::mt19937_64& rng) {
  RunConfig config = base;
  SearchConfig& s = config.search;
  s.alpha = std::uniform_real_distribution<double>(space.alpha_lo,
                                                   space.alpha_hi)(rng);
  s.topk = std::uniform_int_distribution<int>(space.topk_lo, space.topk_hi)(rng);
  s.beam_width = std::uniform_int_distribution<int>(space.beam_width_lo,
                                                    space.beam_width_hi)(rng);
  s.mask_div = std::uniform_int_distribution<int>(space.mask_div_lo,
                                                  space.mask_div_hi)(rng);
  s.margin = std::uniform_real_distribution<double>(space.margin_lo,
                                                    space.margin_hi)(rng);
  s.strategy = Pick(space.strategies, rng);
  s.importance = Pick(space.importances, rng);
  config.filler = Pick(space.fillers, rng);
  s.similarity = Pick(space.similarities, rng);
  return config;
}

TrialObjectives ObjectivesOf(const RunReport& report) {
  return {report.success_rate, report.mean_similarity, report.mean_diversity,
          report.mean_sparsity};
}

std::vector<double> RankSums(const std::vector<TrialObjectives>& trials) {
  constexpr double kMissing = std::numeric_limits<double>::infinity();
  auto keys = [&](auto get, bool higher_is_better) {
    std::vector<double> k;
    for (const auto& t : trials) {
      const std::optional<double> v = get(t);
      k.push_back(!v ? kMissing : (higher_is_better ? -*v : *v));
    }
    return k;
  };
  const std::vector<std::vector<double>> per_objective = {
      AverageRanks(keys([](const TrialObjectives& t) { return t.success_rate; }, true)),
      AverageRanks(keys([](const TrialObjectives& t) { return t.similarity; }, true)),
      AverageRanks(keys([](const TrialObjectives& t) { return t.diversity; }, true)),
      AverageRanks(keys([](const TrialObjectives& t) { return t.sparsity; }, false)),
  };
  std::vector<double> sums(trials.size(), 0.0);
  for (const auto& ranks : per_objective) {
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += ranks[i];
  }
  return sums;
}

std::size_t BestTrial(const std::vector<double>& rank_sums) {
  if (rank_sums.empty()) throw InputError("no trials to compare");
  return static_cast<std::size_t>(
      std::min_element(rank_sums.begin(), rank_sums.end()) - rank_sums.begin());
}

}  // namespace cftext::harness
