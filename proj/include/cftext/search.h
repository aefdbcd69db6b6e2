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

#ifndef CFTEXT_SEARCH_H_
#define CFTEXT_SEARCH_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cftext/gateways.h"
#include "cftext/importance.h"
#include "cftext/objective.h"

namespace cftext {

// Min-cost priority queue of rejected candidates. Equal costs pop in
// insertion order. With a nonzero cap the most expensive (latest on ties)
// entry is dropped when the cap is exceeded.
class CandidateQueue {
 public:
  explicit CandidateQueue(std::size_t cap = 0) : cap_(cap) {}

  void Push(std::shared_ptr<const Candidate> candidate);
  // Throws std::out_of_range when empty.
  std::shared_ptr<const Candidate> Pop();

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  struct Key {
    double cost;
    std::uint64_t sequence;
    auto operator<=>(const Key&) const = default;
  };
  std::size_t cap_;
  std::uint64_t next_sequence_ = 0;
  std::map<Key, std::shared_ptr<const Candidate>> entries_;
};

enum class Termination { kFoundP, kEarlyStop, kQueueExhausted };
std::string_view ToString(Termination t);

struct TraceEdge {
  std::string parent;
  std::string child;
  std::size_t position = 0;
  std::string token;
  double cost = 0.0;
  bool accepted = false;
};

// One popped parent; its children are edges[first_edge, first_edge + count).
struct TraceExpansion {
  std::string parent;
  double cost = 0.0;
  std::size_t first_edge = 0;
  std::size_t edge_count = 0;
};

struct SearchTrace {
  std::vector<TraceEdge> edges;
  std::vector<TraceExpansion> expansions;
};

struct SearchResult {
  std::string origin;
  int target = 0;
  // Accepted candidates, cheapest first, at most p of them.
  std::vector<Candidate> counterfactuals;
  // Mask-inference calls made; never exceeds early_stop.
  int evaluations_used = 0;
  Termination terminated_by = Termination::kEarlyStop;
  int importance_calls = 0;
  SearchTrace trace;
};

struct SearchBackends {
  const ClassifierGateway* classifier = nullptr;
  const MaskFillerGateway* filler = nullptr;
  // Required when config.similarity is kSentenceEmbedder.
  const EmbedderGateway* embedder = nullptr;
  const ImportanceProvider* importance = nullptr;
};

// Positions sorted by nonincreasing score; ties keep ascending index.
std::vector<std::size_t> RankPositions(std::span<const double> scores);

// Edit order for `candidate`. Evolutive recomputes importance on the
// candidate's own text; static reuses `root_importance` position by
// position (edits never change the length).
std::vector<std::size_t> OrderPositions(const Candidate& candidate,
                                        const ImportanceProvider& provider,
                                        Strategy strategy,
                                        const ImportanceVector* root_importance,
                                        const ClassifierGateway& classifier,
                                        int target, std::uint64_t seed);

// Best-first tree search for counterfactuals of `origin`.
//
// The queue starts with the origin. While fewer than p counterfactuals
// are found and the budget allows, the cheapest candidate is popped, its
// beam_width most important positions are expanded with mask inference
// (each call costs one unit of early_stop), accepted children are kept
// and rejected ones are queued with their cost. Accepted candidates are
// never expanded further. Texts are scored at most once per run.
SearchResult RunSearch(std::string_view origin, const SearchBackends& backends,
                       const SearchConfig& config,
                       std::optional<int> requested_target = std::nullopt);

// One JSON object per line:
// {"parent", "child", "position", "token", "cost", "accepted"}.
void WriteTraceJsonl(const SearchTrace& trace, std::ostream& out);

}  // namespace cftext

#endif  // CFTEXT_SEARCH_H_
