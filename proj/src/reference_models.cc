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

#include "cftext/reference_models.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cftext/errors.h"

namespace cftext {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

// ---------------------------------------------------------------------------
// ReferenceLinearClassifier

ReferenceLinearClassifier::ReferenceLinearClassifier(
    int num_classes, WeightTable weights, std::vector<double> bias,
    ClassifierCapabilities capabilities)
    : num_classes_(num_classes),
      weights_(std::move(weights)),
      bias_(std::move(bias)),
      caps_(capabilities) {
  if (num_classes_ < 2) throw InputError("a classifier needs k >= 2 classes");
  if (bias_.empty()) bias_.assign(num_classes_, 0.0);
  if (static_cast<int>(bias_.size()) != num_classes_) {
    throw InputError("bias length must equal the number of classes");
  }
  for (const auto& [token, row] : weights_) {
    if (static_cast<int>(row.size()) != num_classes_) {
      throw InputError("weight row for '" + token + "' has wrong length");
    }
  }
}

ReferenceLinearClassifier ReferenceLinearClassifier::FitNaiveBayes(
    std::span<const std::string> texts, std::span<const int> labels,
    int num_classes, double smoothing) {
  if (texts.size() != labels.size() || texts.empty()) {
    throw InputError("naive Bayes fit needs one label per text");
  }
  std::map<std::string, std::vector<double>> counts;
  std::vector<double> totals(num_classes, 0.0);
  std::vector<double> docs(num_classes, 0.0);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const int label = labels[i];
    if (label < 0 || label >= num_classes) {
      throw InputError("label " + std::to_string(label) + " out of range");
    }
    docs[label] += 1.0;
    for (auto& token : SplitTokens(texts[i])) {
      auto& row = counts[token];
      row.resize(num_classes, 0.0);
      row[label] += 1.0;
      totals[label] += 1.0;
    }
  }
  const double vocab = static_cast<double>(counts.size());
  WeightTable weights;
  for (auto& [token, row] : counts) {
    std::vector<double> w(num_classes);
    for (int c = 0; c < num_classes; ++c) {
      w[c] = std::log((row[c] + smoothing) / (totals[c] + smoothing * vocab));
    }
    weights.emplace(token, std::move(w));
  }
  std::vector<double> bias(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    bias[c] = std::log((docs[c] + 1.0) / (texts.size() + num_classes));
  }
  return ReferenceLinearClassifier(num_classes, std::move(weights),
                                   std::move(bias));
}

double ReferenceLinearClassifier::Weight(std::string_view token,
                                         int label) const {
  const auto it = weights_.find(std::string(token));
  return it == weights_.end() ? 0.0 : it->second[label];
}

std::vector<double> ReferenceLinearClassifier::Logits(
    std::string_view text) const {
  std::vector<double> logits = bias_;
  for (const auto& token : SplitTokens(text)) {
    const auto it = weights_.find(token);
    if (it == weights_.end()) continue;
    for (int c = 0; c < num_classes_; ++c) logits[c] += it->second[c];
  }
  return logits;
}

std::vector<double> ReferenceLinearClassifier::DoPredictProba(
    std::string_view text) const {
  return Softmax(Logits(text));
}

std::vector<double> ReferenceLinearClassifier::DoAttention(
    std::string_view text) const {
  std::vector<double> spread;
  for (const auto& token : SplitTokens(text)) {
    const auto it = weights_.find(token);
    if (it == weights_.end()) {
      spread.push_back(0.0);
    } else {
      const auto [lo, hi] = std::minmax_element(it->second.begin(),
                                                it->second.end());
      spread.push_back(*hi - *lo);
    }
  }
  return Softmax(spread);
}

std::vector<double> ReferenceLinearClassifier::DoClsEmbedding(
    std::string_view text) const {
  auto v = Logits(text);
  v.push_back(1.0);
  return v;
}

// ---------------------------------------------------------------------------
// UnigramMaskFiller

UnigramMaskFiller::UnigramMaskFiller(
    std::vector<std::pair<std::string, double>> vocab)
    : vocab_(std::move(vocab)) {
  for (const auto& [token, score] : vocab_) {
    if (!IsSingleToken(token)) {
      throw InputError("filler vocabulary entry '" + token +
                       "' is not a single token");
    }
  }
}

std::vector<FillProposal> UnigramMaskFiller::DoTopCandidates(
    const TokenSequence&, std::size_t, int) const {
  std::vector<FillProposal> out;
  out.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    out.push_back({vocab_[i].first, vocab_[i].second, static_cast<int>(i)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// BigramMaskFiller

BigramMaskFiller BigramMaskFiller::Fit(std::span<const std::string> texts,
                                       double add_k) {
  std::set<std::string> types;
  std::vector<std::vector<std::string>> sentences;
  for (const auto& text : texts) {
    auto tokens = SplitTokens(text);
    std::erase(tokens, std::string(kMaskToken));
    types.insert(tokens.begin(), tokens.end());
    sentences.push_back(std::move(tokens));
  }
  BigramMaskFiller filler;
  filler.add_k_ = add_k;
  filler.vocab_.assign(types.begin(), types.end());
  for (std::size_t i = 0; i < filler.vocab_.size(); ++i) {
    filler.index_.emplace(filler.vocab_[i], static_cast<int>(i));
  }
  const int boundary = static_cast<int>(filler.vocab_.size());
  filler.context_counts_.assign(filler.vocab_.size() + 1, 0.0);
  for (const auto& sentence : sentences) {
    int previous = boundary;
    for (const auto& token : sentence) {
      const int id = filler.index_.at(token);
      filler.bigram_counts_[{previous, id}] += 1.0;
      filler.context_counts_[previous] += 1.0;
      previous = id;
    }
    filler.bigram_counts_[{previous, boundary}] += 1.0;
    filler.context_counts_[previous] += 1.0;
  }
  return filler;
}

double BigramMaskFiller::Transition(int from, int to) const {
  const double slots = static_cast<double>(vocab_.size() + 1);
  double joint = 0.0;
  double context = 0.0;
  if (from >= 0) {
    context = context_counts_[from];
    if (to >= 0) {
      const auto it = bigram_counts_.find({from, to});
      if (it != bigram_counts_.end()) joint = it->second;
    }
  }
  return (joint + add_k_) / (context + add_k_ * slots);
}

std::vector<FillProposal> BigramMaskFiller::DoTopCandidates(
    const TokenSequence& masked, std::size_t mask_position, int) const {
  const int boundary = static_cast<int>(vocab_.size());
  auto lookup = [&](std::size_t pos) {
    const auto it = index_.find(masked[pos]);
    return it == index_.end() ? -1 : it->second;
  };
  const int left = mask_position == 0 ? boundary : lookup(mask_position - 1);
  const int right =
      mask_position + 1 == masked.size() ? boundary : lookup(mask_position + 1);

  std::vector<FillProposal> out;
  out.reserve(vocab_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    const int id = static_cast<int>(i);
    const double s = Transition(left, id) * Transition(id, right);
    out.push_back({vocab_[i], s, id});
    total += s;
  }
  for (auto& p : out) p.score /= total;
  return out;
}

// ---------------------------------------------------------------------------
// Embedders

HashedBagOfWordsEmbedder::HashedBagOfWordsEmbedder(
    std::size_t dimension,
    std::optional<std::set<std::string, std::less<>>> vocabulary)
    : dimension_(dimension), vocabulary_(std::move(vocabulary)) {
  if (dimension_ == 0) throw InputError("embedding dimension must be > 0");
}

std::size_t HashedBagOfWordsEmbedder::Bucket(std::string_view token) const {
  return static_cast<std::size_t>(Fnv1a(token) % dimension_);
}

std::vector<double> HashedBagOfWordsEmbedder::DoEmbed(
    std::string_view text) const {
  std::vector<double> v(dimension_, 0.0);
  for (const auto& token : SplitTokens(text)) {
    if (vocabulary_ && !vocabulary_->contains(token)) continue;
    v[Bucket(token)] += 1.0;
  }
  return v;
}

TableEmbedder::TableEmbedder(
    std::size_t dimension,
    std::map<std::string, std::vector<double>, std::less<>> table)
    : dimension_(dimension), table_(std::move(table)) {}

std::vector<double> TableEmbedder::DoEmbed(std::string_view text) const {
  const auto it = table_.find(text);
  if (it == table_.end()) {
    throw GatewayError("no fixture embedding for '" + std::string(text) + "'");
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// NgramLanguageModel

namespace {
constexpr char kUnknown[] = "<unk>";
constexpr char kBoundary[] = "</s>";
}  // namespace

NgramLanguageModel NgramLanguageModel::Uniform(std::size_t vocabulary_size) {
  if (vocabulary_size == 0) throw InputError("uniform model needs |V| > 0");
  NgramLanguageModel lm;
  lm.order_ = 1;
  lm.uniform_probability_ = 1.0 / static_cast<double>(vocabulary_size);
  return lm;
}

NgramLanguageModel NgramLanguageModel::Fit(std::span<const std::string> texts,
                                           int order, double add_k) {
  if (order != 1 && order != 2) throw InputError("n-gram order must be 1 or 2");
  NgramLanguageModel lm;
  lm.order_ = order;
  lm.add_k_ = add_k;
  for (const auto& text : texts) {
    std::string previous = kBoundary;
    for (auto& token : SplitTokens(text)) {
      lm.unigram_counts_[token] += 1.0;
      lm.total_ += 1.0;
      lm.bigram_counts_[{previous, token}] += 1.0;
      lm.context_counts_[previous] += 1.0;
      previous = std::move(token);
    }
    lm.bigram_counts_[{previous, kBoundary}] += 1.0;
    lm.context_counts_[previous] += 1.0;
  }
  // Unknown slot, plus the end symbol for the bigram model.
  lm.types_ = lm.unigram_counts_.size() + (order == 2 ? 2 : 1);
  return lm;
}

double NgramLanguageModel::LogProb(const std::string& previous,
                                   const std::string& token) const {
  auto known = [this](const std::string& t) {
    return t == kBoundary || unigram_counts_.contains(t) ? t
                                                         : std::string(kUnknown);
  };
  if (uniform_probability_ > 0.0) return std::log(uniform_probability_);
  const double slots = static_cast<double>(types_);
  if (order_ == 1) {
    const auto it = unigram_counts_.find(token);
    const double c = it == unigram_counts_.end() ? 0.0 : it->second;
    return std::log((c + add_k_) / (total_ + add_k_ * slots));
  }
  const std::string from = known(previous);
  const std::string to = known(token);
  const auto bi = bigram_counts_.find({from, to});
  const auto ctx = context_counts_.find(from);
  const double joint = bi == bigram_counts_.end() ? 0.0 : bi->second;
  const double context = ctx == context_counts_.end() ? 0.0 : ctx->second;
  return std::log((joint + add_k_) / (context + add_k_ * slots));
}

double NgramLanguageModel::DoPerplexity(std::string_view text) const {
  const auto tokens = SplitTokens(text);
  double nll = 0.0;
  std::size_t predictions = 0;
  std::string previous = kBoundary;
  for (const auto& token : tokens) {
    nll -= LogProb(previous, token);
    ++predictions;
    previous = token;
  }
  if (order_ == 2) {
    nll -= LogProb(previous, kBoundary);
    ++predictions;
  }
  return std::exp(nll / static_cast<double>(predictions));
}

}  // namespace cftext
