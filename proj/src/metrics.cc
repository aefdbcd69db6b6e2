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

#include "cftext/metrics.h"

#include <Eigen/Dense>
#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <spdlog/spdlog.h>

#include "cftext/errors.h"
#include "cftext/semantics.h"
#include "cftext/tokenizer.h"

namespace cftext {

std::size_t WordLevenshtein(std::span<const std::string> a,
                            std::span<const std::string> b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = up;
    }
  }
  return row[b.size()];
}

double Sparsity(std::string_view origin, std::string_view counterfactual) {
  const auto from = SplitWords(origin);
  const auto to = SplitWords(counterfactual);
  if (from.empty()) throw InputError("sparsity of an empty origin");
  return static_cast<double>(WordLevenshtein(from, to)) /
         static_cast<double>(from.size());
}

double Proximity(std::string_view origin, std::string_view counterfactual,
                 const EmbedderGateway& embedder) {
  return CosineSimilarity(embedder.Embed(origin), embedder.Embed(counterfactual));
}

double PplRatio(std::string_view origin, std::string_view counterfactual,
                const FluencyScorerGateway& scorer) {
  return scorer.Perplexity(counterfactual) / scorer.Perplexity(origin);
}

double DiversityFromDistances(const std::vector<std::vector<double>>& distances,
                              double lambda) {
  if (!(lambda > 0.0)) throw InputError("diversity needs lambda > 0");
  const auto n = static_cast<Eigen::Index>(distances.size());
  if (n == 0) throw InputError("diversity of an empty set");
  Eigen::MatrixXd kernel(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      kernel(i, j) = 1.0 / (lambda + distances[i][j]);
    }
  }
  // Two equal rows make K singular; report the exact zero rather than the
  // rounding residue of the factorization.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (kernel.row(i) == kernel.row(j)) return 0.0;
    }
  }
  return kernel.determinant();
}

double Diversity(std::span<const std::string> counterfactuals,
                 const EmbedderGateway& embedder, double lambda) {
  const SemanticMeasure measure(embedder);
  const std::size_t n = counterfactuals.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d[i][j] = measure.Distance(counterfactuals[i], counterfactuals[j]);
    }
  }
  return DiversityFromDistances(d, lambda);
}

GeneratedInstance FromSearchResult(std::string id, const SearchResult& result,
                                   int requested) {
  GeneratedInstance out{std::move(id), result.origin, {}, requested};
  for (const auto& c : result.counterfactuals) out.counterfactuals.push_back(c.text);
  return out;
}

namespace {

std::optional<double> Mean(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

InstanceMetrics Evaluate(const GeneratedInstance& instance,
                         const EmbedderGateway& embedder,
                         const FluencyScorerGateway& scorer, double lambda) {
  InstanceMetrics m;
  m.id = instance.id;
  m.requested = instance.requested;
  m.found = static_cast<int>(instance.counterfactuals.size());
  m.success = m.found >= 1;
  m.strict_success = m.found >= instance.requested;
  if (!m.success) return m;

  std::vector<double> sparsity, similarity, ppl;
  for (const auto& cf : instance.counterfactuals) {
    sparsity.push_back(Sparsity(instance.origin, cf));
    try {
      similarity.push_back(Proximity(instance.origin, cf, embedder));
    } catch (const DegenerateEmbeddingError& e) {
      spdlog::warn("instance {}: similarity excluded: {}", instance.id, e.what());
    }
    try {
      ppl.push_back(PplRatio(instance.origin, cf, scorer));
    } catch (const std::exception& e) {
      spdlog::warn("instance {}: perplexity ratio excluded: {}", instance.id,
                   e.what());
    }
  }
  m.sparsity = Mean(sparsity);
  m.similarity = Mean(similarity);
  if (!similarity.empty()) {
    m.best_similarity = *std::max_element(similarity.begin(), similarity.end());
  }
  m.ppl_ratio = Mean(ppl);
  try {
    m.diversity = Diversity(instance.counterfactuals, embedder, lambda);
  } catch (const DegenerateEmbeddingError& e) {
    spdlog::warn("instance {}: diversity excluded: {}", instance.id, e.what());
  }
  return m;
}

std::optional<double> MeanOver(const std::vector<InstanceMetrics>& rows,
                               std::optional<double> InstanceMetrics::*field) {
  std::vector<double> values;
  for (const auto& row : rows) {
    if (row.success && (row.*field).has_value()) values.push_back(*(row.*field));
  }
  return Mean(values);
}

nlohmann::ordered_json OrNull(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string CsvField(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream s;
  s << std::setprecision(17) << *v;
  return s.str();
}

std::string CsvQuote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RunReport Aggregate(std::span<const GeneratedInstance> batch,
                    const EmbedderGateway& embedder,
                    const FluencyScorerGateway& scorer, double lambda) {
  if (batch.empty()) throw InputError("cannot aggregate an empty batch");
  RunReport report;
  report.instances = batch.size();
  std::size_t successes = 0;
  std::size_t strict = 0;
  for (const auto& instance : batch) {
    report.per_instance.push_back(Evaluate(instance, embedder, scorer, lambda));
    successes += report.per_instance.back().success;
    strict += report.per_instance.back().strict_success;
  }
  const auto n = static_cast<double>(batch.size());
  report.success_rate = static_cast<double>(successes) / n;
  report.strict_success_rate = static_cast<double>(strict) / n;
  report.mean_sparsity = MeanOver(report.per_instance, &InstanceMetrics::sparsity);
  report.mean_similarity =
      MeanOver(report.per_instance, &InstanceMetrics::similarity);
  report.mean_best_similarity =
      MeanOver(report.per_instance, &InstanceMetrics::best_similarity);
  report.mean_ppl_ratio =
      MeanOver(report.per_instance, &InstanceMetrics::ppl_ratio);
  report.mean_diversity =
      MeanOver(report.per_instance, &InstanceMetrics::diversity);
  return report;
}

nlohmann::ordered_json ToJson(const RunReport& report) {
  nlohmann::ordered_json j;
  j["instances"] = report.instances;
  j["success_rate"] = report.success_rate;
  j["strict_success_rate"] = report.strict_success_rate;
  j["mean_sparsity"] = OrNull(report.mean_sparsity);
  j["mean_similarity"] = OrNull(report.mean_similarity);
  j["mean_best_similarity"] = OrNull(report.mean_best_similarity);
  j["mean_ppl_ratio"] = OrNull(report.mean_ppl_ratio);
  j["mean_diversity"] = OrNull(report.mean_diversity);
  auto& rows = j["per_instance"] = nlohmann::ordered_json::array();
  for (const auto& m : report.per_instance) {
    nlohmann::ordered_json row;
    row["id"] = m.id;
    row["requested"] = m.requested;
    row["found"] = m.found;
    row["success"] = m.success;
    row["strict_success"] = m.strict_success;
    row["sparsity"] = OrNull(m.sparsity);
    row["similarity"] = OrNull(m.similarity);
    row["best_similarity"] = OrNull(m.best_similarity);
    row["ppl_ratio"] = OrNull(m.ppl_ratio);
    row["diversity"] = OrNull(m.diversity);
    rows.push_back(std::move(row));
  }
  return j;
}

void WriteCsv(const RunReport& report, std::ostream& out) {
  out << "id,requested,found,success,strict_success,sparsity,similarity,"
         "best_similarity,ppl_ratio,diversity\n";
  for (const auto& m : report.per_instance) {
    out << CsvQuote(m.id) << ',' << m.requested << ',' << m.found << ','
        << (m.success ? 1 : 0) << ',' << (m.strict_success ? 1 : 0) << ','
        << CsvField(m.sparsity) << ',' << CsvField(m.similarity) << ','
        << CsvField(m.best_similarity) << ',' << CsvField(m.ppl_ratio) << ','
        << CsvField(m.diversity) << '\n';
  }
}

}  // namespace cftext
