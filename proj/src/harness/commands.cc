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

#include "cftext/harness/commands.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "cftext/errors.h"
#include "cftext/harness/oracle.h"
#include "cftext/harness/sweep.h"
#include "cftext/importance.h"
#include "cftext/search.h"
#include "cftext/semantics.h"

namespace cftext::harness {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Corpus LoadNonEmptyCorpus(const std::string& path) {
  Corpus corpus = LoadCorpus(path);
  if (corpus.instances.empty()) throw InputError("empty corpus");
  return corpus;
}

ModelSuite LoadSuite(const Corpus& corpus, const std::string& train_path) {
  if (train_path.empty()) return ResolveSuite(corpus);
  return ResolveSuite(LoadNonEmptyCorpus(train_path));
}

RunConfig LoadConfigOrDefault(const std::string& path,
                              const std::optional<std::uint64_t>& seed) {
  RunConfig config = path.empty() ? RunConfig{} : LoadRunConfig(path);
  if (seed) config.search.seed = *seed;
  return config;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

std::vector<json> ReadJsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::vector<json> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw InputError(path + " line " + std::to_string(line_number) + ": " +
                       e.what());
    }
  }
  return records;
}

ordered_json SearchRecord(const CorpusInstance& instance,
                          const SearchResult& result, int requested) {
  ordered_json record;
  record["id"] = instance.id;
  record["target"] = result.target;
  record["requested"] = requested;
  ordered_json texts = ordered_json::array();
  ordered_json costs = ordered_json::array();
  for (const auto& c : result.counterfactuals) {
    texts.push_back(c.text);
    costs.push_back(c.cost);
  }
  record["counterfactuals"] = std::move(texts);
  record["costs"] = std::move(costs);
  record["evaluations_used"] = result.evaluations_used;
  record["terminated_by"] = ToString(result.terminated_by);
  return record;
}

ordered_json ErrorRecord(const CorpusInstance& instance, int requested,
                         const std::string& message) {
  ordered_json record;
  record["id"] = instance.id;
  record["target"] = nullptr;
  record["requested"] = requested;
  record["counterfactuals"] = ordered_json::array();
  record["costs"] = ordered_json::array();
  record["evaluations_used"] = 0;
  record["terminated_by"] = nullptr;
  record["error"] = message;
  return record;
}

// Runs body(i) for i in [0, n) on up to `workers` threads.
template <typename Body>
void ParallelFor(std::size_t n, int workers, Body body) {
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Shared wrapper turning exceptions into exit statuses.
template <typename Body>
int Guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

RunReport EvaluateRecords(const std::vector<json>& records, const Corpus& corpus,
                          const ModelSuite& models, double lambda) {
  const auto instances = JoinWithCorpus(records, corpus);
  return Aggregate(instances, *models.embedder, *models.scorer, lambda);
}

}  // namespace

std::vector<ordered_json> GenerateRecords(const Corpus& corpus,
                                          const ModelSuite& models,
                                          const RunConfig& config, int workers,
                                          std::vector<SearchTrace>* traces) {
  std::vector<ordered_json> records(corpus.instances.size());
  if (traces != nullptr) traces->assign(corpus.instances.size(), {});
  const int requested = config.search.num_counterfactuals;
  ParallelFor(corpus.instances.size(), workers, [&](std::size_t i) {
    const CorpusInstance& instance = corpus.instances[i];
    try {
      const auto provider = MakeImportanceProvider(
          config.search.importance, config.search.shapley_permutations);
      SearchBackends backends{models.classifier.get(),
                              &models.Filler(config.filler),
                              models.embedder.get(), provider.get()};
      SearchConfig search = config.search;
      search.seed = config.search.seed + i;
      auto result = RunSearch(instance.text, backends, search, instance.target);
      records[i] = SearchRecord(instance, result, requested);
      if (traces != nullptr) (*traces)[i] = std::move(result.trace);
    } catch (const std::exception& e) {
      records[i] = ErrorRecord(instance, requested, e.what());
    }
  });
  return records;
}

std::vector<GeneratedInstance> JoinWithCorpus(const std::vector<json>& records,
                                              const Corpus& corpus) {
  std::map<std::string, const json*> by_id;
  for (const auto& r : records) {
    if (!r.is_object() || !r.contains("id") || !r["id"].is_string()) {
      throw InputError("generation record without a string id");
    }
    if (!by_id.emplace(r["id"].get<std::string>(), &r).second) {
      throw InputError("duplicate generation id '" + r["id"].get<std::string>() +
                       "'");
    }
  }
  if (by_id.size() != corpus.instances.size()) {
    throw InputError("generation output has " + std::to_string(by_id.size()) +
                     " ids, corpus has " +
                     std::to_string(corpus.instances.size()));
  }
  std::vector<GeneratedInstance> out;
  for (const auto& instance : corpus.instances) {
    const auto it = by_id.find(instance.id);
    if (it == by_id.end()) {
      throw InputError("corpus id '" + instance.id +
                       "' missing from generation output");
    }
    const json& r = *it->second;
    GeneratedInstance g;
    g.id = instance.id;
    g.origin = instance.text;
    try {
      g.counterfactuals = r.at("counterfactuals").get<std::vector<std::string>>();
      g.requested = r.value("requested", 1);
    } catch (const json::exception& e) {
      throw InputError("generation record '" + instance.id + "': " + e.what());
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::string CsvPathFor(const std::string& json_path) {
  std::filesystem::path p(json_path);
  if (p.extension() == ".json") return p.replace_extension(".csv").string();
  return json_path + ".csv";
}

int RunGenerate(const GenerateOptions& options, std::ostream& err) {
  return Guarded(err, [&] {
    const Corpus corpus = LoadNonEmptyCorpus(options.corpus);
    const RunConfig config = LoadConfigOrDefault(options.config, options.seed);
    const ModelSuite models = LoadSuite(corpus, options.train);
    config.search.Validate(models.classifier->num_classes());

    std::vector<SearchTrace> traces;
    const auto records =
        GenerateRecords(corpus, models, config, options.workers,
                        options.trace_dir.empty() ? nullptr : &traces);
    auto out = OpenOutput(options.out);
    for (const auto& r : records) out << r.dump() << '\n';

    if (!options.trace_dir.empty()) {
      std::filesystem::create_directories(options.trace_dir);
      for (std::size_t i = 0; i < traces.size(); ++i) {
        auto trace_out = OpenOutput(
            (std::filesystem::path(options.trace_dir) /
             (std::to_string(i) + ".trace.jsonl"))
                .string());
        WriteTraceJsonl(traces[i], trace_out);
      }
    }
    int failed = 0;
    for (const auto& r : records) failed += r.contains("error");
    if (failed > 0) err << failed << " instance(s) failed; see output\n";
    return kExitOk;
  });
}

int RunEvaluate(const EvaluateOptions& options, std::ostream& err) {
  return Guarded(err, [&] {
    const Corpus corpus = LoadNonEmptyCorpus(options.corpus);
    const auto records = ReadJsonl(options.generated);
    const RunConfig config = LoadConfigOrDefault(options.config, std::nullopt);
    const ModelSuite models = LoadSuite(corpus, options.train);
    const RunReport report =
        EvaluateRecords(records, corpus, models, config.lambda);

    auto json_out = OpenOutput(options.out);
    json_out << ToJson(report).dump(2) << '\n';
    auto csv_out = OpenOutput(CsvPathFor(options.out));
    WriteCsv(report, csv_out);
    return kExitOk;
  });
}

int RunSweep(const SweepOptions& options, std::ostream& err) {
  return Guarded(err, [&] {
    if (options.trials < 1) throw InputError("trials must be >= 1");
    const Corpus corpus = LoadNonEmptyCorpus(options.corpus);
    const RunConfig base = LoadConfigOrDefault(options.config, options.seed);
    SweepSpace space;
    if (!options.space.empty()) {
      std::ifstream in(options.space);
      if (!in) throw InputError("cannot read sweep space '" + options.space + "'");
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        throw InputError(std::string("sweep space is not valid JSON: ") + e.what());
      }
      space = ParseSweepSpace(doc);
    }
    const ModelSuite models = LoadSuite(corpus, options.train);

    std::mt19937_64 rng(base.search.seed);
    ordered_json doc;
    doc["seed"] = base.search.seed;
    auto& trials = doc["trials"] = ordered_json::array();
    std::vector<TrialObjectives> objectives;
    std::vector<RunConfig> sampled;
    for (int t = 0; t < options.trials; ++t) {
      RunConfig config = SampleConfig(space, base, rng);
      config.search.Validate(models.classifier->num_classes());
      const auto ordered = GenerateRecords(corpus, models, config, options.workers);
      std::vector<json> records(ordered.begin(), ordered.end());
      const RunReport report =
          EvaluateRecords(records, corpus, models, config.lambda);
      objectives.push_back(ObjectivesOf(report));

      auto report_json = ToJson(report);
      report_json.erase("per_instance");
      ordered_json trial;
      trial["trial"] = t;
      trial["config"] = ToJson(config);
      trial["report"] = std::move(report_json);
      trials.push_back(std::move(trial));
      sampled.push_back(std::move(config));
    }
    const auto sums = RankSums(objectives);
    const std::size_t best = BestTrial(sums);
    auto& summary = doc["summary"];
    summary["objectives"] = {"success_rate:max", "mean_similarity:max",
                             "mean_diversity:max", "mean_sparsity:min"};
    summary["rank_sums"] = sums;
    summary["best_trial"] = best;
    summary["best_config"] = ToJson(sampled[best]);

    auto out = OpenOutput(options.out);
    out << doc.dump(2) << '\n';
    return kExitOk;
  });
}

int RunOracle(const OracleOptions& options, std::ostream& err) {
  return Guarded(err, [&] {
    const Corpus corpus = LoadNonEmptyCorpus(options.corpus);
    const RunConfig config = LoadConfigOrDefault(options.config, options.seed);
    const ModelSuite models = LoadSuite(corpus, options.train);
    const ClassifierGateway& classifier = *models.classifier;
    config.search.Validate(classifier.num_classes());

    auto out = OpenOutput(options.out);
    for (const auto& instance : corpus.instances) {
      ordered_json record;
      record["id"] = instance.id;
      try {
        const int target = ResolveTarget(classifier, instance.text, instance.target);
        std::unique_ptr<SemanticMeasure> measure =
            config.search.similarity == SimilarityKind::kClassifierClsEmbedding
                ? std::make_unique<SemanticMeasure>(classifier)
                : std::make_unique<SemanticMeasure>(*models.embedder);
        const auto solution =
            BruteForceDepth1(instance.text, classifier,
                             models.Filler(config.filler), *measure,
                             config.search, target);
        record["target"] = target;
        record["found"] = solution.has_value();
        if (solution) {
          record["counterfactual"] = solution->text;
          record["position"] = solution->position;
          record["token"] = solution->token;
          record["target_prob"] = solution->target_prob;
          record["cost"] = solution->cost;
        }
      } catch (const std::exception& e) {
        record["found"] = false;
        record["error"] = e.what();
      }
      out << record.dump() << '\n';
    }
    return kExitOk;
  });
}

}  // namespace cftext::harness
