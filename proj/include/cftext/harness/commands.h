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

#ifndef CFTEXT_HARNESS_COMMANDS_H_
#define CFTEXT_HARNESS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cftext/harness/config.h"
#include "cftext/harness/corpus.h"
#include "cftext/harness/model_suite.h"
#include "cftext/metrics.h"
#include "json.hpp"

namespace cftext::harness {

// Exit statuses of the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs the search on every instance, `workers` at a time, and returns one
// record per instance in corpus order:
// {"id", "target", "requested", "counterfactuals", "costs",
//  "evaluations_used", "terminated_by"} plus "error" when the instance
// failed. Instance i is searched with seed config.search.seed + i. When
// `traces` is given it receives each instance's search trace.
std::vector<nlohmann::ordered_json> GenerateRecords(
    const Corpus& corpus, const ModelSuite& models, const RunConfig& config,
    int workers, std::vector<SearchTrace>* traces = nullptr);

// Joins generation records with the corpus by id. Throws InputError when
// the id sets differ.
std::vector<GeneratedInstance> JoinWithCorpus(
    const std::vector<nlohmann::json>& records, const Corpus& corpus);

struct GenerateOptions {
  std::string corpus;
  std::string config;  // empty: defaults
  std::string out;
  std::string train;   // empty: the corpus itself
  std::string trace_dir;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

struct EvaluateOptions {
  std::string generated;
  std::string corpus;
  std::string out;  // JSON report; the CSV goes next to it
  std::string config;
  std::string train;
};

struct SweepOptions {
  std::string corpus;
  std::string space;   // empty: the default space
  std::string config;  // base config for the fields not swept
  std::string out;
  std::string train;
  int trials = 100;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

struct OracleOptions {
  std::string corpus;
  std::string config;
  std::string out;
  std::string train;
  std::optional<std::uint64_t> seed;
};

// Each returns an exit status and writes diagnostics to `err`.
int RunGenerate(const GenerateOptions& options, std::ostream& err);
int RunEvaluate(const EvaluateOptions& options, std::ostream& err);
int RunSweep(const SweepOptions& options, std::ostream& err);
int RunOracle(const OracleOptions& options, std::ostream& err);

// "report.json" -> "report.csv"; other names get ".csv" appended.
std::string CsvPathFor(const std::string& json_path);

}  // namespace cftext::harness

#endif  // CFTEXT_HARNESS_COMMANDS_H_
