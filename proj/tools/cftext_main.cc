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

// Command-line driver: generate, evaluate, sweep and oracle.

#include <cstdint>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cftext/harness/commands.h"

namespace {

using cftext::harness::kExitUsage;

void AddCommon(CLI::App* cmd, std::string* corpus, std::string* out,
               std::string* train) {
  cmd->add_option("--corpus", *corpus, "Corpus (JSONL or one text per line)")
      ->required();
  cmd->add_option("--out", *out, "Output path")->required();
  cmd->add_option("--train", *train,
                  "Labeled corpus for fitting the reference models "
                  "(default: --corpus)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterfactual text explanations for classifiers"};
  app.require_subcommand(1);

  cftext::harness::GenerateOptions gen;
  std::optional<std::uint64_t> gen_seed;
  auto* generate = app.add_subcommand("generate", "Search counterfactuals");
  AddCommon(generate, &gen.corpus, &gen.out, &gen.train);
  generate->add_option("--config", gen.config, "JSON run config");
  generate->add_option("--seed", gen_seed, "Override the config seed");
  generate->add_option("--workers", gen.workers, "Concurrent instances")
      ->check(CLI::PositiveNumber);
  generate->add_option("--trace-dir", gen.trace_dir,
                       "Write one search-trace JSONL per instance here");

  cftext::harness::EvaluateOptions eval;
  auto* evaluate = app.add_subcommand("evaluate", "Compute metrics report");
  AddCommon(evaluate, &eval.corpus, &eval.out, &eval.train);
  evaluate->add_option("--generated", eval.generated, "Output of generate")
      ->required();
  evaluate->add_option("--config", eval.config, "JSON run config (lambda)");

  cftext::harness::SweepOptions sweep_opts;
  std::optional<std::uint64_t> sweep_seed;
  auto* sweep = app.add_subcommand("sweep", "Random hyperparameter search");
  AddCommon(sweep, &sweep_opts.corpus, &sweep_opts.out, &sweep_opts.train);
  sweep->add_option("--space", sweep_opts.space, "JSON sweep space");
  sweep->add_option("--config", sweep_opts.config, "Base JSON run config");
  sweep->add_option("--trials", sweep_opts.trials, "Number of trials")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweep_seed, "Sampling seed");
  sweep->add_option("--workers", sweep_opts.workers, "Concurrent instances")
      ->check(CLI::PositiveNumber);

  cftext::harness::OracleOptions oracle_opts;
  std::optional<std::uint64_t> oracle_seed;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive single-edit search");
  AddCommon(oracle, &oracle_opts.corpus, &oracle_opts.out, &oracle_opts.train);
  oracle->add_option("--config", oracle_opts.config, "JSON run config");
  oracle->add_option("--seed", oracle_seed, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (generate->parsed()) {
    gen.seed = gen_seed;
    return cftext::harness::RunGenerate(gen, std::cerr);
  }
  if (evaluate->parsed()) return cftext::harness::RunEvaluate(eval, std::cerr);
  if (sweep->parsed()) {
    sweep_opts.seed = sweep_seed;
    return cftext::harness::RunSweep(sweep_opts, std::cerr);
  }
  oracle_opts.seed = oracle_seed;
  return cftext::harness::RunOracle(oracle_opts, std::cerr);
}
