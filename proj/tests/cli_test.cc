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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cftext/harness/commands.h"
#include "cftext/harness/corpus.h"
#include "cftext/harness/model_suite.h"
#include "cftext/metrics.h"
#include "cftext/objective.h"
#include "cftext/tokenizer.h"
#include "json.hpp"

namespace cftext::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kFixture = std::string(CFTEXT_DATA_DIR) + "/reviews_fixture.jsonl";
const std::string kPlain = std::string(CFTEXT_DATA_DIR) + "/reviews_plain.txt";
const std::string kTrain = std::string(CFTEXT_DATA_DIR) + "/reviews_train.jsonl";

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<json> ReadLines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    // These tests exercise the reference models only.
    unsetenv(kModelEndpointEnv);
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("cftext_cli_") + info->name() + "_" +
            std::to_string(getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Path(const std::string& name) const { return dir_ / name; }

  fs::path Write(const std::string& name, const std::string& content) const {
    std::ofstream(Path(name), std::ios::binary) << content;
    return Path(name);
  }

  // Runs the CLI binary; returns its exit status.
  int Cli(const std::string& args) const {
    const std::string command = "env -u " + std::string(kModelEndpointEnv) + " '" +
                                CFTEXT_CLI_PATH + "' " + args + " 2>'" +
                                Path("stderr.txt").string() + "'";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

TEST_F(CliTest, EmptyCorpusIsUsageError) {
  const auto empty = Write("empty.jsonl", "\n\n");
  GenerateOptions g{.corpus = empty.string(), .out = Path("g.jsonl").string()};
  std::ostringstream err;
  EXPECT_EQ(RunGenerate(g, err), kExitUsage);
  EXPECT_NE(err.str().find("empty corpus"), std::string::npos) << err.str();

  EXPECT_EQ(Cli("generate --corpus '" + empty.string() + "' --out '" +
                Path("g.jsonl").string() + "'"),
            kExitUsage);
  EXPECT_NE(Slurp(Path("stderr.txt")).find("empty corpus"), std::string::npos);
}

TEST_F(CliTest, BadInputsAreUsageErrors) {
  const auto bad_config = Write("bad.json", R"({"topk": "many"})");
  std::ostringstream err;
  EXPECT_EQ(RunGenerate({.corpus = kFixture,
                         .config = bad_config.string(),
                         .out = Path("g.jsonl").string()},
                        err),
            kExitUsage);
  EXPECT_EQ(RunGenerate({.corpus = Path("missing.jsonl").string(),
                         .out = Path("g.jsonl").string()},
                        err),
            kExitUsage);
  // A plain-text corpus has no labels to fit the reference models on.
  EXPECT_EQ(RunGenerate({.corpus = kPlain, .out = Path("g.jsonl").string()}, err),
            kExitUsage);
  EXPECT_EQ(Cli("generate --corpus '" + kFixture + "' --config '" +
                bad_config.string() + "' --out '" + Path("g.jsonl").string() +
                "'"),
            kExitUsage);
  EXPECT_NE(Cli("generate --out x"), 0);
  EXPECT_NE(Cli("frobnicate"), 0);
}

TEST_F(CliTest, PlainCorpusWithSeparateTraining) {
  std::ostringstream err;
  ASSERT_EQ(RunGenerate({.corpus = kPlain,
                         .out = Path("g.jsonl").string(),
                         .train = kTrain},
                        err),
            kExitOk)
      << err.str();
  const auto records = ReadLines(Path("g.jsonl"));
  ASSERT_EQ(records.size(), LoadCorpus(kPlain).instances.size());
  EXPECT_EQ(records[0]["id"], "0");
}

TEST_F(CliTest, GenerateRecordsAreSound) {
  const auto config = Write("c.json", R"({"p": 2, "early_stop": 200})");
  std::ostringstream err;
  ASSERT_EQ(RunGenerate({.corpus = kFixture,
                         .config = config.string(),
                         .out = Path("g.jsonl").string(),
                         .trace_dir = Path("traces").string()},
                        err),
            kExitOk)
      << err.str();
  const Corpus corpus = LoadCorpus(kFixture);
  const ModelSuite suite = BuildReferenceSuite(corpus);
  const auto records = ReadLines(Path("g.jsonl"));
  ASSERT_EQ(records.size(), corpus.instances.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const json& r = records[i];
    EXPECT_EQ(r["id"], corpus.instances[i].id);
    EXPECT_FALSE(r.contains("error")) << r.dump();
    const auto texts = r["counterfactuals"].get<std::vector<std::string>>();
    const auto costs = r["costs"].get<std::vector<double>>();
    ASSERT_LE(texts.size(), 2u);
    ASSERT_EQ(texts.size(), costs.size());
    EXPECT_TRUE(std::is_sorted(costs.begin(), costs.end()));
    EXPECT_LE(r["evaluations_used"].get<int>(), 200);
    const int target = r["target"].get<int>();
    EXPECT_NE(target, ArgMax(suite.classifier->PredictProba(corpus.instances[i].text)));
    for (const auto& t : texts) {
      EXPECT_TRUE(IsAccepted(t, target, 0.15, *suite.classifier)) << t;
      EXPECT_EQ(Tokenize(t).size(), Tokenize(corpus.instances[i].text).size());
    }
    EXPECT_TRUE(fs::exists(Path("traces") / (std::to_string(i) + ".trace.jsonl")));
  }
}

TEST_F(CliTest, GenerateIsReproducible) {
  const std::string base = "generate --corpus '" + kFixture + "' --seed 3 --out '";
  ASSERT_EQ(Cli(base + Path("a.jsonl").string() + "'"), 0);
  ASSERT_EQ(Cli(base + Path("b.jsonl").string() + "'"), 0);
  ASSERT_EQ(Cli(base + Path("c.jsonl").string() + "' --workers 4"), 0);
  const std::string a = Slurp(Path("a.jsonl"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, Slurp(Path("b.jsonl")));
  EXPECT_EQ(a, Slurp(Path("c.jsonl")));
}

TEST_F(CliTest, Evaluate) {
  std::ostringstream err;
  ASSERT_EQ(RunGenerate({.corpus = kFixture, .out = Path("g.jsonl").string()}, err),
            kExitOk);
  const EvaluateOptions e{.generated = Path("g.jsonl").string(),
                          .corpus = kFixture,
                          .out = Path("report.json").string()};
  ASSERT_EQ(RunEvaluate(e, err), kExitOk) << err.str();
  const std::string first = Slurp(Path("report.json"));
  const std::string first_csv = Slurp(Path("report.csv"));
  const json report = json::parse(first);
  EXPECT_EQ(report["instances"], 10);
  EXPECT_EQ(report["per_instance"].size(), 10u);
  EXPECT_EQ(std::count(first_csv.begin(), first_csv.end(), '\n'), 11);

  ASSERT_EQ(RunEvaluate(e, err), kExitOk);
  EXPECT_EQ(Slurp(Path("report.json")), first);
  EXPECT_EQ(Slurp(Path("report.csv")), first_csv);
  ASSERT_EQ(Cli("evaluate --generated '" + e.generated + "' --corpus '" +
                kFixture + "' --out '" + Path("cli.json").string() + "'"),
            0);
  EXPECT_EQ(Slurp(Path("cli.json")), first);
}

TEST_F(CliTest, EvaluateRejectsIdMismatch) {
  std::ostringstream err;
  ASSERT_EQ(RunGenerate({.corpus = kFixture, .out = Path("g.jsonl").string()}, err),
            kExitOk);
  std::string lines = Slurp(Path("g.jsonl"));
  lines.erase(0, lines.find('\n') + 1);  // drop the first record
  Write("short.jsonl", lines);
  EXPECT_EQ(RunEvaluate({.generated = Path("short.jsonl").string(),
                         .corpus = kFixture,
                         .out = Path("r.json").string()},
                        err),
            kExitUsage);
  Write("junk.jsonl", "not json\n");
  EXPECT_EQ(RunEvaluate({.generated = Path("junk.jsonl").string(),
                         .corpus = kFixture,
                         .out = Path("r.json").string()},
                        err),
            kExitUsage);
}

TEST_F(CliTest, EvaluateAllFailed) {
  std::string lines;
  for (const auto& instance : LoadCorpus(kFixture).instances) {
    lines += json{{"id", instance.id}, {"requested", 3},
                  {"counterfactuals", json::array()}}
                 .dump() +
             "\n";
  }
  Write("none.jsonl", lines);
  std::ostringstream err;
  ASSERT_EQ(RunEvaluate({.generated = Path("none.jsonl").string(),
                         .corpus = kFixture,
                         .out = Path("r.json").string()},
                        err),
            kExitOk)
      << err.str();
  const json r = json::parse(Slurp(Path("r.json")));
  EXPECT_EQ(r["success_rate"], 0.0);
  EXPECT_EQ(r["strict_success_rate"], 0.0);
  for (const char* key : {"mean_sparsity", "mean_similarity", "mean_best_similarity",
                          "mean_ppl_ratio", "mean_diversity"}) {
    EXPECT_TRUE(r[key].is_null()) << key;
  }
}

TEST_F(CliTest, Sweep) {
  const auto config = Write("c.json", R"({"early_stop": 30})");
  std::ostringstream err;
  ASSERT_EQ(RunSweep({.corpus = kFixture,
                      .config = config.string(),
                      .out = Path("one.json").string(),
                      .trials = 1},
                     err),
            kExitOk)
      << err.str();
  const json one = json::parse(Slurp(Path("one.json")));
  EXPECT_EQ(one["trials"].size(), 1u);
  EXPECT_EQ(one["summary"]["best_trial"], 0);

  EXPECT_EQ(RunSweep({.corpus = kFixture, .out = Path("x.json").string(), .trials = 0},
                     err),
            kExitUsage);
  const auto bad_space = Write("space.json", R"({"topk": [2, 3]})");
  EXPECT_EQ(RunSweep({.corpus = kFixture,
                      .space = bad_space.string(),
                      .out = Path("x.json").string(),
                      .trials = 1},
                     err),
            kExitUsage);

  const std::string base = "sweep --corpus '" + kFixture + "' --config '" +
                           config.string() + "' --trials 3 --seed 11 --out '";
  ASSERT_EQ(Cli(base + Path("a.json").string() + "'"), 0);
  ASSERT_EQ(Cli(base + Path("b.json").string() + "'"), 0);
  const std::string a = Slurp(Path("a.json"));
  EXPECT_EQ(a, Slurp(Path("b.json")));
  const json doc = json::parse(a);
  ASSERT_EQ(doc["trials"].size(), 3u);
  const auto sums = doc["summary"]["rank_sums"].get<std::vector<double>>();
  const std::size_t best = doc["summary"]["best_trial"].get<std::size_t>();
  for (double s : sums) EXPECT_LE(sums[best], s);
  EXPECT_EQ(doc["summary"]["best_config"], doc["trials"][best]["config"]);
}

TEST_F(CliTest, Oracle) {
  ASSERT_EQ(Cli("oracle --corpus '" + kFixture + "' --out '" +
                Path("o.jsonl").string() + "'"),
            0);
  const auto records = ReadLines(Path("o.jsonl"));
  const Corpus corpus = LoadCorpus(kFixture);
  ASSERT_EQ(records.size(), corpus.instances.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const json& r = records[i];
    EXPECT_EQ(r["id"], corpus.instances[i].id);
    if (!r["found"].get<bool>()) continue;
    const std::string cf = r["counterfactual"].get<std::string>();
    EXPECT_NEAR(Sparsity(corpus.instances[i].text, cf),
                1.0 / SplitWords(corpus.instances[i].text).size(), 1e-12)
        << cf;
  }
}

}  // namespace
}  // namespace cftext::harness
