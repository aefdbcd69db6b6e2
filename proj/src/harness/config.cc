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

#include "cftext/harness/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "cftext/errors.h"

namespace cftext::harness {
namespace {

using nlohmann::json;

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "preset", "alpha", "topk", "beam_width", "mask_div", "margin",
      "strategy", "early_stop", "p", "seed", "similarity_source",
      "importance", "filler", "shapley_permutations", "queue_cap",
      "record_trace", "lambda"};
  return keys;
}

template <typename T>
T Get(const json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError("config key '" + key + "': " + e.what());
  }
}

int GetInt(const json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) {
    throw InputError("config key '" + key + "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace

RunConfig ParseRunConfig(const json& doc) {
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!KnownKeys().contains(key)) {
      throw InputError("unknown config key '" + key + "'");
    }
  }
  RunConfig config;
  if (doc.contains("preset")) {
    const auto preset = Get<std::string>(doc, "preset");
    if (preset == "relaxed") {
      config.search = RelaxedConfig();
    } else if (preset != "default") {
      throw InputError("unknown preset '" + preset + "'");
    }
  }
  SearchConfig& s = config.search;
  if (doc.contains("alpha")) s.alpha = Get<double>(doc, "alpha");
  if (doc.contains("topk")) s.topk = GetInt(doc, "topk");
  if (doc.contains("beam_width")) s.beam_width = GetInt(doc, "beam_width");
  if (doc.contains("mask_div")) s.mask_div = GetInt(doc, "mask_div");
  if (doc.contains("margin")) s.margin = Get<double>(doc, "margin");
  if (doc.contains("strategy")) {
    s.strategy = ParseStrategy(Get<std::string>(doc, "strategy"));
  }
  if (doc.contains("early_stop")) s.early_stop = GetInt(doc, "early_stop");
  if (doc.contains("p")) s.num_counterfactuals = GetInt(doc, "p");
  if (doc.contains("seed")) s.seed = Get<std::uint64_t>(doc, "seed");
  if (doc.contains("similarity_source")) {
    s.similarity = ParseSimilarityKind(Get<std::string>(doc, "similarity_source"));
  }
  if (doc.contains("importance")) {
    s.importance = Get<std::string>(doc, "importance");
    static const std::set<std::string> kProviders = {"attention", "agnostic",
                                                     "shapley", "random"};
    if (!kProviders.contains(s.importance)) {
      throw InputError("unknown importance provider '" + s.importance + "'");
    }
  }
  if (doc.contains("shapley_permutations")) {
    s.shapley_permutations = GetInt(doc, "shapley_permutations");
  }
  if (doc.contains("queue_cap")) {
    s.queue_cap = Get<std::size_t>(doc, "queue_cap");
  }
  if (doc.contains("record_trace")) s.record_trace = Get<bool>(doc, "record_trace");
  if (doc.contains("filler")) {
    config.filler = Get<std::string>(doc, "filler");
    if (config.filler != "pretrained" && config.filler != "finetuned") {
      throw InputError("filler must be 'pretrained' or 'finetuned'");
    }
  }
  if (doc.contains("lambda")) {
    config.lambda = Get<double>(doc, "lambda");
    if (!(config.lambda > 0.0)) throw InputError("lambda must be > 0");
  }
  // Class-count dependent bounds are checked again once the classifier is
  // known; k = 2 is the loosest case for everything but the margin.
  SearchConfig loose = s;
  loose.margin = 0.0;
  loose.Validate(2);
  if (s.margin < 0.0 || s.margin >= 1.0) {
    throw InputError("margin must lie in [0, (k-1)/k]");
  }
  return config;
}

RunConfig ParseRunConfig(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  return ParseRunConfig(doc);
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseRunConfig(std::string_view(buffer.str()));
}

nlohmann::ordered_json ToJson(const RunConfig& config) {
  const SearchConfig& s = config.search;
  nlohmann::ordered_json j;
  j["alpha"] = s.alpha;
  j["topk"] = s.topk;
  j["beam_width"] = s.beam_width;
  j["mask_div"] = s.mask_div;
  j["margin"] = s.margin;
  j["strategy"] = ToString(s.strategy);
  j["early_stop"] = s.early_stop;
  j["p"] = s.num_counterfactuals;
  j["seed"] = s.seed;
  j["similarity_source"] = ToString(s.similarity);
  j["importance"] = s.importance;
  j["filler"] = config.filler;
  j["shapley_permutations"] = s.shapley_permutations;
  j["queue_cap"] = s.queue_cap;
  j["record_trace"] = s.record_trace;
  j["lambda"] = config.lambda;
  return j;
}

}  // namespace cftext::harness
