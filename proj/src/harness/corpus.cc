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

#include "cftext/harness/corpus.h"

#include <fstream>
#include <set>

#include "cftext/errors.h"
#include "cftext/tokenizer.h"
#include "json.hpp"

namespace cftext::harness {

bool Corpus::labeled() const {
  for (const auto& i : instances) {
    if (!i.label) return false;
  }
  return !instances.empty();
}

std::vector<std::string> Corpus::texts() const {
  std::vector<std::string> out;
  out.reserve(instances.size());
  for (const auto& i : instances) out.push_back(i.text);
  return out;
}

Corpus ParseCorpus(std::istream& in) {
  Corpus corpus;
  std::set<std::string> ids;
  std::optional<bool> jsonl;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (!jsonl) jsonl = line[first] == '{';

    CorpusInstance instance;
    if (*jsonl) {
      try {
        const auto record = nlohmann::json::parse(line);
        instance.id = record.at("id").is_string()
                          ? record.at("id").get<std::string>()
                          : record.at("id").dump();
        instance.text = record.at("text").get<std::string>();
        if (record.contains("label") && !record["label"].is_null()) {
          instance.label = record["label"].get<int>();
        }
        if (record.contains("target") && !record["target"].is_null()) {
          instance.target = record["target"].get<int>();
        }
      } catch (const nlohmann::json::exception& e) {
        throw InputError("corpus line " + std::to_string(line_number) + ": " +
                         e.what());
      }
    } else {
      instance.id = std::to_string(corpus.instances.size());
      instance.text = line;
    }
    if (SplitTokens(instance.text).empty()) {
      throw InputError("corpus line " + std::to_string(line_number) +
                       ": empty text");
    }
    if (!ids.insert(instance.id).second) {
      throw InputError("duplicate corpus id '" + instance.id + "'");
    }
    corpus.instances.push_back(std::move(instance));
  }
  return corpus;
}

Corpus LoadCorpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read corpus '" + path + "'");
  return ParseCorpus(in);
}

}  // namespace cftext::harness
