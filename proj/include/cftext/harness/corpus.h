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

#ifndef CFTEXT_HARNESS_CORPUS_H_
#define CFTEXT_HARNESS_CORPUS_H_

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace cftext::harness {

struct CorpusInstance {
  std::string id;
  std::string text;
  std::optional<int> label;
  std::optional<int> target;
};

struct Corpus {
  std::vector<CorpusInstance> instances;

  bool labeled() const;
  std::vector<std::string> texts() const;
};

// JSONL records {"id", "text", "label", "target"?} or, when the first
// non-blank line is not a JSON object, one text per line with ids "0",
// "1", ... Throws InputError on duplicate ids, empty texts or malformed
// records.
Corpus ParseCorpus(std::istream& in);
Corpus LoadCorpus(const std::string& path);

}  // namespace cftext::harness

#endif  // CFTEXT_HARNESS_CORPUS_H_
