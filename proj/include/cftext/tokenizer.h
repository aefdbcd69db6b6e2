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

#ifndef CFTEXT_TOKENIZER_H_
#define CFTEXT_TOKENIZER_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cftext {

// Sentinel inserted at a masked position. Recognised atomically by the
// tokenizer so that masked texts tokenize back to the same positions.
inline constexpr std::string_view kMaskToken = "[MASK]";

// A text as an ordered list of tokens plus the exact whitespace around
// them, so that Render() reproduces the original surface string.
class TokenSequence {
 public:
  TokenSequence() = default;
  TokenSequence(std::vector<std::string> tokens, std::vector<std::string> gaps,
                std::string trailing);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }
  std::span<const std::string> tokens() const { return tokens_; }

  // Surface string. Where a substitution would glue two tokens into one
  // (e.g. "a" "," -> "a" "b" with no gap) a single space is inserted.
  std::string Render() const;

  // Copy with `position` replaced by `token`. Throws InputError when the
  // position is out of range.
  TokenSequence WithToken(std::size_t position, std::string token) const;
  TokenSequence WithMask(std::size_t position) const {
    return WithToken(position, std::string(kMaskToken));
  }

  // Number of positions holding the mask sentinel.
  std::size_t CountMasks() const;

  friend bool operator==(const TokenSequence&,
                         const TokenSequence&) = default;

 private:
  std::vector<std::string> tokens_;
  // gaps_[i] is the whitespace preceding tokens_[i].
  std::vector<std::string> gaps_;
  std::string trailing_;
};

// Whitespace + punctuation splitter shared by every gateway and by the
// search, so that all of them agree on token positions.
//
// Word tokens are maximal runs of ASCII alphanumerics, '_', bytes >= 0x80
// (UTF-8 continuation stays inside the word) and apostrophes enclosed by
// word characters. Every other non-space character is its own token,
// except the mask sentinel which is kept whole.
std::vector<std::string> SplitTokens(std::string_view text);
TokenSequence Tokenize(std::string_view text);

// True when `token` tokenizes to exactly itself.
bool IsSingleToken(std::string_view token);

// Whitespace-split words, used by the word-level sparsity metric.
std::vector<std::string> SplitWords(std::string_view text);

}  // namespace cftext

#endif  // CFTEXT_TOKENIZER_H_
