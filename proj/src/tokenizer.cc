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

#include "cftext/tokenizer.h"

#include <utility>

#include "cftext/errors.h"

namespace cftext {
namespace {

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsWordChar(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

// Tokenizes `text`, recording the whitespace before each token.
void Scan(std::string_view text, std::vector<std::string>* tokens,
          std::vector<std::string>* gaps, std::string* trailing) {
  std::size_t i = 0;
  std::string gap;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (IsSpace(c)) {
      gap.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    if (text.substr(i, kMaskToken.size()) == kMaskToken) {
      end = i + kMaskToken.size();
    } else if (IsWordChar(c)) {
      while (end < text.size()) {
        const auto d = static_cast<unsigned char>(text[end]);
        if (IsWordChar(d)) {
          ++end;
        } else if (d == '\'' && end + 1 < text.size() &&
                   IsWordChar(static_cast<unsigned char>(text[end + 1]))) {
          end += 2;
        } else {
          break;
        }
      }
    }
    tokens->emplace_back(text.substr(i, end - i));
    if (gaps != nullptr) gaps->push_back(std::exchange(gap, {}));
    i = end;
  }
  if (trailing != nullptr) *trailing = std::move(gap);
}

// Rendering `left` directly followed by `right` would not tokenize back to
// the two tokens.
bool NeedsSeparator(const std::string& left, const std::string& right) {
  const auto joined = SplitTokens(left + right);
  return joined.size() != 2 || joined[0] != left || joined[1] != right;
}

}  // namespace

TokenSequence::TokenSequence(std::vector<std::string> tokens,
                             std::vector<std::string> gaps,
                             std::string trailing)
    : tokens_(std::move(tokens)),
      gaps_(std::move(gaps)),
      trailing_(std::move(trailing)) {
  gaps_.resize(tokens_.size());
}

std::string TokenSequence::Render() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (gaps_[i].empty() && i > 0 && NeedsSeparator(tokens_[i - 1], tokens_[i])) {
      out.push_back(' ');
    } else {
      out += gaps_[i];
    }
    out += tokens_[i];
  }
  out += trailing_;
  if (SplitTokens(out) == tokens_) return out;
  // Glue across three or more tokens (e.g. "x" "'" "y"); separate every
  // token that had no whitespace before it.
  out.clear();
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += (gaps_[i].empty() && i > 0) ? std::string(" ") : gaps_[i];
    out += tokens_[i];
  }
  out += trailing_;
  return out;
}

TokenSequence TokenSequence::WithToken(std::size_t position,
                                       std::string token) const {
  if (position >= tokens_.size()) {
    throw InputError("substitution position " + std::to_string(position) +
                     " out of range for " + std::to_string(tokens_.size()) +
                     " tokens");
  }
  TokenSequence copy = *this;
  copy.tokens_[position] = std::move(token);
  return copy;
}

std::size_t TokenSequence::CountMasks() const {
  std::size_t n = 0;
  for (const auto& t : tokens_) n += (t == kMaskToken);
  return n;
}

std::vector<std::string> SplitTokens(std::string_view text) {
  std::vector<std::string> tokens;
  Scan(text, &tokens, nullptr, nullptr);
  return tokens;
}

TokenSequence Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::vector<std::string> gaps;
  std::string trailing;
  Scan(text, &tokens, &gaps, &trailing);
  return TokenSequence(std::move(tokens), std::move(gaps), std::move(trailing));
}

bool IsSingleToken(std::string_view token) {
  const auto split = SplitTokens(token);
  return split.size() == 1 && split[0] == token;
}

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !IsSpace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

}  // namespace cftext
