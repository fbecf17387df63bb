// Copyright 2026 The capdiv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "capdiv/text.hpp"

#include <string>

#include "capdiv/errors.hpp"

namespace capdiv {

namespace {

inline bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

inline unsigned char ascii_lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<unsigned char>(c - 'A' + 'a') : c;
}

}  // namespace

std::string TokenizedCaption::joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

TokenizedCaption tokenize(const std::string& raw) {
  TokenizedCaption caption;
  std::string current;
  for (unsigned char c : raw) {
    c = ascii_lower(c);
    if (is_token_byte(c)) {
      current += static_cast<char>(c);
    } else if (!current.empty()) {
      caption.tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) caption.tokens.push_back(std::move(current));
  return caption;
}

std::vector<TokenizedCaption> tokenize_all(const std::vector<std::string>& raw) {
  std::vector<TokenizedCaption> out;
  out.reserve(raw.size());
  for (const auto& s : raw) out.push_back(tokenize(s));
  return out;
}

std::int64_t NGramProfile::total() const {
  std::int64_t sum = 0;
  for (const auto& [gram, count] : counts) sum += count;
  return sum;
}

NGramProfile ngrams(const TokenizedCaption& caption, int order) {
  if (order < 1 || order > kMaxNgramOrder)
    fail(errc::invalid_order, "n-gram order must lie in 1..4, got " + std::to_string(order));

  NGramProfile profile;
  profile.order = order;
  const auto& toks = caption.tokens;
  if (toks.size() < static_cast<std::size_t>(order)) return profile;

  for (std::size_t i = 0; i + order <= toks.size(); ++i) {
    std::string gram = toks[i];
    for (int j = 1; j < order; ++j) {
      gram += ' ';
      gram += toks[i + j];
    }
    ++profile.counts[gram];
  }
  return profile;
}

Vocabulary build_vocabulary(const std::vector<TokenizedCaption>& captions) {
  Vocabulary vocab;
  for (const auto& caption : captions) {
    for (const auto& token : caption.tokens) {
      ++vocab.frequency[token];
      ++vocab.total_tokens;
    }
  }
  return vocab;
}

}  // namespace capdiv
