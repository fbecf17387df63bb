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

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace capdiv {

inline constexpr int kMaxNgramOrder = 4;

/// A caption reduced to lowercase alphanumeric word tokens.
///
/// Tokenization is a pure function of the raw text: every byte outside
/// [a-z, 0-9] (after ASCII lowercasing) acts as a separator, consecutive
/// separators collapse, and the result may be empty.
struct TokenizedCaption {
  std::vector<std::string> tokens;

  bool empty() const noexcept { return tokens.empty(); }
  std::size_t size() const noexcept { return tokens.size(); }

  /// Tokens joined by single spaces. Tokenizing the result reproduces
  /// the same token list.
  std::string joined() const;

  friend bool operator==(const TokenizedCaption&, const TokenizedCaption&) = default;
};

TokenizedCaption tokenize(const std::string& raw);

/// Sliding-window n-gram counts of one caption. Grams are stored as
/// space-joined token runs, which is unambiguous because tokens never
/// contain whitespace. A caption shorter than the order has an empty
/// profile; otherwise the counts sum to len - order + 1.
struct NGramProfile {
  int order = 1;
  std::unordered_map<std::string, int> counts;

  std::int64_t total() const;
};

/// Throws errc::invalid_order unless 1 <= order <= 4.
NGramProfile ngrams(const TokenizedCaption& caption, int order);

struct Vocabulary {
  std::unordered_map<std::string, std::uint64_t> frequency;
  std::uint64_t total_tokens = 0;

  std::size_t size() const noexcept { return frequency.size(); }
};

Vocabulary build_vocabulary(const std::vector<TokenizedCaption>& captions);

std::vector<TokenizedCaption> tokenize_all(const std::vector<std::string>& raw);

}  // namespace capdiv
