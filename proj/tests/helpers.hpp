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

#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "capdiv/idf.hpp"
#include "capdiv/text.hpp"

namespace testutil {

inline capdiv::TokenizedCaption cap(std::initializer_list<const char*> words) {
  capdiv::TokenizedCaption caption;
  for (const char* word : words) caption.tokens.emplace_back(word);
  return caption;
}

inline std::vector<capdiv::TokenizedCaption> caps(
    std::initializer_list<const char*> sentences) {
  std::vector<capdiv::TokenizedCaption> out;
  for (const char* sentence : sentences) out.push_back(capdiv::tokenize(sentence));
  return out;
}

inline capdiv::TokenizedCaption random_caption(std::mt19937& rng, int vocab_size,
                                               int min_len, int max_len) {
  std::uniform_int_distribution<int> length(min_len, max_len);
  std::uniform_int_distribution<int> word(0, vocab_size - 1);
  capdiv::TokenizedCaption caption;
  const int n = length(rng);
  for (int i = 0; i < n; ++i) caption.tokens.push_back("w" + std::to_string(word(rng)));
  return caption;
}

inline std::vector<capdiv::TokenizedCaption> random_caption_set(std::mt19937& rng, int m,
                                                                int vocab_size, int min_len,
                                                                int max_len) {
  std::vector<capdiv::TokenizedCaption> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) out.push_back(random_caption(rng, vocab_size, min_len, max_len));
  return out;
}

// IDF over one single-caption document per caption; every gram of every
// caption gets a positive weight as long as there are >= 2 documents and no
// gram occurs in all of them.
inline capdiv::IdfTable per_caption_idf(const std::vector<capdiv::TokenizedCaption>& captions) {
  std::vector<std::vector<capdiv::TokenizedCaption>> documents;
  documents.reserve(captions.size());
  for (const auto& caption : captions) documents.push_back({caption});
  return capdiv::IdfTable::build(documents);
}

}  // namespace testutil
