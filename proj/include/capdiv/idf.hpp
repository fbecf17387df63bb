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

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "capdiv/text.hpp"

namespace capdiv {

/// Inverse document frequencies for n-gram orders 1..4.
///
/// One "document" is one image's full reference-caption set; the document
/// frequency of a gram counts documents where it occurs in at least one
/// caption. Weights are log(N/df). Grams never seen in the corpus are
/// treated as df = 1, so novel content keeps a positive weight instead of
/// dropping out. Immutable after construction; safe to share read-only
/// across threads.
class IdfTable {
 public:
  static IdfTable build(const std::vector<std::vector<TokenizedCaption>>& documents);

  std::size_t document_count() const noexcept { return n_docs_; }

  double weight(int order, const std::string& gram) const;

  /// 0 if the gram never occurred in the corpus.
  int document_frequency(int order, const std::string& gram) const;

  // JSON persistence: {"n_docs": N, "entries": [{"n":1,"gram":["a"],"df":3}, ...]},
  // entries sorted by (n, gram) so the file is deterministic.
  std::string to_json() const;
  static IdfTable from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static IdfTable load(const std::filesystem::path& path);

 private:
  IdfTable() = default;

  std::size_t n_docs_ = 0;
  std::array<std::unordered_map<std::string, int>, kMaxNgramOrder> df_;
};

}  // namespace capdiv
