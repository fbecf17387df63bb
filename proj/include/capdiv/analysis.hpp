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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "capdiv/idf.hpp"
#include "capdiv/kernel.hpp"
#include "capdiv/text.hpp"

namespace capdiv {

enum class ProjectionKernel { bow, self_cider };

/// Loadings of each caption on the 5 leading latent components of the chosen
/// similarity kernel, for radar-style charts. Components are raw unit
/// eigenvector entries with the largest-magnitude entry forced positive;
/// their singular values are reported alongside so charts can re-scale.
/// When m < 5 the trailing components are zero with singular value 0 (the
/// orthonormality guarantee covers only the leading m components).
struct SemanticProjection {
  static constexpr int kComponents = 5;

  ProjectionKernel kernel = ProjectionKernel::bow;
  bool stop_words_removed = false;
  std::array<double, kComponents> singular_values{};
  std::vector<std::array<double, kComponents>> loadings;  // one row per caption
};

/// idf is only consulted for the self_cider kernel (pass anything for bow).
/// remove_stop_words applies to the bow path only: stop words are dropped
/// from the captions before the word-caption matrix is built.
SemanticProjection semantic_projection(const std::vector<TokenizedCaption>& captions,
                                       ProjectionKernel kernel, const IdfTable& idf,
                                       bool remove_stop_words = false);

/// Bundled English stop-word list (sorted, already in tokenized form, so
/// contracted forms appear as their token pieces, e.g. "don", "t").
const std::vector<std::string>& english_stop_words();

/// Classical multidimensional scaling of the kernel, treating entries as
/// inner products: d_ij = sqrt(max(0, k_ii + k_jj - 2 k_ij)), double-center
/// -1/2 D^2, embed on the top-2 nonnegative eigenpairs. Coordinates are
/// centered on the origin; stress is the Frobenius norm of the difference
/// between embedded and original distance matrices.
struct MdsEmbedding {
  std::vector<std::array<double, 2>> points;
  double stress = 0.0;
};

MdsEmbedding classical_mds(const KernelMatrix& kernel);

struct VocabRow {
  std::string source;
  std::size_t vocab_size = 0;  // distinct words in the source, before truncation
  int rank = 0;                // 1-based, frequency-descending, ties alphabetical
  std::string word;
  std::uint64_t frequency = 0;
};

/// Rank-ordered word-frequency table per caption source, truncated to the
/// top_k most frequent words of each source.
std::vector<VocabRow> vocab_report(
    const std::vector<std::pair<std::string, std::vector<TokenizedCaption>>>& groups,
    std::size_t top_k = 5000);

}  // namespace capdiv
