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

#include <cstddef>
#include <vector>

#include "capdiv/idf.hpp"
#include "capdiv/kernel.hpp"
#include "capdiv/text.hpp"

namespace capdiv {

enum class SpectrumSource { bow_gram, kernel };

/// Spectral view of a caption set: singular values sigma_i = sqrt(lambda_i)
/// of the similarity kernel, the concentration ratio r = sigma_1 / sum(sigma),
/// and the diversity score div = -log_m(r) in [0, 1]. div is 0 when one
/// caption dominates the set (rank-1 kernel) and 1 when the captions are
/// pairwise orthogonal under the chosen similarity.
struct SpectralSummary {
  SpectrumSource source = SpectrumSource::kernel;
  std::vector<double> singular_values;  // descending, nonnegative
  double ratio = 1.0;
  double div = 0.0;
};

/// eigenvalues must be descending with negatives already clamped (tiny
/// negative drift is re-clamped here). Throws errc::insufficient_captions
/// for m < 2 (log base 1 is undefined) and errc::degenerate_spectrum when
/// every eigenvalue is zero.
SpectralSummary spectrum_to_div(const std::vector<double>& eigenvalues,
                                SpectrumSource source);

/// bow_kernel -> symmetric_eigenvalues -> spectrum_to_div.
SpectralSummary lsa_diversity(const std::vector<TokenizedCaption>& captions);

/// cider_kernel -> symmetric_eigenvalues -> spectrum_to_div.
SpectralSummary self_cider_diversity(const std::vector<TokenizedCaption>& captions,
                                     const IdfTable& idf);

/// Captions ranked by cider_vs_set accuracy against the references
/// (descending, ties keeping the lower original index); the top-k subset is
/// then scored with both spectral diversities. The subset keeps the captions'
/// original relative order so that k == m reproduces the full-set scores
/// bit for bit.
struct TruncatedDiversity {
  int k = 0;
  std::vector<std::size_t> selected;  // original indices, accuracy-descending
  SpectralSummary lsa;
  SpectralSummary self_cider;
};

TruncatedDiversity truncated_diversity(const std::vector<TokenizedCaption>& captions,
                                       const std::vector<TokenizedCaption>& references,
                                       const IdfTable& idf, int k);

}  // namespace capdiv
