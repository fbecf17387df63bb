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

#include "capdiv/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "capdiv/errors.hpp"
#include "capdiv/similarity.hpp"

namespace capdiv {

SpectralSummary spectrum_to_div(const std::vector<double>& eigenvalues,
                                SpectrumSource source) {
  const std::size_t m = eigenvalues.size();
  if (m < 2)
    fail(errc::insufficient_captions,
         "diversity needs at least 2 captions, got " + std::to_string(m));

  SpectralSummary summary;
  summary.source = source;
  summary.singular_values.reserve(m);
  double sum = 0.0;
  for (double lambda : eigenvalues) {
    const double sigma = lambda > 0.0 ? std::sqrt(lambda) : 0.0;  // drift guard
    summary.singular_values.push_back(sigma);
    sum += sigma;
  }
  if (sum == 0.0)
    fail(errc::degenerate_spectrum, "all eigenvalues are zero");

  summary.ratio = summary.singular_values.front() / sum;
  const double div = -std::log(summary.ratio) / std::log(static_cast<double>(m));
  summary.div = std::clamp(div, 0.0, 1.0);
  if (summary.div == 0.0) summary.div = 0.0;  // normalize -0.0
  return summary;
}

SpectralSummary lsa_diversity(const std::vector<TokenizedCaption>& captions) {
  return spectrum_to_div(symmetric_eigenvalues(bow_kernel(captions)),
                         SpectrumSource::bow_gram);
}

SpectralSummary self_cider_diversity(const std::vector<TokenizedCaption>& captions,
                                     const IdfTable& idf) {
  return spectrum_to_div(symmetric_eigenvalues(cider_kernel(captions, idf)),
                         SpectrumSource::kernel);
}

TruncatedDiversity truncated_diversity(const std::vector<TokenizedCaption>& captions,
                                       const std::vector<TokenizedCaption>& references,
                                       const IdfTable& idf, int k) {
  const std::size_t m = captions.size();
  if (k < 2 || static_cast<std::size_t>(k) > m)
    fail(errc::invalid_k,
         "truncation size must lie in 2..m, got k=" + std::to_string(k) +
             " with m=" + std::to_string(m));

  std::vector<double> scores;
  scores.reserve(m);
  for (const auto& caption : captions)
    scores.push_back(cider_vs_set(caption, references, idf));

  TruncatedDiversity result;
  result.k = k;
  result.selected.resize(m);
  std::iota(result.selected.begin(), result.selected.end(), 0);
  // Ties keep the lower original index (stable sort on a strict score order).
  std::stable_sort(result.selected.begin(), result.selected.end(),
                   [&](std::size_t lhs, std::size_t rhs) {
                     return scores[lhs] > scores[rhs];
                   });
  result.selected.resize(static_cast<std::size_t>(k));

  // The subset keeps original relative order so k == m matches the full-set
  // diversity bit for bit.
  std::vector<std::size_t> subset_indices = result.selected;
  std::sort(subset_indices.begin(), subset_indices.end());
  std::vector<TokenizedCaption> subset;
  subset.reserve(subset_indices.size());
  for (std::size_t index : subset_indices) subset.push_back(captions[index]);

  result.lsa = lsa_diversity(subset);
  result.self_cider = self_cider_diversity(subset, idf);
  return result;
}

}  // namespace capdiv
