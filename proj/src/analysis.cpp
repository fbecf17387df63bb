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

#include "capdiv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "capdiv/errors.hpp"

namespace capdiv {

const std::vector<std::string>& english_stop_words() {
  // Standard English stop-word list, pre-tokenized (contractions appear as
  // their token pieces), sorted.
  static const std::vector<std::string> words = {
      "a", "about", "above", "after", "again", "against", "ain", "all", "am", "an",
      "and", "any", "are", "aren", "as", "at", "be", "because", "been", "before",
      "being", "below", "between", "both", "but", "by", "can", "couldn", "d", "did",
      "didn", "do", "does", "doesn", "doing", "don", "down", "during", "each", "few",
      "for", "from", "further", "had", "hadn", "has", "hasn", "have", "haven", "having",
      "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "i",
      "if", "in", "into", "is", "isn", "it", "its", "itself", "just", "ll",
      "m", "ma", "me", "mightn", "more", "most", "mustn", "my", "myself", "needn",
      "no", "nor", "not", "now", "o", "of", "off", "on", "once", "only",
      "or", "other", "our", "ours", "ourselves", "out", "over", "own", "re", "s",
      "same", "shan", "she", "should", "shouldn", "so", "some", "such", "t", "than",
      "that", "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they",
      "this", "those", "through", "to", "too", "under", "until", "up", "ve", "very",
      "was", "wasn", "we", "were", "weren", "what", "when", "where", "which", "while",
      "who", "whom", "why", "will", "with", "won", "wouldn", "y", "you", "your",
      "yours", "yourself", "yourselves"};
  return words;
}

namespace {

std::vector<TokenizedCaption> strip_stop_words(const std::vector<TokenizedCaption>& captions) {
  const auto& list = english_stop_words();
  const std::unordered_set<std::string> stop(list.begin(), list.end());
  std::vector<TokenizedCaption> out;
  out.reserve(captions.size());
  for (const auto& caption : captions) {
    TokenizedCaption filtered;
    for (const auto& token : caption.tokens)
      if (!stop.contains(token)) filtered.tokens.push_back(token);
    out.push_back(std::move(filtered));
  }
  return out;
}

// Radar charts need stable output; eigenvector signs are arbitrary, so the
// largest-magnitude entry of each component is forced positive.
void fix_sign(std::vector<double>& vec) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < vec.size(); ++i)
    if (std::fabs(vec[i]) > std::fabs(vec[arg])) arg = i;
  if (!vec.empty() && vec[arg] < 0.0)
    for (double& v : vec) v = -v;
}

}  // namespace

SemanticProjection semantic_projection(const std::vector<TokenizedCaption>& captions,
                                       ProjectionKernel kernel, const IdfTable& idf,
                                       bool remove_stop_words) {
  KernelMatrix k = kernel == ProjectionKernel::bow
                       ? bow_kernel(remove_stop_words ? strip_stop_words(captions) : captions)
                       : cider_kernel(captions, idf);
  const EigenSystem eigen = symmetric_eigensystem(k);

  SemanticProjection projection;
  projection.kernel = kernel;
  projection.stop_words_removed = kernel == ProjectionKernel::bow && remove_stop_words;
  projection.loadings.assign(captions.size(), {});
  const std::size_t m = captions.size();
  for (int component = 0; component < SemanticProjection::kComponents; ++component) {
    if (static_cast<std::size_t>(component) >= m) break;  // zero padding stays
    std::vector<double> vec = eigen.vectors[component];
    fix_sign(vec);
    const double lambda = eigen.values[component];
    projection.singular_values[component] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    for (std::size_t j = 0; j < m; ++j) projection.loadings[j][component] = vec[j];
  }
  return projection;
}

MdsEmbedding classical_mds(const KernelMatrix& kernel) {
  const std::size_t m = kernel.size();
  if (m < 2)
    fail(errc::insufficient_captions,
         "MDS needs at least 2 captions, got " + std::to_string(m));

  // Squared distances from the kernel. Values within floating-point drift of
  // zero (either sign) snap to 0 so identical captions land exactly on each
  // other instead of sqrt(ulp) apart.
  std::vector<double> d2(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double value = kernel(i, i) + kernel(j, j) - 2.0 * kernel(i, j);
      const double scale = std::max(1.0, kernel(i, i) + kernel(j, j));
      if (std::fabs(value) < 1e-12 * scale) value = 0.0;
      d2[i * m + j] = d2[j * m + i] = std::max(0.0, value);
    }
  }

  // Double centering: b_ij = -1/2 (d2_ij - row_i - row_j + grand).
  std::vector<double> row_mean(m, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) row_mean[i] += d2[i * m + j];
    row_mean[i] /= static_cast<double>(m);
    grand += row_mean[i];
  }
  grand /= static_cast<double>(m);

  KernelMatrix b(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      b.set(i, j, -0.5 * (d2[i * m + j] - row_mean[i] - row_mean[j] + grand));

  const EigenSystem eigen = symmetric_eigensystem(b);

  MdsEmbedding embedding;
  embedding.points.assign(m, {0.0, 0.0});
  for (int axis = 0; axis < 2 && static_cast<std::size_t>(axis) < m; ++axis) {
    const double lambda = eigen.values[axis];
    if (lambda <= 0.0) continue;
    const double scale = std::sqrt(lambda);
    for (std::size_t i = 0; i < m; ++i)
      embedding.points[i][axis] = scale * eigen.vectors[axis][i];
  }

  double residual = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double dx = embedding.points[i][0] - embedding.points[j][0];
      const double dy = embedding.points[i][1] - embedding.points[j][1];
      const double diff = std::sqrt(dx * dx + dy * dy) - std::sqrt(d2[i * m + j]);
      residual += diff * diff;
    }
  }
  embedding.stress = std::sqrt(residual);
  return embedding;
}

std::vector<VocabRow> vocab_report(
    const std::vector<std::pair<std::string, std::vector<TokenizedCaption>>>& groups,
    std::size_t top_k) {
  std::vector<VocabRow> rows;
  for (const auto& [source, captions] : groups) {
    const Vocabulary vocab = build_vocabulary(captions);
    std::vector<std::pair<std::string, std::uint64_t>> sorted(vocab.frequency.begin(),
                                                              vocab.frequency.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& lhs, const auto& rhs) {
      if (lhs.second != rhs.second) return lhs.second > rhs.second;
      return lhs.first < rhs.first;
    });
    if (sorted.size() > top_k) sorted.resize(top_k);

    int rank = 1;
    for (const auto& [word, frequency] : sorted) {
      VocabRow row;
      row.source = source;
      row.vocab_size = vocab.size();
      row.rank = rank++;
      row.word = word;
      row.frequency = frequency;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace capdiv
