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

#include "capdiv/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "capdiv/errors.hpp"

namespace capdiv {

void WeightedNGramVector::recompute_norms() {
  for (int order = 1; order <= kMaxNgramOrder; ++order) {
    double sum = 0.0;
    for (const auto& [gram, value] : entries[order - 1]) sum += value * value;
    norms[order - 1] = std::sqrt(sum);
  }
}

WeightedNGramVector tfidf_vector(const TokenizedCaption& caption, const IdfTable& idf) {
  WeightedNGramVector vec;
  for (int order = 1; order <= kMaxNgramOrder; ++order) {
    auto& dst = vec.entries[order - 1];
    for (const auto& [gram, count] : ngrams(caption, order).counts)
      dst.emplace(gram, count * idf.weight(order, gram));
  }
  vec.recompute_norms();
  return vec;
}

double cider_n(const WeightedNGramVector& x, const WeightedNGramVector& y, int order) {
  if (order < 1 || order > kMaxNgramOrder)
    fail(errc::invalid_order, "n-gram order must lie in 1..4, got " + std::to_string(order));

  const double nx = x.norms[order - 1];
  const double ny = y.norms[order - 1];
  if (nx == 0.0 || ny == 0.0) return 0.0;
  if (&x == &y) return 1.0;  // self-cosine, exact

  const auto& ex = x.entries[order - 1];
  const auto& ey = y.entries[order - 1];
  const auto& small = ex.size() <= ey.size() ? ex : ey;
  const auto& large = ex.size() <= ey.size() ? ey : ex;
  double dot = 0.0;
  for (const auto& [gram, value] : small) {
    auto it = large.find(gram);
    if (it != large.end()) dot += value * it->second;
  }
  return dot / (nx * ny);
}

double cider(const WeightedNGramVector& x, const WeightedNGramVector& y) {
  double sum = 0.0;
  for (int order = 1; order <= kMaxNgramOrder; ++order) sum += cider_n(x, y, order);
  return sum / kMaxNgramOrder;
}

double cider_vs_set(const TokenizedCaption& candidate,
                    const std::vector<TokenizedCaption>& references,
                    const IdfTable& idf) {
  if (references.empty())
    fail(errc::missing_references, "cider_vs_set needs at least one reference");

  const WeightedNGramVector cand = tfidf_vector(candidate, idf);
  double sum = 0.0;
  for (const auto& ref : references) sum += cider(cand, tfidf_vector(ref, idf));
  return sum / static_cast<double>(references.size());
}

namespace {

// Clipped modified n-gram precision: candidate counts capped by the maximum
// count of the gram over any single reference.
struct Precision {
  std::int64_t matched = 0;
  std::int64_t total = 0;
};

Precision clipped_precision(const TokenizedCaption& candidate,
                            const std::vector<TokenizedCaption>& references, int order) {
  Precision p;
  const NGramProfile cand = ngrams(candidate, order);
  p.total = cand.total();
  if (p.total == 0) return p;

  std::vector<NGramProfile> ref_profiles;
  ref_profiles.reserve(references.size());
  for (const auto& ref : references) ref_profiles.push_back(ngrams(ref, order));

  for (const auto& [gram, count] : cand.counts) {
    int best = 0;
    for (const auto& profile : ref_profiles) {
      auto it = profile.counts.find(gram);
      if (it != profile.counts.end()) best = std::max(best, it->second);
    }
    p.matched += std::min(count, best);
  }
  return p;
}

constexpr double kEpsilonSmoothing = 0.1;

}  // namespace

double bleu(const TokenizedCaption& candidate,
            const std::vector<TokenizedCaption>& references, int max_order,
            BleuSmoothing smoothing) {
  if (max_order < 1 || max_order > kMaxNgramOrder)
    fail(errc::invalid_order, "BLEU order must lie in 1..4, got " + std::to_string(max_order));
  if (references.empty())
    fail(errc::missing_references, "BLEU needs at least one reference");
  if (candidate.empty()) return 0.0;

  double log_precision_sum = 0.0;
  for (int order = 1; order <= max_order; ++order) {
    const Precision p = clipped_precision(candidate, references, order);
    double precision;
    if (p.matched > 0) {
      precision = static_cast<double>(p.matched) / static_cast<double>(p.total);
    } else if (smoothing == BleuSmoothing::epsilon) {
      precision = kEpsilonSmoothing / static_cast<double>(std::max<std::int64_t>(p.total, 1));
    } else {
      return 0.0;  // unsmoothed geometric mean with a zero factor
    }
    log_precision_sum += std::log(precision);
  }

  const auto cand_len = static_cast<std::int64_t>(candidate.size());
  std::int64_t closest = static_cast<std::int64_t>(references.front().size());
  for (const auto& ref : references) {
    const auto len = static_cast<std::int64_t>(ref.size());
    const auto d = std::llabs(len - cand_len);
    const auto d_best = std::llabs(closest - cand_len);
    if (d < d_best || (d == d_best && len < closest)) closest = len;
  }
  const double brevity =
      std::exp(std::min(0.0, 1.0 - static_cast<double>(closest) / static_cast<double>(cand_len)));

  return std::exp(log_precision_sum / max_order) * brevity;
}

double mbleu_n(const std::vector<TokenizedCaption>& captions, int order,
               BleuSmoothing smoothing) {
  if (captions.size() < 2)
    fail(errc::insufficient_captions, "mBLEU needs at least 2 captions, got " +
                                          std::to_string(captions.size()));

  double sum = 0.0;
  std::vector<TokenizedCaption> rest;
  rest.reserve(captions.size() - 1);
  for (std::size_t i = 0; i < captions.size(); ++i) {
    rest.clear();
    for (std::size_t j = 0; j < captions.size(); ++j)
      if (j != i) rest.push_back(captions[j]);
    sum += bleu(captions[i], rest, order, smoothing);
  }
  return sum / static_cast<double>(captions.size());
}

double mbleu_mix_diversity(const std::vector<TokenizedCaption>& captions,
                           BleuSmoothing smoothing) {
  double sum = 0.0;
  for (int order = 1; order <= kMaxNgramOrder; ++order)
    sum += mbleu_n(captions, order, smoothing);
  return 1.0 - sum / kMaxNgramOrder;
}

}  // namespace capdiv
