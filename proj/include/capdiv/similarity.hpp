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
#include <string>
#include <unordered_map>
#include <vector>

#include "capdiv/idf.hpp"
#include "capdiv/text.hpp"

namespace capdiv {

/// TF-IDF weighted n-gram vector of one caption: one sparse map per order
/// with cached Euclidean norms. Entries with zero raw frequency are absent.
struct WeightedNGramVector {
  std::array<std::unordered_map<std::string, double>, kMaxNgramOrder> entries;
  std::array<double, kMaxNgramOrder> norms{};

  void recompute_norms();
};

WeightedNGramVector tfidf_vector(const TokenizedCaption& caption, const IdfTable& idf);

/// Cosine similarity over order-n entries, in [0, 1]. Returns 0 whenever
/// either order-n norm is 0, including the x == y case; the kernel diagonal
/// may therefore sit below 1 for captions shorter than 4 tokens.
double cider_n(const WeightedNGramVector& x, const WeightedNGramVector& y, int order);

/// Mean of cider_n over orders 1..4. Symmetric, in [0, 1].
double cider(const WeightedNGramVector& x, const WeightedNGramVector& y);

/// Mean CIDEr of the candidate against each reference, in [0, 1].
/// Throws errc::missing_references on an empty reference list.
double cider_vs_set(const TokenizedCaption& candidate,
                    const std::vector<TokenizedCaption>& references,
                    const IdfTable& idf);

enum class BleuSmoothing { none, epsilon };

/// Cumulative BLEU with uniform weights over orders 1..max_order: geometric
/// mean of clipped modified n-gram precisions times the brevity penalty
/// exp(min(0, 1 - r/c)) with r the closest reference length (ties go to the
/// shorter reference). Without smoothing any zero precision zeroes the
/// score; orders longer than the candidate count as zero precision. With
/// BleuSmoothing::epsilon a zero numerator is replaced by 0.1.
/// An empty candidate scores 0.
double bleu(const TokenizedCaption& candidate,
            const std::vector<TokenizedCaption>& references, int max_order,
            BleuSmoothing smoothing = BleuSmoothing::none);

/// Mean BLEU-n of each caption against the remaining captions of the set.
double mbleu_n(const std::vector<TokenizedCaption>& captions, int order,
               BleuSmoothing smoothing = BleuSmoothing::none);

/// 1 - (1/4) * sum of mbleu_n over orders 1..4; higher means more diverse.
double mbleu_mix_diversity(const std::vector<TokenizedCaption>& captions,
                           BleuSmoothing smoothing = BleuSmoothing::none);

}  // namespace capdiv
