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

#include <map>
#include <span>
#include <string>
#include <vector>

namespace capdiv {

/// Product-moment correlation. Throws errc::undefined_correlation when a
/// series has zero variance or fewer than 2 points.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of fractional (average) ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// Average ranks, 1-based; ties share the mean of their positions.
std::vector<double> fractional_ranks(std::span<const double> values);

/// image_id -> method_id -> score. Ordered maps keep iteration (and thus
/// floating-point accumulation) deterministic.
using ScoreTable = std::map<std::string, std::map<std::string, double>>;

struct RankCorrelation {
  double mean = 0.0;
  int images_used = 0;
  int images_skipped = 0;  // < 2 shared methods, or zero variance on a side
};

/// Mean per-image Spearman correlation between human and metric scores
/// across methods. Throws errc::undefined_correlation when no image is
/// usable.
RankCorrelation per_image_rank_correlation(const ScoreTable& human,
                                           const ScoreTable& metric);

}  // namespace capdiv
