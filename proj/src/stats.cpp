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

#include "capdiv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "capdiv/errors.hpp"

namespace capdiv {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    fail(errc::undefined_correlation, "series lengths differ");
  const std::size_t n = x.size();
  if (n < 2)
    fail(errc::undefined_correlation, "correlation needs at least 2 points");

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    fail(errc::undefined_correlation, "zero variance in a correlation input");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t lhs, std::size_t rhs) { return values[lhs] < values[rhs]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    fail(errc::undefined_correlation, "series lengths differ");
  const std::vector<double> rx = fractional_ranks(x);
  const std::vector<double> ry = fractional_ranks(y);
  return pearson(rx, ry);
}

RankCorrelation per_image_rank_correlation(const ScoreTable& human,
                                           const ScoreTable& metric) {
  RankCorrelation result;
  double sum = 0.0;
  for (const auto& [image_id, human_scores] : human) {
    auto metric_it = metric.find(image_id);
    if (metric_it == metric.end()) {
      ++result.images_skipped;
      continue;
    }
    std::vector<double> hs, ms;
    for (const auto& [method_id, score] : human_scores) {
      auto found = metric_it->second.find(method_id);
      if (found != metric_it->second.end()) {
        hs.push_back(score);
        ms.push_back(found->second);
      }
    }
    if (hs.size() < 2) {
      ++result.images_skipped;
      continue;
    }
    try {
      sum += spearman(hs, ms);
      ++result.images_used;
    } catch (const Error&) {
      ++result.images_skipped;  // zero variance on one side
    }
  }
  if (result.images_used == 0)
    fail(errc::undefined_correlation, "no image had two comparable methods");
  result.mean = sum / result.images_used;
  return result;
}

}  // namespace capdiv
