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

#include "capdiv/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "capdiv/errors.hpp"

namespace capdiv {

KernelMatrix::KernelMatrix(std::size_t size) : m_(size), a_(size * size, 0.0) {}

KernelMatrix KernelMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  KernelMatrix k(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size())
      fail(errc::asymmetric_matrix, "matrix is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) k.a_[i * k.m_ + j] = rows[i][j];
  }
  return k;
}

void KernelMatrix::set(std::size_t i, std::size_t j, double value) {
  a_[i * m_ + j] = value;
  a_[j * m_ + i] = value;
}

double KernelMatrix::trace() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < m_; ++i) sum += a_[i * m_ + i];
  return sum;
}

double KernelMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (double v : a_) sum += v * v;
  return std::sqrt(sum);
}

double KernelMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = i + 1; j < m_; ++j)
      worst = std::max(worst, std::fabs(a_[i * m_ + j] - a_[j * m_ + i]));
  return worst;
}

KernelMatrix bow_kernel(const std::vector<TokenizedCaption>& captions) {
  const std::size_t m = captions.size();
  if (m < 2)
    fail(errc::insufficient_captions,
         "diversity kernel needs at least 2 captions, got " + std::to_string(m));

  std::vector<NGramProfile> bows;
  bows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (captions[i].empty())
      fail(errc::degenerate_caption,
           "caption " + std::to_string(i) + " tokenizes to nothing");
    bows.push_back(ngrams(captions[i], 1));
  }

  KernelMatrix k(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const auto& small = bows[i].counts.size() <= bows[j].counts.size() ? bows[i] : bows[j];
      const auto& large = bows[i].counts.size() <= bows[j].counts.size() ? bows[j] : bows[i];
      double dot = 0.0;
      for (const auto& [word, count] : small.counts) {
        auto it = large.counts.find(word);
        if (it != large.counts.end()) dot += static_cast<double>(count) * it->second;
      }
      k.set(i, j, dot);
    }
  }
  return k;
}

KernelMatrix cider_kernel(const std::vector<TokenizedCaption>& captions,
                          const IdfTable& idf) {
  const std::size_t m = captions.size();
  if (m < 2)
    fail(errc::insufficient_captions,
         "diversity kernel needs at least 2 captions, got " + std::to_string(m));

  std::vector<WeightedNGramVector> vectors;
  vectors.reserve(m);
  for (const auto& caption : captions) vectors.push_back(tfidf_vector(caption, idf));

  KernelMatrix k(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) k.set(i, j, cider(vectors[i], vectors[j]));
  return k;
}

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr double kEigenvalueClamp = 1e-8;   // PSD drift, negative side
constexpr double kRankFloor = 1e-11;        // solver resolution, positive side
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const std::vector<double>& a, std::size_t m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) sum += 2.0 * a[i * m + j] * a[i * m + j];
  return std::sqrt(sum);
}

}  // namespace

EigenSystem symmetric_eigensystem(const KernelMatrix& K) {
  if (K.max_asymmetry() > kSymmetryTolerance)
    fail(errc::asymmetric_matrix, "eigensolver input violates symmetry beyond 1e-12");

  const std::size_t m = K.size();
  std::vector<double> a(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i * m + j] = K(i, j);

  std::vector<double> v(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) v[i * m + i] = 1.0;

  const double target = kOffDiagonalTolerance * K.frobenius_norm();
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a, m) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double apq = a[p * m + q];
        if (apq == 0.0) continue;

        const double theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
        double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[p * m + p] -= t * apq;
        a[q * m + q] += t * apq;
        a[p * m + q] = a[q * m + p] = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * m + p];
          const double arq = a[r * m + q];
          a[r * m + p] = a[p * m + r] = arp - s * (arq + tau * arp);
          a[r * m + q] = a[q * m + r] = arq + s * (arp - tau * arq);
        }
        for (std::size_t r = 0; r < m; ++r) {
          const double vrp = v[r * m + p];
          const double vrq = v[r * m + q];
          v[r * m + p] = vrp - s * (vrq + tau * vrp);
          v[r * m + q] = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t lhs, std::size_t rhs) {
                     return a[lhs * m + lhs] > a[rhs * m + rhs];
                   });

  EigenSystem result;
  result.values.resize(m);
  result.vectors.assign(m, std::vector<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    result.values[k] = a[order[k] * m + order[k]];
    for (std::size_t r = 0; r < m; ++r) result.vectors[k][r] = v[r * m + order[k]];
  }

  // Zero out numerical drift around 0. Negatives inside the PSD tolerance
  // are clamped; positives below the solver's resolution are floored so a
  // rank-deficient kernel reports exact zeros instead of sqrt-amplified
  // noise. Genuinely negative eigenvalues of general symmetric input pass
  // through unchanged.
  const double scale_ref =
      std::max(1.0, result.values.empty() ? 1.0 : result.values.front());
  const double negative_clamp = kEigenvalueClamp * scale_ref;
  const double positive_floor = kRankFloor * scale_ref;
  for (double& value : result.values) {
    if (value < 0.0 && value >= -negative_clamp) {
      value = 0.0;
    } else if (value > 0.0 && value <= positive_floor) {
      value = 0.0;
    }
  }

  return result;
}

std::vector<double> symmetric_eigenvalues(const KernelMatrix& K) {
  return symmetric_eigensystem(K).values;
}

}  // namespace capdiv
