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
#include "capdiv/similarity.hpp"
#include "capdiv/text.hpp"

namespace capdiv {

/// Dense symmetric matrix of pairwise caption similarities. set() mirrors
/// both triangles, so matrices built through it are symmetric bit-exactly.
/// from_rows() keeps the given values untouched; the eigensolver checks the
/// symmetry contract on input.
class KernelMatrix {
 public:
  explicit KernelMatrix(std::size_t size);

  static KernelMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * m_ + j]; }
  void set(std::size_t i, std::size_t j, double value);

  double trace() const;
  double frobenius_norm() const;
  double max_asymmetry() const;

 private:
  std::size_t m_ = 0;
  std::vector<double> a_;  // row-major m x m
};

/// Dot products of word-frequency vectors over the union vocabulary.
/// Throws errc::insufficient_captions for m < 2 and errc::degenerate_caption
/// (with the offending index) when a caption tokenizes to nothing, because a
/// silent drop would change m and hence the diversity log base.
KernelMatrix bow_kernel(const std::vector<TokenizedCaption>& captions);

/// Pairwise CIDEr similarities; each unordered pair computed once and
/// mirrored. The diagonal equals cider(c_i, c_i), which is below 1 when some
/// n-gram order of the caption is degenerate.
KernelMatrix cider_kernel(const std::vector<TokenizedCaption>& captions,
                          const IdfTable& idf);

struct EigenSystem {
  std::vector<double> values;                  // descending
  std::vector<std::vector<double>> vectors;    // vectors[k] pairs values[k], unit norm
};

/// Cyclic Jacobi rotations on the dense symmetric matrix, sweeping until the
/// off-diagonal Frobenius norm falls below 1e-12 * ||K||_F or 100 sweeps.
/// Eigenvalues in [-1e-8, 1e-11] * max(1, lambda_max) are zeroed (PSD drift
/// below, solver resolution above); genuinely negative eigenvalues of general
/// symmetric input pass through unchanged.
/// Throws errc::asymmetric_matrix when any |k_ij - k_ji| exceeds 1e-12.
EigenSystem symmetric_eigensystem(const KernelMatrix& K);

std::vector<double> symmetric_eigenvalues(const KernelMatrix& K);

}  // namespace capdiv
