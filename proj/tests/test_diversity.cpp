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

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <doctest.h>

#include "capdiv/errors.hpp"
#include "capdiv/kernel.hpp"
#include "capdiv/spectrum.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace capdiv;
using testutil::cap;
using testutil::caps;

namespace {

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a capdiv::Error");
  return errc::invalid_config;
}

// Built before the implementation: bow kernel of {"a b", "a"} is
// [[2, 1], [1, 1]] with eigenvalues (3 +- sqrt(5)) / 2, which makes the
// singular values the golden ratio and its inverse.
constexpr double kGoldenTwoCaptionDiv = 0.46672213381306393;

// Shared intro example: idf over the union of both sets, one document per
// caption (6 documents).
const std::vector<TokenizedCaption>& zebra_varied() {
  static const auto set = caps({"zebras grazing grass", "grazing grass", "zebras grazing"});
  return set;
}
const std::vector<TokenizedCaption>& zebra_repeated() {
  static const auto set = caps({"zebras grazing", "zebras grazing", "zebras grazing"});
  return set;
}
IdfTable zebra_idf() {
  std::vector<std::vector<TokenizedCaption>> documents;
  for (const auto& c : zebra_varied()) documents.push_back({c});
  for (const auto& c : zebra_repeated()) documents.push_back({c});
  return IdfTable::build(documents);
}
constexpr double kZebraSelfCiderDiv = 0.6181805602212005;

KernelMatrix random_symmetric(std::mt19937& rng, std::size_t m, double scale) {
  std::uniform_real_distribution<double> value(-scale, scale);
  KernelMatrix k(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) k.set(i, j, value(rng));
  return k;
}

}  // namespace

TEST_CASE("bow_kernel builds word-count dot products") {
  const auto k1 = bow_kernel(caps({"a b", "a b"}));
  CHECK(k1(0, 0) == 2.0);
  CHECK(k1(0, 1) == 2.0);
  CHECK(k1(1, 1) == 2.0);

  const auto k2 = bow_kernel(caps({"a", "b"}));
  CHECK(k2(0, 0) == 1.0);
  CHECK(k2(0, 1) == 0.0);
  CHECK(k2(1, 1) == 1.0);

  const auto k3 = bow_kernel(caps({"a b", "a"}));
  CHECK(k3(0, 0) == 2.0);
  CHECK(k3(0, 1) == 1.0);
  CHECK(k3(1, 1) == 1.0);

  CHECK(code_of([] { bow_kernel(caps({"a b"})); }) == errc::insufficient_captions);
  CHECK(code_of([] { bow_kernel(caps({"a b", "...", "c"})); }) == errc::degenerate_caption);
  try {
    bow_kernel(caps({"a b", "...", "c"}));
  } catch (const Error& e) {
    CHECK(doctest::String(e.what()) == doctest::Contains("caption 1"));
  }
}

TEST_CASE("cider_kernel entries and symmetry") {
  const auto identical = caps({"a b c d", "a b c d", "a b c d"});
  auto idf_set = identical;
  idf_set.push_back(tokenize("p q r s"));
  const auto idf = testutil::per_caption_idf(idf_set);
  const auto k = cider_kernel(identical, idf);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(k(i, j) == doctest::Approx(1.0));

  const auto disjoint = caps({"a b c d", "p q r s", "x y z w"});
  const auto k2 = cider_kernel(disjoint, testutil::per_caption_idf(disjoint));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(k2(i, j) == (i == j ? 1.0 : 0.0));

  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto set = testutil::random_caption_set(rng, 6, 8, 1, 8);
    const auto k3 = cider_kernel(set, testutil::per_caption_idf(set));
    CHECK(k3.max_asymmetry() == 0.0);  // bit-exact by construction
  }

  CHECK(code_of([&] { cider_kernel({tokenize("a")}, idf); }) == errc::insufficient_captions);
}

TEST_CASE("symmetric_eigensystem matches closed forms") {
  const auto identity = KernelMatrix::from_rows({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(symmetric_eigenvalues(identity) == std::vector<double>{1.0, 1.0});

  const auto k = KernelMatrix::from_rows({{2.0, 1.0}, {1.0, 1.0}});
  const auto values = symmetric_eigenvalues(k);
  CHECK(values[0] == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(values[1] == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));

  // rank-1 all-ones matrix
  for (std::size_t m : {2u, 5u, 10u}) {
    KernelMatrix ones(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) ones.set(i, j, 1.0);
    const auto eig = symmetric_eigenvalues(ones);
    CHECK(eig[0] == doctest::Approx(static_cast<double>(m)).epsilon(1e-12));
    for (std::size_t i = 1; i < m; ++i) CHECK(std::fabs(eig[i]) <= 1e-10);
  }

  const auto crooked = KernelMatrix::from_rows({{1.0, 0.5}, {0.5 + 1e-9, 1.0}});
  CHECK(code_of([&] { symmetric_eigenvalues(crooked); }) == errc::asymmetric_matrix);
}

TEST_CASE("jacobi agrees with characteristic polynomial roots") {
  std::mt19937 rng(29);
  int accepted = 0;
  while (accepted < 200) {
    const std::size_t m = 2 + accepted % 2;  // alternate 2x2 / 3x3
    const auto k = random_symmetric(rng, m, 1.0);
    std::vector<std::vector<double>> rows(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) rows[i][j] = k(i, j);
    const auto expected =
        m == 2 ? oracle::eig2x2(rows[0][0], rows[0][1], rows[1][1]) : oracle::eig3x3(rows);
    // skip near-zero eigenvalues: the library clamps |lambda| < 1e-8 drift
    if (std::any_of(expected.begin(), expected.end(),
                    [](double v) { return std::fabs(v) < 1e-6; }))
      continue;
    ++accepted;
    const auto actual = symmetric_eigenvalues(k);
    REQUIRE(actual.size() == expected.size());
    for (std::size_t i = 0; i < m; ++i)
      CHECK(actual[i] == doctest::Approx(expected[i]).epsilon(1e-9));
  }
}

TEST_CASE("eigenvalue sum preserves the trace") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto set = testutil::random_caption_set(rng, 2 + trial % 7, 10, 1, 8);
    const auto k = bow_kernel(set);
    const auto values = symmetric_eigenvalues(k);
    double sum = 0.0;
    for (double v : values) sum += v;
    CHECK(sum == doctest::Approx(k.trace()).epsilon(1e-9));
  }
}

TEST_CASE("spectrum_to_div maps eigenvalues to [0, 1]") {
  // one caption repeated m times: rank 1
  const auto flat = spectrum_to_div({5.0, 0.0, 0.0, 0.0, 0.0}, SpectrumSource::kernel);
  CHECK(flat.ratio == 1.0);
  CHECK(flat.div == 0.0);

  // equal eigenvalues: maximal diversity
  const auto full = spectrum_to_div({2.0, 2.0, 2.0, 2.0}, SpectrumSource::kernel);
  CHECK(full.ratio == doctest::Approx(0.25));
  CHECK(full.div == doctest::Approx(1.0));

  // golden 2x2 case
  const double l1 = (3.0 + std::sqrt(5.0)) / 2.0;
  const double l2 = (3.0 - std::sqrt(5.0)) / 2.0;
  const auto golden = spectrum_to_div({l1, l2}, SpectrumSource::bow_gram);
  CHECK(golden.ratio == doctest::Approx(0.7236067977499789).epsilon(1e-12));
  CHECK(golden.div == doctest::Approx(kGoldenTwoCaptionDiv).epsilon(1e-6));
  CHECK(golden.singular_values[0] == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));

  CHECK(code_of([] { spectrum_to_div({0.0, 0.0}, SpectrumSource::kernel); }) ==
        errc::degenerate_spectrum);
  CHECK(code_of([] { spectrum_to_div({1.0}, SpectrumSource::kernel); }) ==
        errc::insufficient_captions);
}

TEST_CASE("lsa_diversity end to end") {
  CHECK(lsa_diversity(caps({"a b", "a b"})).div == 0.0);
  CHECK(lsa_diversity(caps({"a", "b"})).div == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lsa_diversity(caps({"a b", "a"})).div ==
        doctest::Approx(kGoldenTwoCaptionDiv).epsilon(1e-9));
}

TEST_CASE("self_cider_diversity separates the intro caption sets") {
  const auto idf = zebra_idf();

  const auto repeated = self_cider_diversity(zebra_repeated(), idf);
  CHECK(repeated.div == 0.0);

  const auto varied = self_cider_diversity(zebra_varied(), idf);
  CHECK(varied.div > 0.2);
  CHECK(varied.div == doctest::Approx(kZebraSelfCiderDiv).epsilon(1e-9));
  CHECK(varied.div > repeated.div);

  // identical sets of >= 4 tokens / pairwise-disjoint sets
  const auto identical = caps({"a b c d", "a b c d"});
  auto idf_docs = identical;
  idf_docs.push_back(tokenize("p q r s"));
  CHECK(self_cider_diversity(identical, testutil::per_caption_idf(idf_docs)).div == 0.0);

  const auto disjoint = caps({"a b c d", "p q r s"});
  CHECK(self_cider_diversity(disjoint, testutil::per_caption_idf(disjoint)).div ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diversity is invariant under caption permutation") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    auto set = testutil::random_caption_set(rng, 2 + trial % 6, 9, 1, 8);
    const auto idf = testutil::per_caption_idf(set);
    const double lsa_base = lsa_diversity(set).div;
    const double cider_base = self_cider_diversity(set, idf).div;
    CHECK(lsa_base >= 0.0);
    CHECK(lsa_base <= 1.0);
    std::shuffle(set.begin(), set.end(), rng);
    CHECK(lsa_diversity(set).div == doctest::Approx(lsa_base).epsilon(1e-9));
    CHECK(self_cider_diversity(set, idf).div == doctest::Approx(cider_base).epsilon(1e-9));
  }
}

TEST_CASE("div is zero exactly when the kernel has rank 1") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto set = testutil::random_caption_set(rng, 2 + trial % 5, 8, 1, 6);
    const auto k = bow_kernel(set);
    const auto values = symmetric_eigenvalues(k);
    const auto summary = spectrum_to_div(values, SpectrumSource::bow_gram);
    const bool rank1 = values[1] <= 1e-8 * std::max(1.0, values[0]);
    if (rank1) {
      CHECK(summary.div == doctest::Approx(0.0).epsilon(1e-8));
    } else {
      CHECK(summary.div > 0.0);
    }
  }
}

TEST_CASE("bow kernel spectrum equals word-caption matrix singular values") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 7;  // up to 8 captions
    const auto set = testutil::random_caption_set(rng, m, 20, 1, 10);
    const auto lib_eigenvalues = symmetric_eigenvalues(bow_kernel(set));
    const auto oracle_sigma = oracle::singular_values_via_mmt(set, lib_eigenvalues.size());
    for (std::size_t i = 0; i < lib_eigenvalues.size(); ++i) {
      const double lib_sigma =
          lib_eigenvalues[i] > 0.0 ? std::sqrt(lib_eigenvalues[i]) : 0.0;
      CHECK(lib_sigma == doctest::Approx(oracle_sigma[i]).epsilon(1e-8));
    }
    CHECK(lsa_diversity(set).div ==
          doctest::Approx(oracle::div_from_sigma(oracle_sigma)).epsilon(1e-8));
  }
}

TEST_CASE("truncated_diversity ranks by accuracy and keeps determinism") {
  const auto refs = caps({"a b c d"});
  const auto set = caps({"a b c d", "p q r s", "a b c e", "x y z w"});
  std::vector<std::vector<TokenizedCaption>> docs;
  for (const auto& c : set) docs.push_back({c});
  docs.push_back({tokenize("a b c d")});
  const auto idf = IdfTable::build(docs);

  SUBCASE("k equals m reproduces the full-set diversity bit for bit") {
    const auto truncated = truncated_diversity(set, refs, idf, 4);
    CHECK(truncated.lsa.div == lsa_diversity(set).div);
    CHECK(truncated.self_cider.div == self_cider_diversity(set, idf).div);
    CHECK(truncated.selected.front() == 0);  // exact match ranks first
  }

  SUBCASE("k = 2 keeps the two most accurate captions") {
    const auto truncated = truncated_diversity(set, refs, idf, 2);
    // "a b c d" (exact) and "a b c e" (3 shared tokens) outrank the others
    CHECK(truncated.selected == std::vector<std::size_t>{0, 2});
  }

  SUBCASE("identical captions truncate to zero diversity") {
    const auto same = caps({"a b c d", "a b c d", "a b c d"});
    const auto truncated = truncated_diversity(same, refs, idf, 2);
    CHECK(truncated.lsa.div == 0.0);
    CHECK(truncated.self_cider.div == 0.0);
  }

  SUBCASE("two disjoint captions truncate to full diversity") {
    const auto pair = caps({"a", "b"});
    const auto truncated = truncated_diversity(pair, refs, idf, 2);
    CHECK(truncated.lsa.div == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("ties keep the lower original index") {
    const auto tied = caps({"p q r s", "x y z w", "a b c d"});
    const auto truncated = truncated_diversity(tied, refs, idf, 2);
    // captions 0 and 1 both score 0; caption 2 scores 1 and leads
    CHECK(truncated.selected == std::vector<std::size_t>{2, 0});
  }

  CHECK(code_of([&] { truncated_diversity(set, refs, idf, 1); }) == errc::invalid_k);
  CHECK(code_of([&] { truncated_diversity(set, refs, idf, 5); }) == errc::invalid_k);
}
