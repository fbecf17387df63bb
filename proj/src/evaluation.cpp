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

#include "capdiv/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <string>
#include <thread>
#include <utility>

#include "capdiv/errors.hpp"
#include "capdiv/spectrum.hpp"

namespace capdiv {

double accuracy(const std::vector<TokenizedCaption>& candidates,
                const std::vector<TokenizedCaption>& references,
                const IdfTable& idf) {
  if (candidates.empty()) fail(errc::missing_data, "no candidate captions");
  if (references.empty()) fail(errc::missing_data, "no reference captions");

  double sum = 0.0;
  for (const auto& candidate : candidates) sum += cider_vs_set(candidate, references, idf);
  return sum / static_cast<double>(candidates.size());
}

double leave_one_out_accuracy(const std::vector<TokenizedCaption>& references,
                              const IdfTable& idf) {
  if (references.size() < 2)
    fail(errc::insufficient_references,
         "leave-one-out needs at least 2 references, got " + std::to_string(references.size()));

  double sum = 0.0;
  std::vector<TokenizedCaption> rest;
  rest.reserve(references.size() - 1);
  for (std::size_t i = 0; i < references.size(); ++i) {
    rest.clear();
    for (std::size_t j = 0; j < references.size(); ++j)
      if (j != i) rest.push_back(references[j]);
    sum += cider_vs_set(references[i], rest, idf);
  }
  return sum / static_cast<double>(references.size());
}

double f_score(double div, double acc, double beta2) {
  if (div < 0.0 || div > 1.0 || acc < 0.0 || beta2 < 0.0)
    fail(errc::invalid_config, "f_score inputs out of range");
  if (div * acc == 0.0) return 0.0;
  return (1.0 + beta2) * div * acc / (beta2 * div + acc);
}

namespace {

constexpr double kX10 = 10.0;

bool wants_diversity(const EvalOptions& options) { return !options.metrics.empty(); }

}  // namespace

EvaluationRecord evaluate_image(const ImageEntry& entry, const IdfTable& idf,
                                const EvalOptions& options) {
  try {
    const std::vector<TokenizedCaption> candidates = tokenize_all(entry.candidates);
    const std::vector<TokenizedCaption> references = tokenize_all(entry.references);
    if (wants_diversity(options) && candidates.size() < 2)
      fail(errc::insufficient_captions,
           "diversity needs at least 2 candidates, got " + std::to_string(candidates.size()));

    EvaluationRecord record;
    record.image_id = entry.image_id;

    if (candidates.empty()) fail(errc::missing_data, "no candidate captions");
    if (references.empty()) fail(errc::missing_data, "no reference captions");
    const double scale = options.acc_scale == AccuracyScale::x10 ? kX10 : 1.0;
    record.per_caption_acc.reserve(candidates.size());
    double acc_sum = 0.0;
    for (const auto& candidate : candidates) {
      const double a = scale * cider_vs_set(candidate, references, idf);
      record.per_caption_acc.push_back(a);
      acc_sum += a;
    }
    record.acc = acc_sum / static_cast<double>(candidates.size());

    if (options.metrics.contains(Metric::lsa))
      record.div_lsa = lsa_diversity(candidates).div;
    if (options.metrics.contains(Metric::self_cider))
      record.div_self_cider = self_cider_diversity(candidates, idf).div;
    if (options.metrics.contains(Metric::mbleu))
      record.div_mbleu_mix = mbleu_mix_diversity(candidates, options.bleu_smoothing);
    if (record.div_self_cider)
      record.f_score = f_score(*record.div_self_cider, record.acc, options.beta2);

    const bool spectral = options.metrics.contains(Metric::lsa) ||
                          options.metrics.contains(Metric::self_cider);
    if (spectral) {
      for (int k : options.top_k) {
        if (k < 2) fail(errc::invalid_k, "truncation size must be >= 2, got " + std::to_string(k));
        if (static_cast<std::size_t>(k) > candidates.size()) continue;
        const TruncatedDiversity truncated =
            truncated_diversity(candidates, references, idf, k);
        TruncationPoint point;
        point.k = k;
        if (options.metrics.contains(Metric::lsa)) point.div_lsa = truncated.lsa.div;
        if (options.metrics.contains(Metric::self_cider))
          point.div_self_cider = truncated.self_cider.div;
        record.truncation.push_back(point);
      }
    }
    return record;
  } catch (const Error& e) {
    throw Error(e.code(), "image '" + entry.image_id + "': " + e.what());
  }
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CAPDIV_THREADS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value >= 1) return static_cast<unsigned>(value);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

namespace {

struct MeanAccumulator {
  double sum = 0.0;
  int count = 0;

  void add(const std::optional<double>& value) {
    if (value) {
      sum += *value;
      ++count;
    }
  }
  std::optional<double> mean() const {
    if (count == 0) return std::nullopt;
    return sum / count;
  }
};

}  // namespace

CorpusResult evaluate_corpus(const std::vector<ImageEntry>& entries,
                             const IdfTable& idf, const EvalOptions& options,
                             unsigned threads) {
  std::vector<const ImageEntry*> sorted;
  sorted.reserve(entries.size());
  for (const auto& entry : entries) sorted.push_back(&entry);
  std::sort(sorted.begin(), sorted.end(),
            [](const ImageEntry* lhs, const ImageEntry* rhs) {
              return lhs->image_id < rhs->image_id;
            });

  CorpusResult result;
  result.records.resize(sorted.size());
  std::vector<std::exception_ptr> failures(sorted.size());

  const unsigned n_workers =
      std::min<unsigned>(resolve_thread_count(threads),
                         std::max<std::size_t>(sorted.size(), 1));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < sorted.size(); i = next.fetch_add(1)) {
      try {
        result.records[i] = evaluate_image(*sorted[i], idf, options);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  // Aggregate in ascending image_id order so sums are reproducible.
  MeanAccumulator acc, lsa, self_cider, mbleu, f;
  std::map<int, std::pair<MeanAccumulator, MeanAccumulator>> truncation_acc;
  for (const auto& record : result.records) {
    acc.add(record.acc);
    lsa.add(record.div_lsa);
    self_cider.add(record.div_self_cider);
    mbleu.add(record.div_mbleu_mix);
    f.add(record.f_score);
    for (const auto& point : record.truncation) {
      auto& [lsa_acc, cider_acc] = truncation_acc[point.k];
      lsa_acc.add(point.div_lsa);
      cider_acc.add(point.div_self_cider);
    }
  }
  result.acc_mean = result.records.empty() ? 0.0 : acc.sum / acc.count;
  result.div_lsa_mean = lsa.mean();
  result.div_self_cider_mean = self_cider.mean();
  result.div_mbleu_mix_mean = mbleu.mean();
  result.f_score_mean = f.mean();
  for (const auto& [k, accumulators] : truncation_acc) {
    TruncationMeans means;
    means.k = k;
    means.images = std::max(accumulators.first.count, accumulators.second.count);
    means.div_lsa = accumulators.first.mean();
    means.div_self_cider = accumulators.second.mean();
    result.truncation_means.push_back(means);
  }

  // Human reference baseline over images whose reference sets support it.
  const double scale = options.acc_scale == AccuracyScale::x10 ? kX10 : 1.0;
  MeanAccumulator loo, human_lsa, human_cider;
  for (const auto* entry : sorted) {
    const std::vector<TokenizedCaption> references = tokenize_all(entry->references);
    if (references.size() < 2) continue;
    const bool degenerate = std::any_of(references.begin(), references.end(),
                                        [](const TokenizedCaption& c) { return c.empty(); });
    if (degenerate) continue;
    try {
      ++result.human.images;
      loo.add(scale * leave_one_out_accuracy(references, idf));
      if (options.metrics.contains(Metric::lsa))
        human_lsa.add(lsa_diversity(references).div);
      if (options.metrics.contains(Metric::self_cider))
        human_cider.add(self_cider_diversity(references, idf).div);
    } catch (const Error& e) {
      throw Error(e.code(), "image '" + entry->image_id + "' references: " + e.what());
    }
  }
  result.human.loo_acc_mean = loo.mean();
  result.human.div_lsa_mean = human_lsa.mean();
  result.human.div_self_cider_mean = human_cider.mean();

  return result;
}

}  // namespace capdiv
