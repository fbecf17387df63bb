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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "capdiv/idf.hpp"
#include "capdiv/similarity.hpp"
#include "capdiv/text.hpp"

namespace capdiv {

/// One image's evaluation input: the method's caption set plus the
/// ground-truth references.
struct ImageEntry {
  std::string image_id;
  std::vector<std::string> candidates;
  std::vector<std::string> references;
};

enum class Metric { lsa, self_cider, mbleu };
enum class AccuracyScale { unit, x10 };

struct EvalOptions {
  std::set<Metric> metrics = {Metric::lsa, Metric::self_cider, Metric::mbleu};
  double beta2 = 5.0;
  AccuracyScale acc_scale = AccuracyScale::unit;
  std::vector<int> top_k = {2, 5, 8, 10};  // truncation study; empty disables
  BleuSmoothing bleu_smoothing = BleuSmoothing::none;
};

struct TruncationPoint {
  int k = 0;
  std::optional<double> div_lsa;
  std::optional<double> div_self_cider;
};

/// Per-image result bundle. Fields for unselected metrics stay empty;
/// f_score is present exactly when self-CIDEr diversity is, and is
/// consistent with the stored div_self_cider, acc, and beta2.
struct EvaluationRecord {
  std::string image_id;
  double acc = 0.0;
  std::vector<double> per_caption_acc;
  std::optional<double> div_lsa;
  std::optional<double> div_self_cider;
  std::optional<double> div_mbleu_mix;
  std::optional<double> f_score;
  std::vector<TruncationPoint> truncation;
};

/// Mean cider_vs_set over the candidates, in [0, 1].
double accuracy(const std::vector<TokenizedCaption>& candidates,
                const std::vector<TokenizedCaption>& references,
                const IdfTable& idf);

/// Mean over i of cider_vs_set(ref_i, refs \ i); the human upper-reference
/// point. Requires at least 2 references.
double leave_one_out_accuracy(const std::vector<TokenizedCaption>& references,
                              const IdfTable& idf);

/// F = (1 + beta2) * div * acc / (beta2 * div + acc); 0 when div * acc is 0.
double f_score(double div, double acc, double beta2);

/// Fills an EvaluationRecord for one image. Candidate sets shorter than 2
/// are rejected when any diversity metric is selected. Errors from inner
/// operations are rethrown with the image id attached.
EvaluationRecord evaluate_image(const ImageEntry& entry, const IdfTable& idf,
                                const EvalOptions& options);

struct TruncationMeans {
  int k = 0;
  int images = 0;  // images with at least k candidates
  std::optional<double> div_lsa;
  std::optional<double> div_self_cider;
};

/// Reference-set statistics over images with >= 2 non-degenerate references:
/// leave-one-out accuracy plus the diversity of the human captions.
struct HumanBaseline {
  int images = 0;
  std::optional<double> loo_acc_mean;
  std::optional<double> div_lsa_mean;
  std::optional<double> div_self_cider_mean;
};

struct CorpusResult {
  std::vector<EvaluationRecord> records;  // ascending image_id
  double acc_mean = 0.0;
  std::optional<double> div_lsa_mean;
  std::optional<double> div_self_cider_mean;
  std::optional<double> div_mbleu_mix_mean;
  std::optional<double> f_score_mean;
  std::vector<TruncationMeans> truncation_means;
  HumanBaseline human;
};

/// Evaluates every image, fanning the per-image work out to `threads`
/// workers (0 = CAPDIV_THREADS env var, falling back to the hardware count).
/// Records and all means are accumulated in ascending image_id order, so the
/// result is identical for any thread count.
CorpusResult evaluate_corpus(const std::vector<ImageEntry>& entries,
                             const IdfTable& idf, const EvalOptions& options,
                             unsigned threads = 0);

unsigned resolve_thread_count(unsigned requested);

}  // namespace capdiv
