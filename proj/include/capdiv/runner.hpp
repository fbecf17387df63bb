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

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "capdiv/evaluation.hpp"

namespace capdiv {

// Batch entry points behind the CLI. Exit codes: 0 success, 1 validation
// failure, 2 I/O failure.

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path out_dir;
  EvalOptions eval;
  std::string method_id = "default";
  // IDF source: an external table file, or (default) the dataset's own
  // reference sets with one document per image.
  std::optional<std::filesystem::path> idf_path;
  std::optional<std::filesystem::path> judgments_path;
  bool export_mds = false;
  bool export_radar = false;
  bool export_vocab = false;
  bool radar_stop_words = false;
  std::size_t vocab_top_k = 5000;
  unsigned threads = 0;  // 0 = CAPDIV_THREADS env var / hardware count
};

/// Writes report.jsonl (one record per line, fixed key order), summary.json,
/// and report.csv into out_dir, plus mds.json / radar.json / vocab.csv when
/// the matching export is enabled.
int run_command(const RunConfig& config, std::ostream& err);

/// Correlates the diversity columns of a JSONL report (possibly a
/// concatenation of several runs with distinct --method-id stamps) against a
/// human judgment file. Writes the summary JSON to output_path, or to `out`
/// when no path is given.
int correlate_command(const std::filesystem::path& report_path,
                      const std::filesystem::path& judgments_path,
                      const std::optional<std::filesystem::path>& output_path,
                      std::ostream& out, std::ostream& err);

/// Builds an IdfTable from a dataset's reference sets and saves it.
int idf_command(const std::filesystem::path& input,
                const std::filesystem::path& output, std::ostream& err);

}  // namespace capdiv
