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
#include <string>
#include <vector>

#include "capdiv/evaluation.hpp"
#include "capdiv/stats.hpp"

namespace capdiv {

// Dataset file schema (UTF-8, no BOM):
//   {"images": [{"id": "...", "candidates": ["...", ...], "references": ["...", ...]}]}

struct IngestChecks {
  // Require >= 2 candidates per image, each tokenizing to at least one
  // token. Enabled whenever a diversity metric will be computed.
  bool diversity_candidates = true;
};

/// Parses and validates a dataset. Every violation is collected and reported
/// with its image id in a single errc::invalid_dataset error, so one pass
/// surfaces all problems. File-level read errors raise errc::io_failure.
std::vector<ImageEntry> ingest(const std::filesystem::path& path,
                               const IngestChecks& checks = {});

std::vector<ImageEntry> parse_dataset(const std::string& json_text,
                                      const IngestChecks& checks = {});

/// Inverse of parse_dataset modulo whitespace.
std::string serialize_dataset(const std::vector<ImageEntry>& entries);

/// Tokenized reference sets, one document per image, for IdfTable::build.
std::vector<std::vector<TokenizedCaption>> reference_documents(
    const std::vector<ImageEntry>& entries);

/// Human judgment file: {"image_id": {"method_id": score}} with scores in
/// [0, 1]. Violations raise errc::invalid_dataset.
ScoreTable load_judgments(const std::filesystem::path& path);
ScoreTable parse_judgments(const std::string& json_text);

}  // namespace capdiv
