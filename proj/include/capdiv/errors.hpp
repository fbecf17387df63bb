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

#include <stdexcept>
#include <string>

namespace capdiv {

enum class errc {
  invalid_order,            // n-gram order outside 1..4
  empty_corpus,             // IDF built from zero documents
  missing_references,       // scoring against an empty reference set
  insufficient_captions,    // fewer than 2 captions where a set is required
  insufficient_references,  // fewer than 2 references for leave-one-out
  degenerate_caption,       // caption tokenizes to nothing (reported with index)
  asymmetric_matrix,        // eigensolver input violates the symmetry contract
  degenerate_spectrum,      // all eigenvalues zero
  invalid_k,                // truncation size outside 2..m
  missing_data,             // empty candidate or reference list at evaluation
  undefined_correlation,    // zero variance in a correlation input
  invalid_dataset,          // dataset/judgment file failed validation
  invalid_config,           // bad option combination or value
  io_failure,               // file could not be read or written
};

// Exception carrying a machine-checkable code alongside the human message.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace capdiv
