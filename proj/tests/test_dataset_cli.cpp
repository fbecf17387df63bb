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

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "capdiv/dataset.hpp"
#include "capdiv/errors.hpp"
#include "capdiv/runner.hpp"

using namespace capdiv;
namespace fs = std::filesystem;

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

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("capdiv_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int value = 0;
    return value;
  }
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const char* kSmallDataset = R"({
  "images": [
    {"id": "img2",
     "candidates": ["a red bus on the street", "a large bus parked outside",
                    "a red bus on the street"],
     "references": ["a red bus drives down a city street",
                    "a large red bus on the road"]},
    {"id": "img1",
     "candidates": ["zebras grazing in a field", "two zebras eating the dry grass"],
     "references": ["zebras grazing on the savanna", "a pair of zebras eating grass"]}
  ]
})";

}  // namespace

TEST_CASE("parse_dataset accepts the documented schema") {
  const auto entries = parse_dataset(kSmallDataset);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].image_id == "img2");  // file order preserved
  CHECK(entries[0].candidates.size() == 3);
  CHECK(entries[1].references.size() == 2);
}

TEST_CASE("parse_dataset reports every violation with its image id") {
  const char* bad = R"({
    "images": [
      {"id": "dup", "candidates": ["a b", "c d"], "references": ["r"]},
      {"id": "dup", "candidates": ["a b", "c d"], "references": ["r"]},
      {"id": "one_cand", "candidates": ["only one"], "references": ["r"]},
      {"id": "no_refs", "candidates": ["a b", "c d"], "references": []},
      {"id": "empty_tok", "candidates": ["a b", "!!!"], "references": ["r"]},
      {"candidates": ["a"], "references": ["r"]}
    ]
  })";
  try {
    parse_dataset(bad);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::invalid_dataset);
    const doctest::String what(e.what());
    CHECK(what == doctest::Contains("duplicate id"));
    CHECK(what == doctest::Contains("one_cand"));
    CHECK(what == doctest::Contains("no_refs"));
    CHECK(what == doctest::Contains("empty_tok"));
    CHECK(what == doctest::Contains("missing or empty \"id\""));
  }

  CHECK(code_of([] { parse_dataset("{not json"); }) == errc::invalid_dataset);
  CHECK(code_of([] { parse_dataset("{\"no_images\": 1}"); }) == errc::invalid_dataset);

  // candidate checks relax when diversity is off
  IngestChecks relaxed;
  relaxed.diversity_candidates = false;
  const char* idf_only = R"({"images": [{"id": "a", "candidates": [], "references": ["r"]}]})";
  CHECK(parse_dataset(idf_only, relaxed).size() == 1);
}

TEST_CASE("dataset round-trips modulo whitespace") {
  const auto entries = parse_dataset(kSmallDataset);
  const auto serialized = serialize_dataset(entries);
  const auto reparsed = parse_dataset(serialized);
  REQUIRE(reparsed.size() == entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(reparsed[i].image_id == entries[i].image_id);
    CHECK(reparsed[i].candidates == entries[i].candidates);
    CHECK(reparsed[i].references == entries[i].references);
  }
  CHECK(nlohmann::json::parse(serialized) == nlohmann::json::parse(kSmallDataset));
}

TEST_CASE("judgment files validate the score range") {
  const auto table = parse_judgments(R"({"img1": {"m1": 0.25, "m2": 1.0}})");
  CHECK(table.at("img1").at("m1") == 0.25);

  CHECK(code_of([] { parse_judgments(R"({"img1": {"m1": 1.5}})"); }) ==
        errc::invalid_dataset);
  CHECK(code_of([] { parse_judgments(R"({"img1": {"m1": -0.1}})"); }) ==
        errc::invalid_dataset);
  CHECK(code_of([] { parse_judgments(R"({"img1": 3})"); }) == errc::invalid_dataset);
  CHECK(code_of([] { parse_judgments("[1,2]"); }) == errc::invalid_dataset);
}

TEST_CASE("ingest distinguishes io failures from validation failures") {
  CHECK(code_of([] { ingest("/nonexistent/path/data.json"); }) == errc::io_failure);
}

TEST_CASE("run_command writes the full report set") {
  TempDir dir;
  write_file(dir.path / "data.json", kSmallDataset);

  RunConfig config;
  config.input = dir.path / "data.json";
  config.out_dir = dir.path / "out";
  config.eval.top_k = {2};
  config.method_id = "toy";

  std::ostringstream err;
  REQUIRE(run_command(config, err) == 0);
  INFO(err.str());

  // JSONL report: one line per image, ascending image_id, fixed key order
  std::ifstream report(dir.path / "out" / "report.jsonl");
  std::string line1, line2, extra;
  REQUIRE(std::getline(report, line1));
  REQUIRE(std::getline(report, line2));
  CHECK_FALSE(std::getline(report, extra));
  const auto record1 = nlohmann::json::parse(line1);
  CHECK(record1["image_id"] == "img1");
  CHECK(record1["method_id"] == "toy");
  CHECK(record1.contains("acc"));
  CHECK(record1.contains("div_lsa"));
  CHECK(record1.contains("div_self_cider"));
  CHECK(record1.contains("div_mbleu_mix"));
  CHECK(record1.contains("f_score"));
  CHECK(record1["truncation"][0]["k"] == 2);
  CHECK(line1.find("\"image_id\"") < line1.find("\"acc\""));

  // duplicated candidate in img2 caps its diversity below img1's
  const auto record2 = nlohmann::json::parse(line2);
  CHECK(record2["image_id"] == "img2");
  CHECK(record2["div_self_cider"].get<double>() < record1["div_self_cider"].get<double>());

  // summary carries means and the human baseline
  const auto summary = nlohmann::json::parse(read_file(dir.path / "out" / "summary.json"));
  CHECK(summary["dataset"]["images"] == 2);
  CHECK(summary["means"].contains("acc"));
  CHECK(summary["means"].contains("f_score"));
  CHECK(summary["human"]["images"] == 2);
  CHECK(summary["human"].contains("loo_acc_mean"));

  // CSV: header plus one row per image
  std::istringstream csv(read_file(dir.path / "out" / "report.csv"));
  std::string header, row1, row2;
  REQUIRE(std::getline(csv, header));
  CHECK(header == "image_id,acc,div_lsa,div_self_cider,div_mbleu_mix,f_score");
  REQUIRE(std::getline(csv, row1));
  CHECK(row1.substr(0, 5) == "img1,");
  REQUIRE(std::getline(csv, row2));

  SUBCASE("metric subsetting leaves csv cells empty") {
    RunConfig partial = config;
    partial.out_dir = dir.path / "out_partial";
    partial.eval.metrics = {Metric::lsa};
    std::ostringstream err2;
    REQUIRE(run_command(partial, err2) == 0);
    std::istringstream csv2(read_file(dir.path / "out_partial" / "report.csv"));
    std::string h, row;
    std::getline(csv2, h);
    std::getline(csv2, row);
    // trailing cells for self-cider, mbleu and f are empty
    CHECK(row.substr(row.size() - 3) == ",,,");
  }
}

TEST_CASE("run_command export toggles") {
  TempDir dir;
  write_file(dir.path / "data.json", kSmallDataset);

  RunConfig config;
  config.input = dir.path / "data.json";
  config.out_dir = dir.path / "out";
  config.export_mds = true;
  config.export_radar = true;
  config.export_vocab = true;

  std::ostringstream err;
  REQUIRE(run_command(config, err) == 0);

  const auto mds = nlohmann::json::parse(read_file(dir.path / "out" / "mds.json"));
  CHECK(mds["kernel"] == "self-cider");
  REQUIRE(mds["images"].size() == 2);
  CHECK(mds["images"][0]["points"].size() == 2);  // img1 has two candidates
  CHECK(mds["images"][0]["points"][0].size() == 2);

  const auto radar = nlohmann::json::parse(read_file(dir.path / "out" / "radar.json"));
  REQUIRE(radar["images"].size() == 2);
  CHECK(radar["images"][0]["bow"]["singular_values"].size() == 5);
  CHECK(radar["images"][0]["self_cider"]["loadings"].size() == 2);

  const auto vocab = read_file(dir.path / "out" / "vocab.csv");
  CHECK(vocab.find("source,vocab_size,rank,word,frequency") == 0);
  CHECK(vocab.find("default,") != std::string::npos);
  CHECK(vocab.find("references,") != std::string::npos);
}

TEST_CASE("run_command exit codes") {
  TempDir dir;

  RunConfig config;
  config.input = dir.path / "missing.json";
  config.out_dir = dir.path / "out";
  std::ostringstream err;
  CHECK(run_command(config, err) == 2);  // unreadable input

  write_file(dir.path / "bad.json", "{");
  config.input = dir.path / "bad.json";
  CHECK(run_command(config, err) == 1);  // malformed dataset

  write_file(dir.path / "invalid.json",
             R"({"images": [{"id": "x", "candidates": ["one"], "references": ["r"]}]})");
  config.input = dir.path / "invalid.json";
  CHECK(run_command(config, err) == 1);  // validation failure

  write_file(dir.path / "data.json", kSmallDataset);
  config.input = dir.path / "data.json";
  config.eval.metrics = {};
  CHECK(run_command(config, err) == 1);  // no metric selected

  config.eval = {};
  config.eval.top_k = {1};
  CHECK(run_command(config, err) == 1);  // invalid truncation size
}

TEST_CASE("idf_command round-trips through run_command") {
  TempDir dir;
  write_file(dir.path / "data.json", kSmallDataset);

  std::ostringstream err;
  REQUIRE(idf_command(dir.path / "data.json", dir.path / "idf.json", err) == 0);

  const auto idf = IdfTable::load(dir.path / "idf.json");
  CHECK(idf.document_count() == 2);
  CHECK(idf.document_frequency(1, "zebras") == 1);
  CHECK(idf.document_frequency(1, "a") == 2);

  // a run with the external table matches the run with references idf
  RunConfig with_file;
  with_file.input = dir.path / "data.json";
  with_file.out_dir = dir.path / "out_file";
  with_file.idf_path = dir.path / "idf.json";
  REQUIRE(run_command(with_file, err) == 0);

  RunConfig from_refs = with_file;
  from_refs.idf_path.reset();
  from_refs.out_dir = dir.path / "out_refs";
  REQUIRE(run_command(from_refs, err) == 0);

  CHECK(read_file(dir.path / "out_file" / "report.jsonl") ==
        read_file(dir.path / "out_refs" / "report.jsonl"));
}

TEST_CASE("correlate_command summarizes per-metric agreement") {
  TempDir dir;
  write_file(dir.path / "data.json", kSmallDataset);

  // two runs with different method ids, concatenated into one report
  RunConfig config;
  config.input = dir.path / "data.json";
  std::ostringstream err;
  config.method_id = "methodA";
  config.out_dir = dir.path / "outA";
  REQUIRE(run_command(config, err) == 0);
  config.method_id = "methodB";
  config.out_dir = dir.path / "outB";
  REQUIRE(run_command(config, err) == 0);
  write_file(dir.path / "combined.jsonl",
             read_file(dir.path / "outA" / "report.jsonl") +
                 read_file(dir.path / "outB" / "report.jsonl"));

  write_file(dir.path / "judgments.json", R"({
    "img1": {"methodA": 0.9, "methodB": 0.4},
    "img2": {"methodA": 0.3, "methodB": 0.2}
  })");

  std::ostringstream out;
  REQUIRE(correlate_command(dir.path / "combined.jsonl", dir.path / "judgments.json",
                            dir.path / "corr.json", out, err) == 0);
  const auto summary = nlohmann::json::parse(read_file(dir.path / "corr.json"));
  REQUIRE(summary["metrics"].contains("div_self_cider"));
  const auto& block = summary["metrics"]["div_self_cider"];
  CHECK(block["pairs"] == 4);
  // identical runs per method give zero metric variance across methods
  CHECK(block["images_used"].get<int>() + block["images_skipped"].get<int>() == 2);

  // stdout path works too
  std::ostringstream stdout_sink;
  REQUIRE(correlate_command(dir.path / "combined.jsonl", dir.path / "judgments.json",
                            std::nullopt, stdout_sink, err) == 0);
  CHECK(stdout_sink.str().find("overall_pearson") != std::string::npos);

  CHECK(correlate_command(dir.path / "nope.jsonl", dir.path / "judgments.json",
                          std::nullopt, out, err) == 2);
}
