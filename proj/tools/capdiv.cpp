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

// capdiv: batch evaluation of caption sets by accuracy (CIDEr against
// references) and diversity (spectral LSA / self-CIDEr / mBLEU-mix).
//
// Subcommands:
//   run        evaluate a dataset and write report.jsonl / summary.json / report.csv
//   idf        build a reusable IDF table from a dataset's reference sets
//   correlate  compare a report's diversity columns against human judgments

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capdiv/runner.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream stream(text);
  std::string part;
  while (std::getline(stream, part, ',')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"caption set evaluation: accuracy and diversity"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "evaluate a caption dataset");
  capdiv::RunConfig config;
  std::string metrics = "lsa,self-cider,mbleu";
  std::string acc_scale = "unit";
  std::string idf_source = "references";
  std::string top_k = "2,5,8,10";
  std::string exports;
  std::string bleu_smoothing = "none";
  std::string judgments;
  run->add_option("--input", config.input, "dataset JSON file")->required();
  run->add_option("--out-dir", config.out_dir, "output directory")->required();
  run->add_option("--metrics", metrics, "comma list of lsa,self-cider,mbleu");
  run->add_option("--beta2", config.eval.beta2, "F-measure beta^2 (default 5.0)");
  run->add_option("--acc-scale", acc_scale, "accuracy scale: unit|x10");
  run->add_option("--idf", idf_source, "'references' or path to an IDF table file");
  run->add_option("--top-k", top_k, "comma list for the truncation study ('' disables)");
  run->add_option("--export", exports, "comma list of mds,radar,vocab");
  run->add_option("--bleu-smoothing", bleu_smoothing, "none|epsilon");
  run->add_option("--judgments", judgments, "human judgment file to correlate against");
  run->add_option("--method-id", config.method_id, "method tag stamped on report records");
  run->add_flag("--radar-stop-words", config.radar_stop_words,
                "remove stop words in the bow radar projection");
  run->add_option("--vocab-top-k", config.vocab_top_k, "words per source in vocab.csv");

  // --- idf ---
  auto* idf = app.add_subcommand("idf", "build an IDF table from reference sets");
  std::string idf_input, idf_output;
  idf->add_option("--input", idf_input, "dataset JSON file")->required();
  idf->add_option("--output", idf_output, "IDF table file to write")->required();

  // --- correlate ---
  auto* correlate = app.add_subcommand("correlate",
                                       "correlate report diversity against judgments");
  std::string report_path, correlate_judgments, correlate_output;
  correlate->add_option("--report", report_path, "report.jsonl (runs may be concatenated)")
      ->required();
  correlate->add_option("--judgments", correlate_judgments, "human judgment file")->required();
  correlate->add_option("--output", correlate_output, "summary file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    config.eval.metrics.clear();
    for (const auto& name : split_csv(metrics)) {
      if (name == "lsa") {
        config.eval.metrics.insert(capdiv::Metric::lsa);
      } else if (name == "self-cider" || name == "self_cider") {
        config.eval.metrics.insert(capdiv::Metric::self_cider);
      } else if (name == "mbleu") {
        config.eval.metrics.insert(capdiv::Metric::mbleu);
      } else {
        std::cerr << "error: unknown metric '" << name << "'\n";
        return 1;
      }
    }
    if (acc_scale == "unit") {
      config.eval.acc_scale = capdiv::AccuracyScale::unit;
    } else if (acc_scale == "x10") {
      config.eval.acc_scale = capdiv::AccuracyScale::x10;
    } else {
      std::cerr << "error: --acc-scale must be unit or x10\n";
      return 1;
    }
    if (bleu_smoothing == "none") {
      config.eval.bleu_smoothing = capdiv::BleuSmoothing::none;
    } else if (bleu_smoothing == "epsilon") {
      config.eval.bleu_smoothing = capdiv::BleuSmoothing::epsilon;
    } else {
      std::cerr << "error: --bleu-smoothing must be none or epsilon\n";
      return 1;
    }
    config.eval.top_k.clear();
    for (const auto& value : split_csv(top_k)) {
      try {
        config.eval.top_k.push_back(std::stoi(value));
      } catch (const std::exception&) {
        std::cerr << "error: bad --top-k value '" << value << "'\n";
        return 1;
      }
    }
    for (const auto& name : split_csv(exports)) {
      if (name == "mds") {
        config.export_mds = true;
      } else if (name == "radar") {
        config.export_radar = true;
      } else if (name == "vocab") {
        config.export_vocab = true;
      } else {
        std::cerr << "error: unknown export '" << name << "'\n";
        return 1;
      }
    }
    if (idf_source != "references") config.idf_path = idf_source;
    if (!judgments.empty()) config.judgments_path = judgments;
    return capdiv::run_command(config, std::cerr);
  }

  if (idf->parsed()) return capdiv::idf_command(idf_input, idf_output, std::cerr);

  if (correlate->parsed()) {
    std::optional<std::filesystem::path> output;
    if (!correlate_output.empty()) output = correlate_output;
    return capdiv::correlate_command(report_path, correlate_judgments, output, std::cout,
                                     std::cerr);
  }
  return 1;
}
