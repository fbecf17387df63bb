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

#include "capdiv/runner.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "capdiv/analysis.hpp"
#include "capdiv/dataset.hpp"
#include "capdiv/errors.hpp"
#include "capdiv/spectrum.hpp"
#include "capdiv/stats.hpp"

namespace capdiv {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

void set_optional(ordered_json& object, const char* key, const std::optional<double>& value) {
  if (value) object[key] = *value;
}

ordered_json record_to_json(const EvaluationRecord& record, const std::string& method_id) {
  ordered_json line;
  line["image_id"] = record.image_id;
  line["method_id"] = method_id;
  line["acc"] = record.acc;
  line["per_caption_acc"] = record.per_caption_acc;
  set_optional(line, "div_lsa", record.div_lsa);
  set_optional(line, "div_self_cider", record.div_self_cider);
  set_optional(line, "div_mbleu_mix", record.div_mbleu_mix);
  set_optional(line, "f_score", record.f_score);
  if (!record.truncation.empty()) {
    auto points = ordered_json::array();
    for (const auto& point : record.truncation) {
      ordered_json p;
      p["k"] = point.k;
      set_optional(p, "div_lsa", point.div_lsa);
      set_optional(p, "div_self_cider", point.div_self_cider);
      points.push_back(std::move(p));
    }
    line["truncation"] = std::move(points);
  }
  return line;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_failure, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) fail(errc::io_failure, "failed writing '" + path.string() + "'");
}

const char* metric_name(Metric metric) {
  switch (metric) {
    case Metric::lsa: return "lsa";
    case Metric::self_cider: return "self-cider";
    case Metric::mbleu: return "mbleu";
  }
  return "?";
}

void write_report_jsonl(const std::filesystem::path& path, const CorpusResult& corpus,
                        const std::string& method_id) {
  auto out = open_output(path);
  for (const auto& record : corpus.records)
    out << record_to_json(record, method_id).dump() << '\n';
  finish_output(out, path);
}

void write_report_csv(const std::filesystem::path& path, const CorpusResult& corpus) {
  auto out = open_output(path);
  out << "image_id,acc,div_lsa,div_self_cider,div_mbleu_mix,f_score\n";
  auto cell = [](const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
  };
  for (const auto& record : corpus.records) {
    out << record.image_id << ',' << format_double(record.acc) << ',' << cell(record.div_lsa)
        << ',' << cell(record.div_self_cider) << ',' << cell(record.div_mbleu_mix) << ','
        << cell(record.f_score) << '\n';
  }
  finish_output(out, path);
}

ordered_json correlation_summary(const ScoreTable& judgments,
                                 const std::map<std::string, ScoreTable>& metric_tables);

void write_summary(const std::filesystem::path& path, const RunConfig& config,
                   const CorpusResult& corpus, const ordered_json* correlation) {
  ordered_json summary;
  summary["dataset"] = {{"input", config.input.string()},
                        {"images", corpus.records.size()},
                        {"method_id", config.method_id}};

  auto metrics = ordered_json::array();
  for (Metric metric : config.eval.metrics) metrics.push_back(metric_name(metric));
  summary["options"] = {
      {"metrics", std::move(metrics)},
      {"beta2", config.eval.beta2},
      {"acc_scale", config.eval.acc_scale == AccuracyScale::x10 ? "x10" : "unit"},
      {"top_k", config.eval.top_k},
      {"bleu_smoothing",
       config.eval.bleu_smoothing == BleuSmoothing::epsilon ? "epsilon" : "none"},
      {"idf_source", config.idf_path ? config.idf_path->string() : std::string("references")}};

  ordered_json means;
  means["acc"] = corpus.acc_mean;
  set_optional(means, "div_lsa", corpus.div_lsa_mean);
  set_optional(means, "div_self_cider", corpus.div_self_cider_mean);
  set_optional(means, "div_mbleu_mix", corpus.div_mbleu_mix_mean);
  set_optional(means, "f_score", corpus.f_score_mean);
  summary["means"] = std::move(means);

  if (!corpus.truncation_means.empty()) {
    auto points = ordered_json::array();
    for (const auto& entry : corpus.truncation_means) {
      ordered_json point;
      point["k"] = entry.k;
      point["images"] = entry.images;
      set_optional(point, "div_lsa", entry.div_lsa);
      set_optional(point, "div_self_cider", entry.div_self_cider);
      points.push_back(std::move(point));
    }
    summary["truncation_means"] = std::move(points);
  }

  ordered_json human;
  human["images"] = corpus.human.images;
  set_optional(human, "loo_acc_mean", corpus.human.loo_acc_mean);
  set_optional(human, "div_lsa_mean", corpus.human.div_lsa_mean);
  set_optional(human, "div_self_cider_mean", corpus.human.div_self_cider_mean);
  summary["human"] = std::move(human);

  if (correlation) summary["correlation"] = *correlation;

  auto out = open_output(path);
  out << summary.dump(1) << '\n';
  finish_output(out, path);
}

void write_mds_export(const std::filesystem::path& path, const RunConfig& config,
                      const std::vector<ImageEntry>& entries, const IdfTable& idf) {
  const bool use_cider = config.eval.metrics.contains(Metric::self_cider);
  ordered_json root;
  root["kernel"] = use_cider ? "self-cider" : "bow";
  auto images = ordered_json::array();
  for (const auto& entry : entries) {
    const auto captions = tokenize_all(entry.candidates);
    try {
      const KernelMatrix kernel =
          use_cider ? cider_kernel(captions, idf) : bow_kernel(captions);
      const MdsEmbedding embedding = classical_mds(kernel);
      ordered_json image;
      image["id"] = entry.image_id;
      auto points = ordered_json::array();
      for (const auto& point : embedding.points)
        points.push_back(ordered_json::array({point[0], point[1]}));
      image["points"] = std::move(points);
      image["stress"] = embedding.stress;
      images.push_back(std::move(image));
    } catch (const Error& e) {
      throw Error(e.code(), "image '" + entry.image_id + "': " + e.what());
    }
  }
  root["images"] = std::move(images);
  auto out = open_output(path);
  out << root.dump(1) << '\n';
  finish_output(out, path);
}

ordered_json projection_to_json(const SemanticProjection& projection) {
  ordered_json object;
  object["stop_words_removed"] = projection.stop_words_removed;
  object["singular_values"] = projection.singular_values;
  auto loadings = ordered_json::array();
  for (const auto& row : projection.loadings) loadings.push_back(row);
  object["loadings"] = std::move(loadings);
  return object;
}

void write_radar_export(const std::filesystem::path& path, const RunConfig& config,
                        const std::vector<ImageEntry>& entries, const IdfTable& idf) {
  ordered_json root;
  auto images = ordered_json::array();
  for (const auto& entry : entries) {
    const auto captions = tokenize_all(entry.candidates);
    try {
      ordered_json image;
      image["id"] = entry.image_id;
      image["bow"] = projection_to_json(semantic_projection(
          captions, ProjectionKernel::bow, idf, config.radar_stop_words));
      image["self_cider"] = projection_to_json(
          semantic_projection(captions, ProjectionKernel::self_cider, idf));
      images.push_back(std::move(image));
    } catch (const Error& e) {
      throw Error(e.code(), "image '" + entry.image_id + "': " + e.what());
    }
  }
  root["images"] = std::move(images);
  auto out = open_output(path);
  out << root.dump(1) << '\n';
  finish_output(out, path);
}

void write_vocab_export(const std::filesystem::path& path, const RunConfig& config,
                        const std::vector<ImageEntry>& entries) {
  std::vector<TokenizedCaption> candidates, references;
  for (const auto& entry : entries) {
    for (const auto& caption : entry.candidates) candidates.push_back(tokenize(caption));
    for (const auto& caption : entry.references) references.push_back(tokenize(caption));
  }
  const auto rows = vocab_report({{config.method_id, std::move(candidates)},
                                  {"references", std::move(references)}},
                                 config.vocab_top_k);
  auto out = open_output(path);
  out << "source,vocab_size,rank,word,frequency\n";
  for (const auto& row : rows)
    out << row.source << ',' << row.vocab_size << ',' << row.rank << ',' << row.word << ','
        << row.frequency << '\n';
  finish_output(out, path);
}

// Shared by `run --judgments` and the standalone correlate command.
ordered_json correlation_summary(const ScoreTable& judgments,
                                 const std::map<std::string, ScoreTable>& metric_tables) {
  ordered_json metrics;
  for (const auto& [metric, table] : metric_tables) {
    std::vector<double> human_pooled, metric_pooled;
    for (const auto& [image_id, methods] : judgments) {
      auto image_it = table.find(image_id);
      if (image_it == table.end()) continue;
      for (const auto& [method_id, human_score] : methods) {
        auto found = image_it->second.find(method_id);
        if (found == image_it->second.end()) continue;
        human_pooled.push_back(human_score);
        metric_pooled.push_back(found->second);
      }
    }

    ordered_json block;
    block["pairs"] = human_pooled.size();
    try {
      block["overall_pearson"] = pearson(metric_pooled, human_pooled);
      block["overall_spearman"] = spearman(metric_pooled, human_pooled);
    } catch (const Error&) {
      block["overall_pearson"] = nullptr;
      block["overall_spearman"] = nullptr;
    }
    try {
      const RankCorrelation rank = per_image_rank_correlation(judgments, table);
      block["per_image_spearman_mean"] = rank.mean;
      block["images_used"] = rank.images_used;
      block["images_skipped"] = rank.images_skipped;
    } catch (const Error&) {
      block["per_image_spearman_mean"] = nullptr;
      block["images_used"] = 0;
      block["images_skipped"] = judgments.size();
    }
    metrics[metric] = std::move(block);
  }

  ordered_json summary;
  summary["metrics"] = std::move(metrics);
  return summary;
}

std::map<std::string, ScoreTable> metric_tables_from_records(
    const CorpusResult& corpus, const std::string& method_id) {
  std::map<std::string, ScoreTable> tables;
  for (const auto& record : corpus.records) {
    if (record.div_lsa) tables["div_lsa"][record.image_id][method_id] = *record.div_lsa;
    if (record.div_self_cider)
      tables["div_self_cider"][record.image_id][method_id] = *record.div_self_cider;
    if (record.div_mbleu_mix)
      tables["div_mbleu_mix"][record.image_id][method_id] = *record.div_mbleu_mix;
  }
  return tables;
}

int map_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return e.code() == errc::io_failure ? 2 : 1;
}

}  // namespace

int run_command(const RunConfig& config, std::ostream& err) {
  try {
    if (config.eval.metrics.empty())
      fail(errc::invalid_config, "at least one metric must be selected");
    if (config.eval.beta2 < 0.0)
      fail(errc::invalid_config, "beta2 must be nonnegative");
    for (int k : config.eval.top_k)
      if (k < 2) fail(errc::invalid_k, "--top-k values must be >= 2");
    RunConfig effective = config;
    std::sort(effective.eval.top_k.begin(), effective.eval.top_k.end());
    effective.eval.top_k.erase(
        std::unique(effective.eval.top_k.begin(), effective.eval.top_k.end()),
        effective.eval.top_k.end());

    std::vector<ImageEntry> entries = ingest(effective.input, IngestChecks{});
    if (entries.empty()) fail(errc::invalid_dataset, "dataset has no images");
    // Exports and reports both follow ascending image_id.
    std::sort(entries.begin(), entries.end(),
              [](const ImageEntry& lhs, const ImageEntry& rhs) {
                return lhs.image_id < rhs.image_id;
              });

    const IdfTable idf = effective.idf_path
                             ? IdfTable::load(*effective.idf_path)
                             : IdfTable::build(reference_documents(entries));

    const CorpusResult corpus =
        evaluate_corpus(entries, idf, effective.eval, effective.threads);

    std::error_code ec;
    std::filesystem::create_directories(effective.out_dir, ec);
    if (ec) fail(errc::io_failure, "cannot create '" + effective.out_dir.string() + "'");

    write_report_jsonl(effective.out_dir / "report.jsonl", corpus, effective.method_id);
    write_report_csv(effective.out_dir / "report.csv", corpus);

    std::optional<ordered_json> correlation;
    if (effective.judgments_path) {
      const ScoreTable judgments = load_judgments(*effective.judgments_path);
      correlation = correlation_summary(
          judgments, metric_tables_from_records(corpus, effective.method_id));
    }
    write_summary(effective.out_dir / "summary.json", effective, corpus,
                  correlation ? &*correlation : nullptr);

    if (effective.export_mds)
      write_mds_export(effective.out_dir / "mds.json", effective, entries, idf);
    if (effective.export_radar)
      write_radar_export(effective.out_dir / "radar.json", effective, entries, idf);
    if (effective.export_vocab)
      write_vocab_export(effective.out_dir / "vocab.csv", effective, entries);

    return 0;
  } catch (const Error& e) {
    return map_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int correlate_command(const std::filesystem::path& report_path,
                      const std::filesystem::path& judgments_path,
                      const std::optional<std::filesystem::path>& output_path,
                      std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) fail(errc::io_failure, "cannot open '" + report_path.string() + "'");

    std::map<std::string, ScoreTable> tables;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json record;
      try {
        record = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        fail(errc::invalid_dataset, "report line " + std::to_string(line_no) +
                                        ": malformed JSON: " + e.what());
      }
      if (!record.contains("image_id") || !record["image_id"].is_string())
        fail(errc::invalid_dataset,
             "report line " + std::to_string(line_no) + ": missing image_id");
      const std::string image_id = record["image_id"].get<std::string>();
      const std::string method_id =
          record.value("method_id", std::string("default"));
      for (const char* metric : {"div_lsa", "div_self_cider", "div_mbleu_mix"}) {
        if (record.contains(metric) && record[metric].is_number())
          tables[metric][image_id][method_id] = record[metric].get<double>();
      }
    }
    if (in.bad()) fail(errc::io_failure, "failed reading '" + report_path.string() + "'");
    if (tables.empty())
      fail(errc::invalid_dataset, "report contains no diversity scores");

    const ScoreTable judgments = load_judgments(judgments_path);
    ordered_json summary = correlation_summary(judgments, tables);
    summary["report"] = report_path.string();
    summary["judgments"] = judgments_path.string();

    if (output_path) {
      auto file = open_output(*output_path);
      file << summary.dump(1) << '\n';
      finish_output(file, *output_path);
    } else {
      out << summary.dump(1) << '\n';
    }
    return 0;
  } catch (const Error& e) {
    return map_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int idf_command(const std::filesystem::path& input,
                const std::filesystem::path& output, std::ostream& err) {
  try {
    IngestChecks checks;
    checks.diversity_candidates = false;  // IDF building only needs references
    const std::vector<ImageEntry> entries = ingest(input, checks);
    if (entries.empty()) fail(errc::invalid_dataset, "dataset has no images");
    IdfTable::build(reference_documents(entries)).save(output);
    return 0;
  } catch (const Error& e) {
    return map_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace capdiv
