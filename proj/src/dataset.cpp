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

#include "capdiv/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "capdiv/errors.hpp"

namespace capdiv {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_failure, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(errc::io_failure, "failed reading '" + path.string() + "'");
  return buffer.str();
}

}  // namespace

std::vector<ImageEntry> parse_dataset(const std::string& json_text,
                                      const IngestChecks& checks) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_dataset, std::string("malformed JSON: ") + e.what());
  }

  std::vector<std::string> violations;
  std::vector<ImageEntry> entries;
  if (!root.is_object() || !root.contains("images") || !root["images"].is_array()) {
    fail(errc::invalid_dataset, "dataset must be an object with an \"images\" array");
  }

  std::set<std::string> seen_ids;
  std::size_t position = 0;
  for (const auto& image : root["images"]) {
    const std::string where = "images[" + std::to_string(position++) + "]";
    if (!image.is_object()) {
      violations.push_back(where + ": not an object");
      continue;
    }

    ImageEntry entry;
    if (!image.contains("id") || !image["id"].is_string() ||
        image["id"].get<std::string>().empty()) {
      violations.push_back(where + ": missing or empty \"id\"");
      continue;
    }
    entry.image_id = image["id"].get<std::string>();

    bool fields_ok = true;
    for (const char* field : {"candidates", "references"}) {
      if (!image.contains(field) || !image[field].is_array()) {
        violations.push_back("image '" + entry.image_id + "': missing \"" +
                             field + "\" array");
        fields_ok = false;
        continue;
      }
      for (const auto& caption : image[field]) {
        if (!caption.is_string()) {
          violations.push_back("image '" + entry.image_id + "': non-string entry in \"" +
                               std::string(field) + "\"");
          fields_ok = false;
          break;
        }
        auto& target = field == std::string("candidates") ? entry.candidates : entry.references;
        target.push_back(caption.get<std::string>());
      }
    }
    if (!fields_ok) continue;

    if (!seen_ids.insert(entry.image_id).second) {
      violations.push_back("image '" + entry.image_id + "': duplicate id");
      continue;
    }
    if (entry.references.empty())
      violations.push_back("image '" + entry.image_id + "': needs at least 1 reference");
    if (checks.diversity_candidates) {
      if (entry.candidates.size() < 2) {
        violations.push_back("image '" + entry.image_id +
                             "': diversity scoring needs at least 2 candidates, got " +
                             std::to_string(entry.candidates.size()));
      } else {
        for (std::size_t i = 0; i < entry.candidates.size(); ++i) {
          if (tokenize(entry.candidates[i]).empty())
            violations.push_back("image '" + entry.image_id + "': candidate " +
                                 std::to_string(i) + " tokenizes to nothing");
        }
      }
    }
    entries.push_back(std::move(entry));
  }

  if (!violations.empty()) {
    std::string message = "dataset validation failed:";
    for (const auto& violation : violations) message += "\n  " + violation;
    fail(errc::invalid_dataset, message);
  }
  return entries;
}

std::vector<ImageEntry> ingest(const std::filesystem::path& path,
                               const IngestChecks& checks) {
  return parse_dataset(read_file(path), checks);
}

std::string serialize_dataset(const std::vector<ImageEntry>& entries) {
  nlohmann::ordered_json root;
  auto images = nlohmann::ordered_json::array();
  for (const auto& entry : entries) {
    nlohmann::ordered_json image;
    image["id"] = entry.image_id;
    image["candidates"] = entry.candidates;
    image["references"] = entry.references;
    images.push_back(std::move(image));
  }
  root["images"] = std::move(images);
  return root.dump(1);
}

std::vector<std::vector<TokenizedCaption>> reference_documents(
    const std::vector<ImageEntry>& entries) {
  std::vector<std::vector<TokenizedCaption>> documents;
  documents.reserve(entries.size());
  for (const auto& entry : entries) documents.push_back(tokenize_all(entry.references));
  return documents;
}

ScoreTable parse_judgments(const std::string& json_text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_dataset, std::string("malformed judgment file: ") + e.what());
  }
  if (!root.is_object())
    fail(errc::invalid_dataset, "judgment file must map image ids to method scores");

  ScoreTable table;
  for (const auto& [image_id, methods] : root.items()) {
    if (!methods.is_object())
      fail(errc::invalid_dataset, "judgments for image '" + image_id +
                                      "' must map method ids to scores");
    for (const auto& [method_id, score] : methods.items()) {
      if (!score.is_number())
        fail(errc::invalid_dataset, "judgment for ('" + image_id + "', '" + method_id +
                                        "') is not a number");
      const double value = score.get<double>();
      if (value < 0.0 || value > 1.0)
        fail(errc::invalid_dataset, "judgment for ('" + image_id + "', '" + method_id +
                                        "') is outside [0, 1]");
      table[image_id][method_id] = value;
    }
  }
  return table;
}

ScoreTable load_judgments(const std::filesystem::path& path) {
  return parse_judgments(read_file(path));
}

}  // namespace capdiv
