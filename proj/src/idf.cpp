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

#include "capdiv/idf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "capdiv/errors.hpp"

namespace capdiv {

IdfTable IdfTable::build(const std::vector<std::vector<TokenizedCaption>>& documents) {
  if (documents.empty())
    fail(errc::empty_corpus, "IDF corpus has no documents");

  IdfTable table;
  table.n_docs_ = documents.size();
  for (const auto& document : documents) {
    for (int order = 1; order <= kMaxNgramOrder; ++order) {
      std::set<std::string> seen;
      for (const auto& caption : document) {
        for (const auto& [gram, count] : ngrams(caption, order).counts) seen.insert(gram);
      }
      auto& df = table.df_[order - 1];
      for (const auto& gram : seen) ++df[gram];
    }
  }
  return table;
}

double IdfTable::weight(int order, const std::string& gram) const {
  const int df = document_frequency(order, gram);
  // Unseen grams are treated as df = 1 so novel content stays weighted.
  const double effective_df = df > 0 ? static_cast<double>(df) : 1.0;
  return std::log(static_cast<double>(n_docs_) / effective_df);
}

int IdfTable::document_frequency(int order, const std::string& gram) const {
  if (order < 1 || order > kMaxNgramOrder)
    fail(errc::invalid_order, "n-gram order must lie in 1..4, got " + std::to_string(order));
  const auto& df = df_[order - 1];
  auto it = df.find(gram);
  return it == df.end() ? 0 : it->second;
}

std::string IdfTable::to_json() const {
  nlohmann::ordered_json root;
  root["n_docs"] = n_docs_;
  auto entries = nlohmann::ordered_json::array();
  for (int order = 1; order <= kMaxNgramOrder; ++order) {
    std::vector<std::pair<std::string, int>> sorted(df_[order - 1].begin(), df_[order - 1].end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [gram, df] : sorted) {
      nlohmann::ordered_json entry;
      entry["n"] = order;
      // Split the space-joined gram back into its token list.
      auto tokens = nlohmann::ordered_json::array();
      std::istringstream stream(gram);
      std::string token;
      while (stream >> token) tokens.push_back(token);
      entry["gram"] = std::move(tokens);
      entry["df"] = df;
      entries.push_back(std::move(entry));
    }
  }
  root["entries"] = std::move(entries);
  return root.dump(1);
}

IdfTable IdfTable::from_json(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_dataset, std::string("malformed IDF file: ") + e.what());
  }

  IdfTable table;
  try {
    table.n_docs_ = root.at("n_docs").get<std::size_t>();
    if (table.n_docs_ == 0) fail(errc::empty_corpus, "IDF file declares zero documents");
    for (const auto& entry : root.at("entries")) {
      const int order = entry.at("n").get<int>();
      if (order < 1 || order > kMaxNgramOrder)
        fail(errc::invalid_dataset, "IDF entry has order outside 1..4");
      std::string gram;
      for (const auto& token : entry.at("gram")) {
        if (!gram.empty()) gram += ' ';
        gram += token.get<std::string>();
      }
      const int df = entry.at("df").get<int>();
      if (df < 1 || static_cast<std::size_t>(df) > table.n_docs_)
        fail(errc::invalid_dataset, "IDF entry for '" + gram + "' has df outside 1..n_docs");
      table.df_[order - 1][gram] = df;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_dataset, std::string("malformed IDF file: ") + e.what());
  }
  return table;
}

void IdfTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) fail(errc::io_failure, "cannot open '" + path.string() + "' for writing");
  out << to_json() << '\n';
  if (!out) fail(errc::io_failure, "failed writing '" + path.string() + "'");
}

IdfTable IdfTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_failure, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

}  // namespace capdiv
