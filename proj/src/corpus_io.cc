//
// Copyright 2026 The dptext Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dptext/corpus_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace dptext {

using json = nlohmann::json;

absl::StatusOr<std::vector<RawDocument>> ReadCorpus(std::istream& in) {
  std::vector<RawDocument> docs;
  std::set<std::string> ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      return absl::DataLossError(
          absl::StrCat("line ", line_no, ": malformed record: ", e.what()));
    }
    if (!record.is_object()) {
      return absl::DataLossError(
          absl::StrCat("line ", line_no, ": record is not an object"));
    }
    auto id = record.find("id");
    auto text = record.find("text");
    if (id == record.end() || !id->is_string() || text == record.end() ||
        !text->is_string()) {
      return absl::DataLossError(absl::StrCat(
          "line ", line_no, ": record needs string fields 'id' and 'text'"));
    }
    RawDocument doc;
    doc.id = id->get<std::string>();
    doc.text = text->get<std::string>();
    if (auto label = record.find("label");
        label != record.end() && !label->is_null()) {
      if (!label->is_string()) {
        return absl::DataLossError(
            absl::StrCat("line ", line_no, ": 'label' must be a string"));
      }
      doc.label = label->get<std::string>();
    }
    if (doc.id.empty()) {
      return absl::DataLossError(absl::StrCat("line ", line_no, ": empty id"));
    }
    if (!ids.insert(doc.id).second) {
      return absl::DataLossError(
          absl::StrCat("line ", line_no, ": duplicate id '", doc.id, "'"));
    }
    docs.push_back(std::move(doc));
  }
  if (in.bad()) return absl::DataLossError("read error");
  return docs;
}

absl::StatusOr<std::vector<RawDocument>> LoadCorpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ReadCorpus(in);
}

void WriteCorpus(std::span<const RawDocument> docs, std::ostream& out) {
  for (const RawDocument& doc : docs) {
    json record = {{"id", doc.id}, {"text", doc.text}};
    if (doc.label) record["label"] = *doc.label;
    out << record.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

absl::Status SaveCorpus(std::span<const RawDocument> docs,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot open ", path));
  WriteCorpus(docs, out);
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace dptext
