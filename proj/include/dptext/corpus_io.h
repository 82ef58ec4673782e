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

#ifndef DPTEXT_CORPUS_IO_H_
#define DPTEXT_CORPUS_IO_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptext/text_pipeline.h"

namespace dptext {

// Corpus files are JSON Lines, UTF-8: one object per line with string fields
// "id" and "text" and an optional string "label". Blank lines are skipped.
// Errors name the 1-based line number. Ids must be non-empty and unique.
absl::StatusOr<std::vector<RawDocument>> ReadCorpus(std::istream& in);
absl::StatusOr<std::vector<RawDocument>> LoadCorpus(const std::string& path);

// Writes one compact JSON object per document with keys in sorted order.
void WriteCorpus(std::span<const RawDocument> docs, std::ostream& out);
absl::Status SaveCorpus(std::span<const RawDocument> docs,
                        const std::string& path);

}  // namespace dptext

#endif  // DPTEXT_CORPUS_IO_H_
