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

#ifndef DPTEXT_EXPERIMENT_H_
#define DPTEXT_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dptext/metrics.h"
#include "dptext/model.h"
#include "dptext/run_config.h"
#include "dptext/text_pipeline.h"
#include "dptext/trainer.h"

namespace dptext {

// Glue between corpus files and the trainer: label indexing, the seeded
// train/val/test split, featurization and run reports.

enum class Split { kTrain, kVal, kTest, kAll };

absl::string_view SplitName(Split split);
std::optional<Split> ParseSplit(absl::string_view name);

// Sorted distinct labels; a document's class index is its label's position.
// Fails if a document has no label or fewer than two labels occur.
absl::StatusOr<std::vector<std::string>> CollectLabels(
    std::span<const RawDocument> docs);

// Split membership of each document (in input order). Documents are ordered
// by (Fingerprint64(split_seed, id), id) and cut into train/val/test by the
// configured fractions, so the result depends only on document ids and the
// seed, not on file order or path.
std::vector<Split> AssignSplits(std::span<const RawDocument> docs,
                                const RunConfig& config);

// Whitespace-separated tokens of an already cleaned document.
TokenList CleanedTokens(const RawDocument& doc);

struct PreparedData {
  std::vector<std::string> labels;
  Dataset train;
  Dataset val;
  Dataset test;
  Dataset all;

  const Dataset& Get(Split split) const;
};

// Featurizes a cleaned corpus against `vocab` and splits it.
absl::StatusOr<PreparedData> PrepareData(std::span<const RawDocument> docs,
                                         const Vocabulary& vocab,
                                         const RunConfig& config);

absl::StatusOr<MetricsReport> EvaluateModel(const ModelParams& params,
                                            const Dataset& data);

// Deterministic key-value run report. Wall time is left out so
// identical runs produce identical files.
void WriteRunReport(const RunConfig& config, const TrainReport& report,
                    std::ostream& out);

}  // namespace dptext

#endif  // DPTEXT_EXPERIMENT_H_
