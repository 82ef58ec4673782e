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

#ifndef DPTEXT_RUN_CONFIG_H_
#define DPTEXT_RUN_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptext/text_pipeline.h"
#include "dptext/trainer.h"

namespace dptext {

enum class TrainMode { kDp, kBaseline };

absl::string_view TrainModeName(TrainMode mode);

// Everything a CLI run needs: training hyperparameters, featurization, file
// paths and the train/val/test split.
struct RunConfig {
  TrainConfig train;
  TrainMode mode = TrainMode::kDp;
  FeatureScheme features = FeatureScheme::kTfidf;
  uint64_t min_doc_freq = 1;

  std::string corpus_path;
  std::string stopwords_path;  // Empty selects the built-in list.
  std::string vocab_path;
  std::string model_path;
  std::string report_path;
  std::string metrics_path;

  double train_fraction = 0.8;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
  uint64_t split_seed = 0;

  // Sets one field from its config-file key (e.g. "batch_size", "clip_mode").
  // Unknown keys and unparsable values are errors.
  absl::Status Set(absl::string_view key, absl::string_view value);

  absl::Status Validate() const;
};

// Applies a flat `key = value` config file to `config`. Blank lines and lines
// starting with '#' are ignored. Errors name the line number.
absl::Status ApplyConfigText(absl::string_view text, RunConfig& config);
absl::Status ApplyConfigFile(const std::string& path, RunConfig& config);

}  // namespace dptext

#endif  // DPTEXT_RUN_CONFIG_H_
