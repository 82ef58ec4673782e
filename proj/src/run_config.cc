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

#include "dptext/run_config.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "dptext/numeric_text.h"
#include "dptext/status_macros.h"

namespace dptext {
namespace {

absl::Status BadValue(absl::string_view key, absl::string_view value) {
  return absl::InvalidArgumentError(
      absl::StrCat("invalid value '", value, "' for '", key, "'"));
}

absl::Status SetDouble(absl::string_view key, absl::string_view value,
                       double& field) {
  const auto v = ParseDouble(value);
  if (!v) return BadValue(key, value);
  field = *v;
  return absl::OkStatus();
}

absl::Status SetUint(absl::string_view key, absl::string_view value,
                     uint64_t& field) {
  const auto v = ParseUint64(value);
  if (!v) return BadValue(key, value);
  field = *v;
  return absl::OkStatus();
}

absl::Status SetOptionalDouble(absl::string_view key, absl::string_view value,
                               std::optional<double>& field) {
  if (value == "none" || value.empty()) {
    field.reset();
    return absl::OkStatus();
  }
  const auto v = ParseDouble(value);
  if (!v) return BadValue(key, value);
  field = *v;
  return absl::OkStatus();
}

}  // namespace

absl::string_view TrainModeName(TrainMode mode) {
  return mode == TrainMode::kDp ? "dp" : "baseline";
}

absl::Status RunConfig::Set(absl::string_view key, absl::string_view value) {
  if (key == "lr") return SetDouble(key, value, train.lr);
  if (key == "epochs") return SetUint(key, value, train.epochs);
  if (key == "batch_size") return SetUint(key, value, train.batch_size);
  if (key == "clip") return SetDouble(key, value, train.clip);
  if (key == "epsilon") return SetDouble(key, value, train.epsilon);
  if (key == "delta") return SetDouble(key, value, train.delta);
  if (key == "seed") return SetUint(key, value, train.seed);
  if (key == "l2") return SetDouble(key, value, train.l2);
  if (key == "epsilon_cap") {
    return SetOptionalDouble(key, value, train.epsilon_cap);
  }
  if (key == "delta_cap") return SetOptionalDouble(key, value, train.delta_cap);
  if (key == "clip_mode") {
    const auto mode = ParseClipMode(value);
    if (!mode) return BadValue(key, value);
    train.clip_mode = *mode;
    return absl::OkStatus();
  }
  if (key == "sigma_mode") {
    const auto mode = ParseSigmaMode(value);
    if (!mode) return BadValue(key, value);
    train.sigma_mode = *mode;
    return absl::OkStatus();
  }
  if (key == "noise") {
    const auto enabled = ParseBool(value);
    if (!enabled) return BadValue(key, value);
    train.noise_enabled = *enabled;
    return absl::OkStatus();
  }
  if (key == "mode") {
    if (value == "dp") {
      mode = TrainMode::kDp;
    } else if (value == "baseline") {
      mode = TrainMode::kBaseline;
    } else {
      return BadValue(key, value);
    }
    return absl::OkStatus();
  }
  if (key == "features") {
    const auto scheme = ParseFeatureScheme(value);
    if (!scheme) return BadValue(key, value);
    features = *scheme;
    return absl::OkStatus();
  }
  if (key == "min_doc_freq") return SetUint(key, value, min_doc_freq);
  for (const auto& [name, field] :
       {std::pair<absl::string_view, std::string*>{"corpus", &corpus_path},
        {"stopwords", &stopwords_path},
        {"vocab", &vocab_path},
        {"model", &model_path},
        {"report", &report_path},
        {"metrics", &metrics_path}}) {
    if (key == name) {
      *field = std::string(value);
      return absl::OkStatus();
    }
  }
  if (key == "train_fraction") return SetDouble(key, value, train_fraction);
  if (key == "val_fraction") return SetDouble(key, value, val_fraction);
  if (key == "test_fraction") return SetDouble(key, value, test_fraction);
  if (key == "split_seed") return SetUint(key, value, split_seed);
  return absl::InvalidArgumentError(absl::StrCat("unknown config key '", key,
                                                 "'"));
}

absl::Status RunConfig::Validate() const {
  for (const double f : {train_fraction, val_fraction, test_fraction}) {
    if (!(f > 0.0) || !std::isfinite(f)) {
      return absl::InvalidArgumentError(
          "split fractions must all be positive");
    }
  }
  const double sum = train_fraction + val_fraction + test_fraction;
  if (std::abs(sum - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("split fractions sum to ", sum, ", expected 1"));
  }
  if (min_doc_freq == 0) {
    return absl::InvalidArgumentError("min_doc_freq must be >= 1");
  }
  return mode == TrainMode::kDp ? train.Validate() : train.ValidateBasic();
}

absl::Status ApplyConfigText(absl::string_view text, RunConfig& config) {
  size_t line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": expected 'key = value'"));
    }
    const absl::string_view key = absl::StripAsciiWhitespace(line.substr(0, eq));
    const absl::string_view value =
        absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (const absl::Status s = config.Set(key, value); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": ", s.message()));
    }
  }
  return absl::OkStatus();
}

absl::Status ApplyConfigFile(const std::string& path, RunConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ApplyConfigText(buffer.str(), config);
}

}  // namespace dptext
