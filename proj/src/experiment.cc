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

#include "dptext/experiment.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "dptext/numeric_text.h"
#include "dptext/random.h"
#include "dptext/status_macros.h"

namespace dptext {

absl::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
    case Split::kAll:
      return "all";
  }
  return "all";
}

std::optional<Split> ParseSplit(absl::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  if (name == "all") return Split::kAll;
  return std::nullopt;
}

absl::StatusOr<std::vector<std::string>> CollectLabels(
    std::span<const RawDocument> docs) {
  std::set<std::string> labels;
  for (const RawDocument& doc : docs) {
    if (!doc.label) {
      return absl::InvalidArgumentError(
          absl::StrCat("document '", doc.id, "' has no label"));
    }
    labels.insert(*doc.label);
  }
  if (labels.size() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need at least 2 distinct labels, found ", labels.size()));
  }
  return std::vector<std::string>(labels.begin(), labels.end());
}

std::vector<Split> AssignSplits(std::span<const RawDocument> docs,
                                const RunConfig& config) {
  const size_t n = docs.size();
  std::vector<std::tuple<uint64_t, absl::string_view, size_t>> keyed;
  keyed.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    keyed.emplace_back(Fingerprint64(config.split_seed, docs[i].id),
                       docs[i].id, i);
  }
  std::sort(keyed.begin(), keyed.end());

  auto share = [n](double fraction) {
    return static_cast<size_t>(std::llround(static_cast<double>(n) * fraction));
  };
  const size_t n_train = std::min(n, share(config.train_fraction));
  const size_t n_val = std::min(n - n_train, share(config.val_fraction));

  std::vector<Split> splits(n, Split::kTest);
  for (size_t rank = 0; rank < n; ++rank) {
    const size_t doc = std::get<2>(keyed[rank]);
    if (rank < n_train) {
      splits[doc] = Split::kTrain;
    } else if (rank < n_train + n_val) {
      splits[doc] = Split::kVal;
    }
  }
  return splits;
}

TokenList CleanedTokens(const RawDocument& doc) {
  return absl::StrSplit(doc.text, absl::ByAnyChar(" \t"), absl::SkipEmpty());
}

const Dataset& PreparedData::Get(Split split) const {
  switch (split) {
    case Split::kTrain:
      return train;
    case Split::kVal:
      return val;
    case Split::kTest:
      return test;
    case Split::kAll:
      return all;
  }
  return all;
}

absl::StatusOr<PreparedData> PrepareData(std::span<const RawDocument> docs,
                                         const Vocabulary& vocab,
                                         const RunConfig& config) {
  if (docs.empty()) return absl::InvalidArgumentError("empty corpus");
  PreparedData data;
  ASSIGN_OR_RETURN(data.labels, CollectLabels(docs));
  for (Dataset* d : {&data.train, &data.val, &data.test, &data.all}) {
    d->num_classes = data.labels.size();
    d->num_features = vocab.size();
  }
  const std::vector<Split> splits = AssignSplits(docs, config);
  for (size_t i = 0; i < docs.size(); ++i) {
    LabeledExample example;
    example.features = Featurize(CleanedTokens(docs[i]), vocab, config.features);
    example.label = static_cast<size_t>(
        std::lower_bound(data.labels.begin(), data.labels.end(),
                         *docs[i].label) -
        data.labels.begin());
    data.all.examples.push_back(example);
    switch (splits[i]) {
      case Split::kTrain:
        data.train.examples.push_back(std::move(example));
        break;
      case Split::kVal:
        data.val.examples.push_back(std::move(example));
        break;
      default:
        data.test.examples.push_back(std::move(example));
        break;
    }
  }
  return data;
}

absl::StatusOr<MetricsReport> EvaluateModel(const ModelParams& params,
                                            const Dataset& data) {
  if (data.examples.empty()) {
    return absl::InvalidArgumentError("evaluation split is empty");
  }
  if (params.num_features() != data.num_features) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: model has V=", params.num_features(),
        ", vocabulary has V=", data.num_features));
  }
  if (params.num_classes() != data.num_classes) {
    return absl::InvalidArgumentError(absl::StrCat(
        "class count mismatch: model has K=", params.num_classes(),
        ", corpus has K=", data.num_classes));
  }
  std::vector<size_t> preds;
  std::vector<size_t> labels;
  preds.reserve(data.examples.size());
  labels.reserve(data.examples.size());
  for (const LabeledExample& ex : data.examples) {
    ASSIGN_OR_RETURN(const size_t pred, Predict(params, ex.features));
    preds.push_back(pred);
    labels.push_back(ex.label);
  }
  ASSIGN_OR_RETURN(const ConfusionCounts counts,
                   Confusion(preds, labels, params.num_classes()));
  return Metrics(counts, DefaultAveraging(params.num_classes()));
}

void WriteRunReport(const RunConfig& config, const TrainReport& report,
                    std::ostream& out) {
  const TrainConfig& t = config.train;
  auto line = [&out](absl::string_view key, absl::string_view value) {
    out << key << " = " << value << '\n';
  };
  auto optional_text = [](const std::optional<double>& v) {
    return v ? FormatDouble(*v) : std::string("none");
  };
  line("format", "dptext-run-report 1");
  line("mode", TrainModeName(config.mode));
  line("final_loss", FormatDouble(report.final_loss));
  line("epochs_run", absl::StrCat(report.epoch_losses.size()));
  for (size_t i = 0; i < report.epoch_losses.size(); ++i) {
    line(absl::StrCat("epoch_loss.", i + 1),
         FormatDouble(report.epoch_losses[i]));
  }
  line("steps_taken", absl::StrCat(report.steps_taken));
  line("planned_steps", absl::StrCat(report.planned_steps));
  line("early_stopped", report.early_stopped ? "true" : "false");
  line("sigma", FormatDouble(report.sigma));
  line("spent_epsilon", FormatDouble(report.spent_epsilon));
  line("spent_delta", FormatDouble(report.spent_delta));
  line("seed", absl::StrCat(t.seed));
  line("lr", FormatDouble(t.lr));
  line("epochs", absl::StrCat(t.epochs));
  line("batch_size", absl::StrCat(t.batch_size));
  line("clip", FormatDouble(t.clip));
  line("epsilon", FormatDouble(t.epsilon));
  line("delta", FormatDouble(t.delta));
  line("clip_mode", ClipModeName(t.clip_mode));
  line("sigma_mode", SigmaModeName(t.sigma_mode));
  line("noise", t.noise_enabled ? "true" : "false");
  line("l2", FormatDouble(t.l2));
  line("epsilon_cap", optional_text(t.epsilon_cap));
  line("delta_cap", optional_text(t.delta_cap));
  line("features", FeatureSchemeName(config.features));
  line("train_fraction", FormatDouble(config.train_fraction));
  line("val_fraction", FormatDouble(config.val_fraction));
  line("test_fraction", FormatDouble(config.test_fraction));
  line("split_seed", absl::StrCat(config.split_seed));
}

}  // namespace dptext
