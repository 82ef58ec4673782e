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

#include "dptext/metrics.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "dptext/numeric_text.h"

namespace dptext {
namespace {

double SafeRatio(uint64_t num, uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

struct ClassScores {
  double precision;
  double recall;
  double f1;
};

ClassScores ScoreClass(const ClassCounts& c) {
  const double p = SafeRatio(c.tp, c.tp + c.fp);
  const double r = SafeRatio(c.tp, c.tp + c.fn);
  return {p, r, F1Score(p, r)};
}

}  // namespace

ConfusionCounts ConfusionCounts::FromBinary(uint64_t tp, uint64_t fp,
                                            uint64_t fn, uint64_t tn) {
  ConfusionCounts counts;
  counts.total = tp + fp + fn + tn;
  // Class 0 sees the same table with roles swapped.
  counts.per_class = {ClassCounts{tn, fn, fp, tp}, ClassCounts{tp, fp, fn, tn}};
  return counts;
}

uint64_t ConfusionCounts::correct() const {
  uint64_t sum = 0;
  for (const ClassCounts& c : per_class) sum += c.tp;
  return sum;
}

absl::string_view AveragingName(Averaging averaging) {
  return averaging == Averaging::kMacro ? "macro" : "binary_positive_class";
}

Averaging DefaultAveraging(size_t num_classes) {
  return num_classes == 2 ? Averaging::kBinaryPositiveClass
                          : Averaging::kMacro;
}

absl::StatusOr<ConfusionCounts> Confusion(std::span<const size_t> preds,
                                          std::span<const size_t> labels,
                                          size_t num_classes) {
  if (preds.size() != labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("length mismatch: ", preds.size(), " predictions vs ",
                     labels.size(), " labels"));
  }
  if (preds.empty()) return absl::InvalidArgumentError("no predictions");
  if (num_classes == 0) return absl::InvalidArgumentError("no classes");
  ConfusionCounts counts;
  counts.per_class.resize(num_classes);
  counts.total = preds.size();
  for (size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] >= num_classes || labels[i] >= num_classes) {
      return absl::InvalidArgumentError(
          absl::StrCat("class index out of range at position ", i));
    }
    if (preds[i] == labels[i]) {
      ++counts.per_class[preds[i]].tp;
    } else {
      ++counts.per_class[preds[i]].fp;
      ++counts.per_class[labels[i]].fn;
    }
  }
  for (ClassCounts& c : counts.per_class) {
    c.tn = counts.total - c.tp - c.fp - c.fn;
  }
  return counts;
}

double F1Score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

MetricsReport Metrics(const ConfusionCounts& counts, Averaging averaging) {
  MetricsReport report;
  report.averaging = averaging;
  report.accuracy = SafeRatio(counts.correct(), counts.total);
  if (counts.per_class.empty()) return report;

  if (averaging == Averaging::kBinaryPositiveClass) {
    const ClassCounts& positive =
        counts.per_class[counts.per_class.size() > 1 ? 1 : 0];
    const ClassScores s = ScoreClass(positive);
    report.precision = s.precision;
    report.recall = s.recall;
    report.f1 = s.f1;
    return report;
  }
  for (const ClassCounts& c : counts.per_class) {
    const ClassScores s = ScoreClass(c);
    report.precision += s.precision;
    report.recall += s.recall;
    report.f1 += s.f1;
  }
  const double k = static_cast<double>(counts.per_class.size());
  report.precision /= k;
  report.recall /= k;
  report.f1 /= k;
  return report;
}

std::string FormatMetricsCsvRow(absl::string_view model_tag,
                                const MetricsReport& report) {
  return absl::StrFormat("%s,%.4f,%.4f,%.4f,%.4f", model_tag, report.accuracy,
                         report.precision, report.recall, report.f1);
}

std::optional<MetricsCsvRow> ParseMetricsCsvRow(absl::string_view line) {
  const std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
  if (fields.size() != 5) return std::nullopt;
  MetricsCsvRow row;
  row.model_tag = std::string(fields[0]);
  double* targets[] = {&row.accuracy, &row.precision, &row.recall, &row.f1};
  for (size_t i = 0; i < 4; ++i) {
    const auto v = ParseDouble(fields[i + 1]);
    if (!v) return std::nullopt;
    *targets[i] = *v;
  }
  return row;
}

}  // namespace dptext
