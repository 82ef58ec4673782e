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

#ifndef DPTEXT_METRICS_H_
#define DPTEXT_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"

namespace dptext {

// One-vs-rest counts for a single class.
struct ClassCounts {
  uint64_t tp = 0;
  uint64_t fp = 0;
  uint64_t fn = 0;
  uint64_t tn = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct ConfusionCounts {
  std::vector<ClassCounts> per_class;
  uint64_t total = 0;

  // Two-class counts with class 1 as the positive class.
  static ConfusionCounts FromBinary(uint64_t tp, uint64_t fp, uint64_t fn,
                                    uint64_t tn);

  // Number of correct predictions, i.e. the sum of per-class tp.
  uint64_t correct() const;
};

enum class Averaging {
  // Precision/recall/F1 of class 1 only.
  kBinaryPositiveClass,
  // Unweighted mean of per-class precision/recall/F1.
  kMacro,
};

absl::string_view AveragingName(Averaging averaging);

// Binary for two classes, macro otherwise.
Averaging DefaultAveraging(size_t num_classes);

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Averaging averaging = Averaging::kBinaryPositiveClass;
};

absl::StatusOr<ConfusionCounts> Confusion(std::span<const size_t> preds,
                                          std::span<const size_t> labels,
                                          size_t num_classes);

// Zero denominators give 0 rather than NaN.
MetricsReport Metrics(const ConfusionCounts& counts, Averaging averaging);

// Harmonic mean 2PR / (P + R); 0 when P + R == 0.
double F1Score(double precision, double recall);

// `model_tag,accuracy,precision,recall,f1` with four decimals, no newline.
std::string FormatMetricsCsvRow(absl::string_view model_tag,
                                const MetricsReport& report);
inline constexpr absl::string_view kMetricsCsvHeader =
    "model_tag,accuracy,precision,recall,f1";

struct MetricsCsvRow {
  std::string model_tag;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};
std::optional<MetricsCsvRow> ParseMetricsCsvRow(absl::string_view line);

}  // namespace dptext

#endif  // DPTEXT_METRICS_H_
