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

#include "dptext/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "absl/strings/str_cat.h"
#include "dptext/numeric_text.h"
#include "dptext/status_macros.h"

namespace dptext {
namespace {

constexpr char kCheckpointMagic[] = "dptext-model";
constexpr int kCheckpointVersion = 1;
constexpr char kFlatteningOrder[] = "weights_row_major_then_biases";

absl::Status CheckFeatures(const ModelParams& theta, const FeatureVector& x) {
  if (x.num_features != theta.num_features()) {
    return absl::InvalidArgumentError(
        absl::StrCat("feature dimension mismatch: model has ",
                     theta.num_features(), " features, input has ",
                     x.num_features));
  }
  for (const auto& [index, weight] : x.entries) {
    if (index >= theta.num_features()) {
      return absl::InvalidArgumentError(
          absl::StrCat("feature index ", index, " out of range [0, ",
                       theta.num_features(), ")"));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckBatch(const ModelParams& theta,
                        std::span<const LabeledExample> batch) {
  if (batch.empty()) return absl::InvalidArgumentError("empty batch");
  for (const LabeledExample& example : batch) {
    RETURN_IF_ERROR(CheckFeatures(theta, example.features));
    if (example.label >= theta.num_classes()) {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", example.label, " out of range for ",
                       theta.num_classes(), " classes"));
    }
  }
  return absl::OkStatus();
}

void Logits(const ModelParams& theta, const FeatureVector& x,
            std::vector<double>& out) {
  const size_t k_count = theta.num_classes();
  out.assign(k_count, 0.0);
  for (size_t k = 0; k < k_count; ++k) {
    const std::span<const double> row = theta.weights(k);
    double z = theta.bias(k);
    for (const auto& [index, weight] : x.entries) z += row[index] * weight;
    out[k] = z;
  }
}

// Replaces logits with probabilities; returns log of the normalizer relative
// to the max logit so callers can form log-probabilities.
double SoftmaxInPlace(std::vector<double>& z, double& max_logit) {
  max_logit = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - max_logit);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return std::log(sum);
}

// Adds the cross-entropy gradient contribution of one example to `acc`.
void AccumulateExample(const ModelParams& theta, const LabeledExample& example,
                       std::vector<double>& probs, std::span<double> acc) {
  Logits(theta, example.features, probs);
  double max_logit = 0.0;
  SoftmaxInPlace(probs, max_logit);
  const size_t v_count = theta.num_features();
  const size_t bias_offset = theta.num_classes() * v_count;
  for (size_t k = 0; k < theta.num_classes(); ++k) {
    const double residual = probs[k] - (example.label == k ? 1.0 : 0.0);
    for (const auto& [index, weight] : example.features.entries) {
      acc[k * v_count + index] += residual * weight;
    }
    acc[bias_offset + k] += residual;
  }
}

}  // namespace

absl::StatusOr<ModelParams> ModelParams::Zeros(size_t num_classes,
                                               size_t num_features) {
  if (num_classes < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 classes, got ", num_classes));
  }
  if (num_features < 1) {
    return absl::InvalidArgumentError("need at least 1 feature");
  }
  return ModelParams(num_classes, num_features,
                     std::vector<double>(num_classes * num_features +
                                             num_classes,
                                         0.0));
}

absl::StatusOr<ModelParams> ModelParams::FromFlat(
    size_t num_classes, size_t num_features, std::span<const double> flat) {
  ASSIGN_OR_RETURN(ModelParams params, Zeros(num_classes, num_features));
  if (flat.size() != params.flat_size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", params.flat_size(), " parameters, got ",
                     flat.size()));
  }
  std::copy(flat.begin(), flat.end(), params.flat_.begin());
  if (!params.AllFinite()) {
    return absl::InvalidArgumentError("non-finite parameter value");
  }
  return params;
}

bool ModelParams::AllFinite() const {
  return std::all_of(flat_.begin(), flat_.end(),
                     [](double v) { return std::isfinite(v); });
}

absl::StatusOr<std::vector<double>> PredictProba(const ModelParams& theta,
                                                 const FeatureVector& x) {
  RETURN_IF_ERROR(CheckFeatures(theta, x));
  std::vector<double> probs;
  Logits(theta, x, probs);
  double max_logit = 0.0;
  SoftmaxInPlace(probs, max_logit);
  return probs;
}

absl::StatusOr<size_t> Predict(const ModelParams& theta,
                               const FeatureVector& x) {
  ASSIGN_OR_RETURN(std::vector<double> probs, PredictProba(theta, x));
  // max_element returns the first maximum, which is the tie-break we want.
  return static_cast<size_t>(
      std::max_element(probs.begin(), probs.end()) - probs.begin());
}

absl::StatusOr<double> Loss(const ModelParams& theta,
                            std::span<const LabeledExample> batch, double l2) {
  RETURN_IF_ERROR(CheckBatch(theta, batch));
  std::vector<double> z;
  double total = 0.0;
  for (const LabeledExample& example : batch) {
    Logits(theta, example.features, z);
    const double label_logit = z[example.label];
    double max_logit = 0.0;
    const double log_norm = SoftmaxInPlace(z, max_logit);
    total += -(label_logit - max_logit - log_norm);
  }
  double loss = total / static_cast<double>(batch.size());
  if (l2 > 0.0) {
    double sq = 0.0;
    for (size_t k = 0; k < theta.num_classes(); ++k) {
      for (const double w : theta.weights(k)) sq += w * w;
    }
    loss += 0.5 * l2 * sq;
  }
  return loss;
}

absl::StatusOr<GradientVector> Gradient(const ModelParams& theta,
                                        std::span<const LabeledExample> batch,
                                        double l2) {
  RETURN_IF_ERROR(CheckBatch(theta, batch));
  GradientVector grad(theta.flat_size());
  std::vector<double> probs;
  for (const LabeledExample& example : batch) {
    AccumulateExample(theta, example, probs, grad.values());
  }
  const double n = static_cast<double>(batch.size());
  for (double& g : grad) g /= n;
  if (l2 > 0.0) {
    const size_t weight_count = theta.num_classes() * theta.num_features();
    const std::span<const double> flat = theta.flat();
    for (size_t i = 0; i < weight_count; ++i) grad[i] += l2 * flat[i];
  }
  return grad;
}

absl::StatusOr<std::vector<GradientVector>> PerExampleGradients(
    const ModelParams& theta, std::span<const LabeledExample> batch) {
  RETURN_IF_ERROR(CheckBatch(theta, batch));
  std::vector<GradientVector> grads;
  grads.reserve(batch.size());
  std::vector<double> probs;
  for (const LabeledExample& example : batch) {
    GradientVector g(theta.flat_size());
    AccumulateExample(theta, example, probs, g.values());
    grads.push_back(std::move(g));
  }
  return grads;
}

void WriteCheckpoint(const ModelParams& theta, std::ostream& out) {
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n'
      << "num_classes " << theta.num_classes() << '\n'
      << "num_features " << theta.num_features() << '\n'
      << "order " << kFlatteningOrder << '\n'
      << "values " << theta.flat_size() << '\n';
  for (const double v : theta.flat()) out << FormatDouble(v) << '\n';
}

absl::StatusOr<ModelParams> ReadCheckpoint(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  auto read_header = [&](absl::string_view key) -> absl::StatusOr<std::string> {
    if (!std::getline(in, line)) {
      return absl::DataLossError(
          absl::StrCat("checkpoint truncated before '", key, "'"));
    }
    ++line_no;
    std::istringstream fields(line);
    std::string name, value, extra;
    fields >> name >> value;
    if (name != key || value.empty() || (fields >> extra)) {
      return absl::DataLossError(absl::StrCat("checkpoint line ", line_no,
                                              ": expected '", key,
                                              " <value>', got '", line, "'"));
    }
    return value;
  };

  ASSIGN_OR_RETURN(std::string version, read_header(kCheckpointMagic));
  if (version != std::to_string(kCheckpointVersion)) {
    return absl::DataLossError(
        absl::StrCat("unsupported checkpoint version ", version));
  }
  ASSIGN_OR_RETURN(std::string k_text, read_header("num_classes"));
  ASSIGN_OR_RETURN(std::string v_text, read_header("num_features"));
  ASSIGN_OR_RETURN(std::string order, read_header("order"));
  ASSIGN_OR_RETURN(std::string count_text, read_header("values"));
  if (order != kFlatteningOrder) {
    return absl::DataLossError(
        absl::StrCat("unsupported flattening order '", order, "'"));
  }
  const auto k_count = ParseUint64(k_text);
  const auto v_count = ParseUint64(v_text);
  const auto value_count = ParseUint64(count_text);
  if (!k_count || !v_count || !value_count) {
    return absl::DataLossError("malformed checkpoint dimensions");
  }
  if (*value_count != *k_count * *v_count + *k_count) {
    return absl::DataLossError(absl::StrCat(
        "checkpoint declares ", *value_count, " values but K=", *k_count,
        ", V=", *v_count, " needs ", *k_count * *v_count + *k_count));
  }

  std::vector<double> flat;
  flat.reserve(*value_count);
  while (flat.size() < *value_count && std::getline(in, line)) {
    ++line_no;
    const auto value = ParseDouble(line);
    if (!value) {
      return absl::DataLossError(absl::StrCat(
          "checkpoint line ", line_no, ": malformed value '", line, "'"));
    }
    flat.push_back(*value);
  }
  if (flat.size() != *value_count) {
    return absl::DataLossError(absl::StrCat("checkpoint truncated: expected ",
                                            *value_count, " values, found ",
                                            flat.size()));
  }
  if (std::getline(in, line) && !line.empty()) {
    return absl::DataLossError("trailing data after checkpoint values");
  }
  return ModelParams::FromFlat(*k_count, *v_count, flat);
}

absl::Status SaveCheckpoint(const ModelParams& theta, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot open ", path));
  }
  WriteCheckpoint(theta, out);
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<ModelParams> LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ReadCheckpoint(in);
}

}  // namespace dptext
