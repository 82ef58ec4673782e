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

#ifndef DPTEXT_MODEL_H_
#define DPTEXT_MODEL_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptext/feature_vector.h"
#include "dptext/gradient_vector.h"

namespace dptext {

// Parameters of a K-class multinomial logistic regression over V features.
//
// Flattened layout (shared with GradientVector): the K x V weight matrix
// row-major by class, followed by the K biases.
class ModelParams {
 public:
  // All-zero parameters. Requires num_classes >= 2 and num_features >= 1.
  static absl::StatusOr<ModelParams> Zeros(size_t num_classes,
                                           size_t num_features);

  // Rebuilds parameters from a flattened vector of size K*V + K.
  static absl::StatusOr<ModelParams> FromFlat(size_t num_classes,
                                              size_t num_features,
                                              std::span<const double> flat);

  size_t num_classes() const { return num_classes_; }
  size_t num_features() const { return num_features_; }
  size_t flat_size() const { return flat_.size(); }

  double weight(size_t k, size_t j) const {
    return flat_[k * num_features_ + j];
  }
  double bias(size_t k) const { return flat_[num_classes_ * num_features_ + k]; }

  // Row k of the weight matrix.
  std::span<const double> weights(size_t k) const {
    return std::span<const double>(flat_).subspan(k * num_features_,
                                                  num_features_);
  }
  std::span<const double> biases() const {
    return std::span<const double>(flat_).subspan(num_classes_ *
                                                  num_features_);
  }

  std::span<const double> flat() const { return flat_; }
  std::span<double> mutable_flat() { return flat_; }

  bool AllFinite() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  ModelParams(size_t num_classes, size_t num_features,
              std::vector<double> flat)
      : num_classes_(num_classes),
        num_features_(num_features),
        flat_(std::move(flat)) {}

  size_t num_classes_ = 0;
  size_t num_features_ = 0;
  std::vector<double> flat_;
};

struct LabeledExample {
  FeatureVector features;
  size_t label = 0;
};

// softmax(W x + b), evaluated with max-subtraction.
absl::StatusOr<std::vector<double>> PredictProba(const ModelParams& theta,
                                                 const FeatureVector& x);

// Argmax of PredictProba; ties go to the lowest class index.
absl::StatusOr<size_t> Predict(const ModelParams& theta,
                               const FeatureVector& x);

// Mean cross-entropy over `batch` plus (l2 / 2) * ||W||_F^2. Biases are not
// regularized.
absl::StatusOr<double> Loss(const ModelParams& theta,
                            std::span<const LabeledExample> batch, double l2);

// Analytic gradient of Loss in the flattened layout.
absl::StatusOr<GradientVector> Gradient(const ModelParams& theta,
                                        std::span<const LabeledExample> batch,
                                        double l2);

// Gradient of each single-example cross-entropy term (no regularizer).
// Their mean equals Gradient(theta, batch, 0).
absl::StatusOr<std::vector<GradientVector>> PerExampleGradients(
    const ModelParams& theta, std::span<const LabeledExample> batch);

// Checkpoint text format, version 1:
//
//   dptext-model 1
//   num_classes <K>
//   num_features <V>
//   order weights_row_major_then_biases
//   values <K*V+K>
//   <one value per line, shortest round-trip decimal>
//
// Reading back a written checkpoint reproduces every parameter bitwise.
void WriteCheckpoint(const ModelParams& theta, std::ostream& out);
absl::StatusOr<ModelParams> ReadCheckpoint(std::istream& in);

absl::Status SaveCheckpoint(const ModelParams& theta, const std::string& path);
absl::StatusOr<ModelParams> LoadCheckpoint(const std::string& path);

}  // namespace dptext

#endif  // DPTEXT_MODEL_H_
