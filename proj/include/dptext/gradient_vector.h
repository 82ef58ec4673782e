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

#ifndef DPTEXT_GRADIENT_VECTOR_H_
#define DPTEXT_GRADIENT_VECTOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace dptext {

// Dense vector of loss partial derivatives, one entry per model parameter, in
// the model's flattening order (weights row-major by class, then biases).
// Also used for noise draws and flattened parameter vectors, which share the
// layout.
class GradientVector {
 public:
  GradientVector() = default;
  explicit GradientVector(size_t dim) : values_(dim, 0.0) {}
  explicit GradientVector(std::vector<double> values)
      : values_(std::move(values)) {}
  GradientVector(std::initializer_list<double> values) : values_(values) {}

  size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator[](size_t i) { return values_[i]; }
  double operator[](size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool AllFinite() const;
  double L2Norm() const;

  friend bool operator==(const GradientVector&,
                         const GradientVector&) = default;

 private:
  std::vector<double> values_;
};

}  // namespace dptext

#endif  // DPTEXT_GRADIENT_VECTOR_H_
