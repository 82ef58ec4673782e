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

#include <cmath>

#include "dptext/feature_vector.h"
#include "dptext/gradient_vector.h"

namespace dptext {

bool GradientVector::AllFinite() const {
  for (const double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double GradientVector::L2Norm() const {
  double sum_sq = 0.0;
  for (const double v : values_) sum_sq += v * v;
  return std::sqrt(sum_sq);
}

double FeatureVector::L2Norm() const {
  double sum_sq = 0.0;
  for (const auto& [index, weight] : entries) sum_sq += weight * weight;
  return std::sqrt(sum_sq);
}

}  // namespace dptext
