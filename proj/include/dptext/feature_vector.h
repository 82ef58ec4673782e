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

#ifndef DPTEXT_FEATURE_VECTOR_H_
#define DPTEXT_FEATURE_VECTOR_H_

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace dptext {

// Sparse non-negative feature vector over a vocabulary of size
// num_features. Entries are kept sorted by index with no duplicates.
struct FeatureVector {
  using Entry = std::pair<uint32_t, double>;

  std::vector<Entry> entries;
  size_t num_features = 0;

  double L2Norm() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

}  // namespace dptext

#endif  // DPTEXT_FEATURE_VECTOR_H_
