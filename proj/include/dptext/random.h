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

#ifndef DPTEXT_RANDOM_H_
#define DPTEXT_RANDOM_H_

#include <cstdint>
#include <span>
#include "absl/strings/string_view.h"
#include <utility>

namespace dptext {

// Counter-based pseudo-random stream.
//
// Draw n of a stream is a pure function of (key, n), so a stream can be
// reproduced from its seed and position alone, and Split() derives child
// streams whose draws do not depend on how far the parent has advanced.
// Output word n is the SplitMix64 finalizer applied to key + (n + 1) * gamma.
//
// The Gaussian and uniform transforms are implemented here rather than via
// <random> distributions, whose outputs are implementation-defined; the
// results are therefore bitwise reproducible across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed);

  // Independent child stream identified by `stream_id`.
  RandomStream Split(uint64_t stream_id) const;

  uint64_t NextU64();

  // Uniform on [0, 1) with 53 bits of resolution.
  double NextUniform();

  // Standard normal draw via Box-Muller (cosine branch). Consumes exactly two
  // words of the stream.
  double NextGaussian();

  // Uniform integer in [0, bound). Rejection sampling, so the number of words
  // consumed is data dependent but still deterministic. `bound` must be > 0.
  uint64_t NextIndex(uint64_t bound);

  uint64_t key() const { return key_; }
  uint64_t position() const { return counter_; }

 private:
  RandomStream(uint64_t key, uint64_t counter) : key_(key), counter_(counter) {}

  uint64_t key_;
  uint64_t counter_ = 0;
};

// SplitMix64 finalizer.
uint64_t Mix64(uint64_t x);

// Seeded 64-bit fingerprint of a byte string (FNV-1a followed by Mix64).
uint64_t Fingerprint64(uint64_t seed, absl::string_view bytes);

// Fisher-Yates shuffle drawing from `rng`, highest index first.
template <typename T>
void Shuffle(std::span<T> items, RandomStream& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.NextIndex(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace dptext

#endif  // DPTEXT_RANDOM_H_
