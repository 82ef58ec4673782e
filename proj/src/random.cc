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

#include "dptext/random.h"

#include <cmath>
#include <numbers>

namespace dptext {
namespace {

constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr uint64_t kSplitSalt = 0xd1b54a32d192ed03ULL;
constexpr double kTwoPow53Inv = 0x1.0p-53;

}  // namespace

uint64_t Mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t Fingerprint64(uint64_t seed, absl::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL ^ Mix64(seed);
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return Mix64(h ^ bytes.size());
}

RandomStream::RandomStream(uint64_t seed) : key_(Mix64(seed)) {}

RandomStream RandomStream::Split(uint64_t stream_id) const {
  return RandomStream(Mix64(key_ ^ Mix64(stream_id + kSplitSalt)), 0);
}

uint64_t RandomStream::NextU64() {
  ++counter_;
  return Mix64(key_ + counter_ * kGamma);
}

double RandomStream::NextUniform() {
  return static_cast<double>(NextU64() >> 11) * kTwoPow53Inv;
}

double RandomStream::NextGaussian() {
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = static_cast<double>((NextU64() >> 11) + 1) * kTwoPow53Inv;
  const double u2 = NextUniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

uint64_t RandomStream::NextIndex(uint64_t bound) {
  // Reject the top partial block so every residue is equally likely.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  uint64_t x = NextU64();
  while (x >= limit) x = NextU64();
  return x % bound;
}

}  // namespace dptext
