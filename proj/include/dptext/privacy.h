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

#ifndef DPTEXT_PRIVACY_H_
#define DPTEXT_PRIVACY_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include "absl/strings/string_view.h"

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptext/gradient_vector.h"
#include "dptext/model.h"
#include "dptext/random.h"

namespace dptext {

// Per-step (epsilon, delta) privacy budget. Smaller epsilon means stronger
// protection; delta bounds the probability of exceeding it.
class PrivacyParams {
 public:
  // Requires epsilon > 0 (finite) and 0 < delta < 1.
  static absl::StatusOr<PrivacyParams> Create(double epsilon, double delta);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }

  friend bool operator==(const PrivacyParams&, const PrivacyParams&) = default;

 private:
  PrivacyParams(double epsilon, double delta)
      : epsilon_(epsilon), delta_(delta) {}

  double epsilon_;
  double delta_;
};

// Maximum L2 norm C of a gradient. +infinity is allowed and disables
// clipping.
class ClipNorm {
 public:
  static absl::StatusOr<ClipNorm> Create(double c);
  static ClipNorm Unbounded() {
    return ClipNorm(std::numeric_limits<double>::infinity());
  }

  double value() const { return c_; }

 private:
  explicit ClipNorm(double c) : c_(c) {}

  double c_;
};

enum class SigmaMode {
  // sigma = sqrt(2 ln(1/delta) / epsilon), independent of C.
  kLiteral,
  // The literal sigma multiplied by the clip norm C (standard Gaussian
  // mechanism calibration to L2 sensitivity).
  kSensitivity,
};

absl::string_view SigmaModeName(SigmaMode mode);
std::optional<SigmaMode> ParseSigmaMode(absl::string_view name);

// Isotropic Gaussian noise N(0, sigma^2 I).
struct NoiseSpec {
  double sigma = 0.0;
  bool scaled_by_sensitivity = false;
};

// Returns g * min(1, c / ||g||_2). When ||g||_2 <= c the input is returned
// unchanged (bitwise), which also covers the zero vector.
absl::StatusOr<GradientVector> ClipGradient(const GradientVector& g,
                                            ClipNorm c);

// Noise standard deviation for one update. In kSensitivity mode the clip
// norm must be finite.
absl::StatusOr<NoiseSpec> NoiseSigma(const PrivacyParams& params,
                                     SigmaMode mode = SigmaMode::kLiteral,
                                     ClipNorm clip = ClipNorm::Unbounded());

// `dim` independent N(0, sigma^2) draws taken from `rng` in ascending
// coordinate order, two stream words per coordinate. sigma == 0 returns the
// zero vector without advancing `rng`.
GradientVector SampleNoise(const NoiseSpec& spec, size_t dim,
                           RandomStream& rng);

// theta' = theta - lr * (clip(g, c) + noise), with noise drawn by
// SampleNoise(spec, theta.size(), rng). Returns the updated parameters.
absl::StatusOr<GradientVector> NoisyUpdate(const GradientVector& theta,
                                           const GradientVector& g, double lr,
                                           ClipNorm c, const NoiseSpec& spec,
                                           RandomStream& rng);
absl::StatusOr<ModelParams> NoisyUpdate(const ModelParams& theta,
                                        const GradientVector& g, double lr,
                                        ClipNorm c, const NoiseSpec& spec,
                                        RandomStream& rng);

// theta' = theta - lr * direction, coordinate-wise. Shared by the private and
// non-private training paths so both perform identical arithmetic.
void ApplyUpdate(std::span<double> theta, const GradientVector& direction,
                 double lr);

// Sequential-composition accountant: each charged step spends the per-step
// (epsilon, delta), and totals are steps * per-step values.
class BudgetLedger {
 public:
  // Caps are optional (unbounded when absent). epsilon_cap must be > 0 and
  // delta_cap in (0, 1].
  static absl::StatusOr<BudgetLedger> Create(
      const PrivacyParams& step_params,
      std::optional<double> epsilon_cap = std::nullopt,
      std::optional<double> delta_cap = std::nullopt);

  // Records one more step. Fails with ResourceExhausted, leaving the ledger
  // unchanged, if that would push spent epsilon or delta past its cap.
  absl::Status ChargeStep();

  // Whether one more ChargeStep() would succeed.
  bool CanCharge() const;

  const PrivacyParams& step_params() const { return step_params_; }
  uint64_t steps_taken() const { return steps_taken_; }
  double spent_epsilon() const { return SpentEpsilonAfter(steps_taken_); }
  double spent_delta() const { return SpentDeltaAfter(steps_taken_); }
  std::optional<double> epsilon_cap() const { return epsilon_cap_; }
  std::optional<double> delta_cap() const { return delta_cap_; }

 private:
  BudgetLedger(const PrivacyParams& step_params,
               std::optional<double> epsilon_cap,
               std::optional<double> delta_cap)
      : step_params_(step_params),
        epsilon_cap_(epsilon_cap),
        delta_cap_(delta_cap) {}

  double SpentEpsilonAfter(uint64_t steps) const {
    return static_cast<double>(steps) * step_params_.epsilon();
  }
  double SpentDeltaAfter(uint64_t steps) const {
    return static_cast<double>(steps) * step_params_.delta();
  }

  PrivacyParams step_params_;
  uint64_t steps_taken_ = 0;
  std::optional<double> epsilon_cap_;
  std::optional<double> delta_cap_;
};

}  // namespace dptext

#endif  // DPTEXT_PRIVACY_H_
