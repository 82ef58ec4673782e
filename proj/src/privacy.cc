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

#include "dptext/privacy.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "dptext/status_macros.h"

namespace dptext {

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ", epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return PrivacyParams(epsilon, delta);
}

absl::StatusOr<ClipNorm> ClipNorm::Create(double c) {
  if (!(c > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("clip norm must be positive, got ", c));
  }
  return ClipNorm(c);
}

absl::string_view SigmaModeName(SigmaMode mode) {
  switch (mode) {
    case SigmaMode::kLiteral:
      return "literal";
    case SigmaMode::kSensitivity:
      return "sensitivity";
  }
  return "literal";
}

std::optional<SigmaMode> ParseSigmaMode(absl::string_view name) {
  if (name == "literal") return SigmaMode::kLiteral;
  if (name == "sensitivity") return SigmaMode::kSensitivity;
  return std::nullopt;
}

absl::StatusOr<GradientVector> ClipGradient(const GradientVector& g,
                                            ClipNorm c) {
  if (!g.AllFinite()) {
    return absl::InvalidArgumentError("gradient has non-finite entries");
  }
  const double norm = g.L2Norm();
  // Covers ||g|| == 0, where c / ||g|| is undefined and the scale is 1.
  if (norm <= c.value()) return g;
  const double scale = c.value() / norm;
  GradientVector clipped = g;
  for (double& v : clipped) v *= scale;
  return clipped;
}

absl::StatusOr<NoiseSpec> NoiseSigma(const PrivacyParams& params,
                                     SigmaMode mode, ClipNorm clip) {
  NoiseSpec spec;
  spec.sigma =
      std::sqrt(2.0 * std::log(1.0 / params.delta()) / params.epsilon());
  if (mode == SigmaMode::kSensitivity) {
    if (!std::isfinite(clip.value())) {
      return absl::InvalidArgumentError(
          "sensitivity-scaled sigma needs a finite clip norm");
    }
    spec.sigma *= clip.value();
    spec.scaled_by_sensitivity = true;
  }
  if (!std::isfinite(spec.sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise scale overflowed for epsilon=", params.epsilon(),
                     ", delta=", params.delta()));
  }
  return spec;
}

GradientVector SampleNoise(const NoiseSpec& spec, size_t dim,
                           RandomStream& rng) {
  GradientVector noise(dim);
  if (spec.sigma == 0.0) return noise;
  for (double& v : noise) v = spec.sigma * rng.NextGaussian();
  return noise;
}

void ApplyUpdate(std::span<double> theta, const GradientVector& direction,
                 double lr) {
  for (size_t i = 0; i < theta.size(); ++i) theta[i] -= lr * direction[i];
}

absl::StatusOr<GradientVector> NoisyUpdate(const GradientVector& theta,
                                           const GradientVector& g, double lr,
                                           ClipNorm c, const NoiseSpec& spec,
                                           RandomStream& rng) {
  if (g.size() != theta.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("gradient has ", g.size(), " entries, parameters have ",
                     theta.size()));
  }
  ASSIGN_OR_RETURN(GradientVector direction, ClipGradient(g, c));
  if (spec.sigma != 0.0) {
    const GradientVector noise = SampleNoise(spec, direction.size(), rng);
    for (size_t i = 0; i < direction.size(); ++i) direction[i] += noise[i];
  }
  GradientVector updated = theta;
  ApplyUpdate(updated.values(), direction, lr);
  return updated;
}

absl::StatusOr<ModelParams> NoisyUpdate(const ModelParams& theta,
                                        const GradientVector& g, double lr,
                                        ClipNorm c, const NoiseSpec& spec,
                                        RandomStream& rng) {
  const GradientVector flat(
      std::vector<double>(theta.flat().begin(), theta.flat().end()));
  ASSIGN_OR_RETURN(GradientVector updated,
                   NoisyUpdate(flat, g, lr, c, spec, rng));
  return ModelParams::FromFlat(theta.num_classes(), theta.num_features(),
                               updated.values());
}

absl::StatusOr<BudgetLedger> BudgetLedger::Create(
    const PrivacyParams& step_params, std::optional<double> epsilon_cap,
    std::optional<double> delta_cap) {
  if (epsilon_cap && !(*epsilon_cap > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon cap must be positive, got ", *epsilon_cap));
  }
  if (delta_cap && !(*delta_cap > 0.0 && *delta_cap <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta cap must lie in (0, 1], got ", *delta_cap));
  }
  return BudgetLedger(step_params, epsilon_cap, delta_cap);
}

bool BudgetLedger::CanCharge() const {
  const uint64_t next = steps_taken_ + 1;
  if (epsilon_cap_ && SpentEpsilonAfter(next) > *epsilon_cap_) return false;
  if (delta_cap_ && SpentDeltaAfter(next) > *delta_cap_) return false;
  return true;
}

absl::Status BudgetLedger::ChargeStep() {
  if (!CanCharge()) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "privacy budget exhausted after ", steps_taken_, " steps (spent eps=",
        spent_epsilon(), ", delta=", spent_delta(), ")"));
  }
  ++steps_taken_;
  return absl::OkStatus();
}

}  // namespace dptext
