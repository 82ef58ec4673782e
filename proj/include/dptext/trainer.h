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

#ifndef DPTEXT_TRAINER_H_
#define DPTEXT_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptext/gradient_vector.h"
#include "dptext/model.h"
#include "dptext/privacy.h"

namespace dptext {

struct Dataset {
  std::vector<LabeledExample> examples;
  size_t num_classes = 0;
  size_t num_features = 0;
};

enum class ClipMode {
  // Clip the mean gradient of the mini-batch as a whole.
  kBatch,
  // Clip every per-example gradient, then average.
  kPerExample,
};

absl::string_view ClipModeName(ClipMode mode);
std::optional<ClipMode> ParseClipMode(absl::string_view name);

struct TrainConfig {
  double lr = 0.1;
  uint64_t epochs = 20;
  uint64_t batch_size = 32;
  double clip = 1.0;  // +inf disables clipping.
  double epsilon = 1.0;
  double delta = 1e-5;
  uint64_t seed = 0;
  ClipMode clip_mode = ClipMode::kPerExample;
  SigmaMode sigma_mode = SigmaMode::kLiteral;
  bool noise_enabled = true;
  double l2 = 0.0;
  std::optional<double> epsilon_cap;
  std::optional<double> delta_cap;

  // Checks the fields train_baseline needs (lr, epochs, batch size, l2).
  absl::Status ValidateBasic() const;
  // Additionally checks clip and privacy parameters.
  absl::Status Validate() const;
};

struct TrainReport {
  // Full-dataset loss after each epoch that ran (including one cut short by
  // budget exhaustion).
  std::vector<double> epoch_losses;
  double final_loss = 0.0;
  uint64_t steps_taken = 0;
  uint64_t planned_steps = 0;
  bool early_stopped = false;
  double sigma = 0.0;
  double spent_epsilon = 0.0;
  double spent_delta = 0.0;
  double wall_time_seconds = 0.0;
};

// Per-update instrumentation for TrainDp.
struct StepTrace {
  uint64_t step = 0;  // 1-based.
  // The clipped gradient, before noise is added.
  const GradientVector* clipped_direction = nullptr;
  double clipped_norm = 0.0;
  const GradientVector* noise = nullptr;  // nullptr when noise is off.
};
using StepObserver = std::function<void(const StepTrace&)>;

struct DpTrainResult {
  ModelParams params;
  TrainReport report;
  BudgetLedger ledger;
};

struct BaselineTrainResult {
  ModelParams params;
  TrainReport report;
};

// Mini-batch noisy clipped gradient descent from zero-initialized parameters.
//
// Each epoch visits the data in a fresh permutation drawn from the
// shuffle sub-stream of `config.seed`. Each batch produces one update: the
// clipped gradient (per clip_mode) plus, when noise is enabled, N(0, sigma^2 I)
// drawn from the separate noise sub-stream, coordinates in ascending order.
// The ledger is charged once per update; when the next charge would exceed a
// cap, training stops and report.early_stopped is set.
absl::StatusOr<DpTrainResult> TrainDp(const Dataset& data,
                                      const TrainConfig& config,
                                      const StepObserver& observer = {});

// Plain mini-batch gradient descent with the same initialization, shuffling
// and batching as TrainDp, without clipping, noise or accounting.
absl::StatusOr<BaselineTrainResult> TrainBaseline(const Dataset& data,
                                                  const TrainConfig& config);

// Stream ids for RandomStream::Split off the training seed.
inline constexpr uint64_t kShuffleStreamId = 1;
inline constexpr uint64_t kNoiseStreamId = 2;

}  // namespace dptext

#endif  // DPTEXT_TRAINER_H_
