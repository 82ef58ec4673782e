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

#include "dptext/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "dptext/random.h"
#include "dptext/status_macros.h"

namespace dptext {
namespace {

absl::Status ValidateDataset(const Dataset& data) {
  if (data.examples.empty()) {
    return absl::InvalidArgumentError("empty training set");
  }
  if (data.num_classes < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 classes, got ", data.num_classes));
  }
  if (data.num_features == 0) {
    return absl::InvalidArgumentError("need at least 1 feature");
  }
  for (size_t i = 0; i < data.examples.size(); ++i) {
    const LabeledExample& ex = data.examples[i];
    if (ex.label >= data.num_classes) {
      return absl::InvalidArgumentError(
          absl::StrCat("example ", i, ": label ", ex.label,
                       " out of range for ", data.num_classes, " classes"));
    }
    if (ex.features.num_features != data.num_features) {
      return absl::InvalidArgumentError(absl::StrCat(
          "example ", i, ": feature dimension ", ex.features.num_features,
          " does not match dataset dimension ", data.num_features));
    }
  }
  return absl::OkStatus();
}

// Shared epoch/batch schedule. `step` returns false to stop training early.
class Schedule {
 public:
  Schedule(const Dataset& data, const TrainConfig& config)
      : data_(data),
        config_(config),
        shuffle_rng_(RandomStream(config.seed).Split(kShuffleStreamId)) {}

  uint64_t planned_steps() const {
    const uint64_t n = data_.examples.size();
    return config_.epochs * ((n + config_.batch_size - 1) / config_.batch_size);
  }

  // Runs the schedule, calling `step(batch)` once per mini-batch and
  // `epoch_done()` after every epoch that started.
  template <typename StepFn, typename EpochFn>
  absl::Status Run(StepFn&& step, EpochFn&& epoch_done) {
    const size_t n = data_.examples.size();
    std::vector<size_t> order(n);
    std::vector<LabeledExample> shuffled;
    shuffled.reserve(n);
    for (uint64_t epoch = 0; epoch < config_.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), size_t{0});
      Shuffle(std::span<size_t>(order), shuffle_rng_);
      shuffled.clear();
      for (const size_t i : order) shuffled.push_back(data_.examples[i]);

      bool keep_going = true;
      for (size_t start = 0; start < n && keep_going;
           start += config_.batch_size) {
        const size_t len =
            std::min<size_t>(config_.batch_size, n - start);
        ASSIGN_OR_RETURN(keep_going,
                         step(std::span<const LabeledExample>(
                             shuffled.data() + start, len)));
      }
      RETURN_IF_ERROR(epoch_done());
      if (!keep_going) break;
    }
    return absl::OkStatus();
  }

 private:
  const Dataset& data_;
  const TrainConfig& config_;
  RandomStream shuffle_rng_;
};

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

absl::string_view ClipModeName(ClipMode mode) {
  return mode == ClipMode::kBatch ? "batch" : "per_example";
}

std::optional<ClipMode> ParseClipMode(absl::string_view name) {
  if (name == "batch") return ClipMode::kBatch;
  if (name == "per_example") return ClipMode::kPerExample;
  return std::nullopt;
}

absl::Status TrainConfig::ValidateBasic() const {
  if (!(lr >= 0.0) || !std::isfinite(lr)) {
    return absl::InvalidArgumentError(
        absl::StrCat("learning rate must be finite and non-negative, got ",
                     lr));
  }
  if (epochs < 1) return absl::InvalidArgumentError("epochs must be >= 1");
  if (batch_size < 1) {
    return absl::InvalidArgumentError("batch_size must be >= 1");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) {
    return absl::InvalidArgumentError(
        absl::StrCat("l2 must be finite and non-negative, got ", l2));
  }
  return absl::OkStatus();
}

absl::Status TrainConfig::Validate() const {
  RETURN_IF_ERROR(ValidateBasic());
  RETURN_IF_ERROR(ClipNorm::Create(clip).status());
  ASSIGN_OR_RETURN(PrivacyParams params,
                   PrivacyParams::Create(epsilon, delta));
  RETURN_IF_ERROR(BudgetLedger::Create(params, epsilon_cap, delta_cap).status());
  if (noise_enabled) {
    ASSIGN_OR_RETURN(ClipNorm c, ClipNorm::Create(clip));
    RETURN_IF_ERROR(NoiseSigma(params, sigma_mode, c).status());
  }
  return absl::OkStatus();
}

absl::StatusOr<DpTrainResult> TrainDp(const Dataset& data,
                                      const TrainConfig& config,
                                      const StepObserver& observer) {
  const auto start_time = std::chrono::steady_clock::now();
  RETURN_IF_ERROR(config.Validate());
  RETURN_IF_ERROR(ValidateDataset(data));

  ASSIGN_OR_RETURN(const ClipNorm clip, ClipNorm::Create(config.clip));
  ASSIGN_OR_RETURN(const PrivacyParams privacy,
                   PrivacyParams::Create(config.epsilon, config.delta));
  ASSIGN_OR_RETURN(BudgetLedger ledger,
                   BudgetLedger::Create(privacy, config.epsilon_cap,
                                        config.delta_cap));
  NoiseSpec noise_spec;
  if (config.noise_enabled) {
    ASSIGN_OR_RETURN(noise_spec,
                     NoiseSigma(privacy, config.sigma_mode, clip));
  }
  ASSIGN_OR_RETURN(ModelParams theta,
                   ModelParams::Zeros(data.num_classes, data.num_features));
  RandomStream noise_rng = RandomStream(config.seed).Split(kNoiseStreamId);

  TrainReport report;
  report.sigma = noise_spec.sigma;
  Schedule schedule(data, config);
  report.planned_steps = schedule.planned_steps();

  auto step = [&](std::span<const LabeledExample> batch)
      -> absl::StatusOr<bool> {
    if (!ledger.CanCharge()) {
      report.early_stopped = true;
      return false;
    }
    GradientVector direction;
    if (config.clip_mode == ClipMode::kBatch) {
      ASSIGN_OR_RETURN(GradientVector g, Gradient(theta, batch, config.l2));
      ASSIGN_OR_RETURN(direction, ClipGradient(g, clip));
    } else {
      ASSIGN_OR_RETURN(std::vector<GradientVector> per_example,
                       PerExampleGradients(theta, batch));
      direction = GradientVector(theta.flat_size());
      const size_t weight_count = theta.num_classes() * theta.num_features();
      for (GradientVector& g : per_example) {
        if (config.l2 > 0.0) {
          for (size_t i = 0; i < weight_count; ++i) {
            g[i] += config.l2 * theta.flat()[i];
          }
        }
        ASSIGN_OR_RETURN(const GradientVector clipped, ClipGradient(g, clip));
        for (size_t i = 0; i < direction.size(); ++i) {
          direction[i] += clipped[i];
        }
      }
      const double n = static_cast<double>(batch.size());
      for (double& v : direction) v /= n;
    }

    RETURN_IF_ERROR(ledger.ChargeStep());

    // The averaged per-example direction already has norm <= C, so the clip
    // inside NoisyUpdate leaves it as is.
    RandomStream noise_before = noise_rng;
    ASSIGN_OR_RETURN(theta, NoisyUpdate(theta, direction, config.lr, clip,
                                        noise_spec, noise_rng));
    if (observer) {
      StepTrace trace;
      trace.step = ledger.steps_taken();
      trace.clipped_direction = &direction;
      trace.clipped_norm = direction.L2Norm();
      GradientVector noise;
      if (noise_spec.sigma != 0.0) {
        // Replays the draws NoisyUpdate consumed.
        noise = SampleNoise(noise_spec, theta.flat_size(), noise_before);
        trace.noise = &noise;
      }
      observer(trace);
    }
    return true;
  };
  auto epoch_done = [&]() -> absl::Status {
    ASSIGN_OR_RETURN(const double loss, Loss(theta, data.examples, config.l2));
    report.epoch_losses.push_back(loss);
    return absl::OkStatus();
  };
  RETURN_IF_ERROR(schedule.Run(step, epoch_done));

  ASSIGN_OR_RETURN(report.final_loss, Loss(theta, data.examples, config.l2));
  report.steps_taken = ledger.steps_taken();
  report.spent_epsilon = ledger.spent_epsilon();
  report.spent_delta = ledger.spent_delta();
  report.wall_time_seconds = SecondsSince(start_time);
  return DpTrainResult{std::move(theta), std::move(report), ledger};
}

absl::StatusOr<BaselineTrainResult> TrainBaseline(const Dataset& data,
                                                  const TrainConfig& config) {
  const auto start_time = std::chrono::steady_clock::now();
  RETURN_IF_ERROR(config.ValidateBasic());
  RETURN_IF_ERROR(ValidateDataset(data));
  ASSIGN_OR_RETURN(ModelParams theta,
                   ModelParams::Zeros(data.num_classes, data.num_features));

  TrainReport report;
  Schedule schedule(data, config);
  report.planned_steps = schedule.planned_steps();

  auto step = [&](std::span<const LabeledExample> batch)
      -> absl::StatusOr<bool> {
    ASSIGN_OR_RETURN(const GradientVector g,
                     Gradient(theta, batch, config.l2));
    ApplyUpdate(theta.mutable_flat(), g, config.lr);
    ++report.steps_taken;
    return true;
  };
  auto epoch_done = [&]() -> absl::Status {
    ASSIGN_OR_RETURN(const double loss, Loss(theta, data.examples, config.l2));
    report.epoch_losses.push_back(loss);
    return absl::OkStatus();
  };
  RETURN_IF_ERROR(schedule.Run(step, epoch_done));

  ASSIGN_OR_RETURN(report.final_loss, Loss(theta, data.examples, config.l2));
  report.wall_time_seconds = SecondsSince(start_time);
  return BaselineTrainResult{std::move(theta), std::move(report)};
}

}  // namespace dptext
