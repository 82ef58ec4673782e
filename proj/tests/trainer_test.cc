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

#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "dptext/random.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace dptext {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FeatureVector Dense(const std::vector<double>& x) {
  FeatureVector fv;
  fv.num_features = x.size();
  for (size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0) fv.entries.emplace_back(static_cast<uint32_t>(j), x[j]);
  }
  return fv;
}

// Two Gaussian blobs on opposite sides of a hyperplane through the origin.
Dataset SeparableData(size_t n, size_t v, uint64_t seed) {
  RandomStream rng(seed);
  Dataset data;
  data.num_classes = 2;
  data.num_features = v;
  for (size_t i = 0; i < n; ++i) {
    const size_t label = i % 2;
    std::vector<double> x(v);
    for (double& xj : x) xj = 0.3 * rng.NextGaussian();
    x[0] = (label == 1 ? 1.0 : -1.0) * (0.5 + rng.NextUniform());
    data.examples.push_back({Dense(x), label});
  }
  return data;
}

Dataset RandomData(size_t n, size_t k, size_t v, uint64_t seed) {
  RandomStream rng(seed);
  Dataset data;
  data.num_classes = k;
  data.num_features = v;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> x(v);
    for (double& xj : x) xj = rng.NextGaussian();
    data.examples.push_back({Dense(x), static_cast<size_t>(rng.NextIndex(k))});
  }
  return data;
}

double Accuracy(const ModelParams& theta, const Dataset& data) {
  size_t correct = 0;
  for (const LabeledExample& ex : data.examples) {
    correct += *Predict(theta, ex.features) == ex.label;
  }
  return static_cast<double>(correct) / data.examples.size();
}

bool BitwiseEqual(const ModelParams& a, const ModelParams& b) {
  if (a.flat_size() != b.flat_size()) return false;
  for (size_t i = 0; i < a.flat_size(); ++i) {
    if (std::bit_cast<uint64_t>(a.flat()[i]) !=
        std::bit_cast<uint64_t>(b.flat()[i])) {
      return false;
    }
  }
  return true;
}

TEST(TrainConfigTest, Validation) {
  TrainConfig config;
  EXPECT_TRUE(config.Validate().ok());
  config.epochs = 0;
  EXPECT_FALSE(config.ValidateBasic().ok());
  config = TrainConfig();
  config.batch_size = 0;
  EXPECT_FALSE(config.ValidateBasic().ok());
  config = TrainConfig();
  config.lr = -0.1;
  EXPECT_FALSE(config.ValidateBasic().ok());
  config = TrainConfig();
  config.l2 = -1.0;
  EXPECT_FALSE(config.ValidateBasic().ok());
  config = TrainConfig();
  config.clip = 0.0;
  EXPECT_FALSE(config.Validate().ok());
  config = TrainConfig();
  config.epsilon = 0.0;
  EXPECT_FALSE(config.Validate().ok());
  EXPECT_TRUE(config.ValidateBasic().ok());
  config = TrainConfig();
  config.delta = 1.0;
  EXPECT_FALSE(config.Validate().ok());
  config = TrainConfig();
  config.clip = kInf;
  config.sigma_mode = SigmaMode::kSensitivity;
  EXPECT_FALSE(config.Validate().ok());
  config.noise_enabled = false;
  EXPECT_TRUE(config.Validate().ok());
}

TEST(ClipModeTest, NamesRoundTrip) {
  for (ClipMode m : {ClipMode::kBatch, ClipMode::kPerExample}) {
    EXPECT_EQ(ParseClipMode(ClipModeName(m)), m);
  }
  EXPECT_FALSE(ParseClipMode("none").has_value());
}

TEST(TrainBaselineTest, OneFullBatchStepByHand) {
  // K=2, V=1, theta=0: p=(1/2, 1/2) for both examples.
  // dL/dw0 = mean((1/2-1)*1, (1/2)*2) = 1/4, dL/dw1 = -1/4, biases cancel.
  Dataset data;
  data.num_classes = 2;
  data.num_features = 1;
  data.examples = {{Dense({1.0}), 0}, {Dense({2.0}), 1}};
  TrainConfig config;
  config.epochs = 1;
  config.batch_size = 2;
  config.lr = 0.1;
  auto result = TrainBaseline(data, config);
  ASSERT_TRUE(result.ok());
  EXPECT_DOUBLE_EQ(result->params.weight(0, 0), -0.025);
  EXPECT_DOUBLE_EQ(result->params.weight(1, 0), 0.025);
  EXPECT_DOUBLE_EQ(result->params.bias(0), 0.0);
  EXPECT_DOUBLE_EQ(result->params.bias(1), 0.0);
  EXPECT_EQ(result->report.steps_taken, 1u);
}

TEST(TrainBaselineTest, ZeroLearningRateLeavesParametersAtZero) {
  const Dataset data = RandomData(20, 3, 4, 1);
  TrainConfig config;
  config.lr = 0.0;
  config.epochs = 3;
  auto result = TrainBaseline(data, config);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->params, *ModelParams::Zeros(3, 4));
}

TEST(TrainBaselineTest, SeparableDataReachesHighAccuracy) {
  const Dataset data = SeparableData(200, 3, 5);
  TrainConfig config;
  config.epochs = 200;
  auto result = TrainBaseline(data, config);
  ASSERT_TRUE(result.ok());
  EXPECT_GE(Accuracy(result->params, data), 0.95);
  EXPECT_EQ(result->report.epoch_losses.size(), 200u);
  EXPECT_LT(result->report.final_loss, result->report.epoch_losses.front());
}

TEST(TrainDpTest, StepCountFollowsSchedule) {
  for (const uint64_t batch : {1u, 7u, 32u, 50u, 64u}) {
    const Dataset data = RandomData(50, 2, 3, 2);
    TrainConfig config;
    config.epochs = 3;
    config.batch_size = batch;
    auto result = TrainDp(data, config);
    ASSERT_TRUE(result.ok());
    const uint64_t expected = 3 * ((50 + batch - 1) / batch);
    EXPECT_EQ(result->report.steps_taken, expected);
    EXPECT_EQ(result->report.planned_steps, expected);
    EXPECT_EQ(result->ledger.steps_taken(), expected);
    EXPECT_FALSE(result->report.early_stopped);
    EXPECT_EQ(result->report.epoch_losses.size(), 3u);
  }
}

TEST(TrainDpTest, ReportsSigmaAndSpentBudget) {
  const Dataset data = RandomData(10, 2, 3, 3);
  TrainConfig config;
  config.epochs = 2;
  config.batch_size = 4;
  config.epsilon = 0.5;
  config.delta = 1e-6;
  auto result = TrainDp(data, config);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->report.sigma,
            std::sqrt(2.0 * std::log(1.0 / 1e-6) / 0.5));
  EXPECT_EQ(result->report.steps_taken, 6u);
  EXPECT_EQ(result->report.spent_epsilon, 6 * 0.5);
  EXPECT_EQ(result->report.spent_delta, 6 * 1e-6);
}

TEST(TrainDpTest, EpsilonCapAdmitsExactlyThreeSteps) {
  const Dataset data = RandomData(10, 2, 3, 4);
  TrainConfig config;
  config.epochs = 10;
  config.batch_size = 10;  // 10 planned steps.
  config.epsilon = 0.7;
  config.epsilon_cap = 3 * 0.7;
  auto result = TrainDp(data, config);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->report.planned_steps, 10u);
  EXPECT_EQ(result->report.steps_taken, 3u);
  EXPECT_EQ(result->ledger.steps_taken(), 3u);
  EXPECT_TRUE(result->report.early_stopped);
  EXPECT_EQ(result->report.spent_epsilon, 3 * 0.7);
  EXPECT_LE(result->report.spent_epsilon, *config.epsilon_cap);
}

TEST(TrainDpTest, CapBelowOneStepKeepsZeroModel) {
  const Dataset data = RandomData(10, 2, 3, 5);
  TrainConfig config;
  config.epsilon = 1.0;
  config.epsilon_cap = 0.5;
  auto result = TrainDp(data, config);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->report.steps_taken, 0u);
  EXPECT_TRUE(result->report.early_stopped);
  EXPECT_EQ(result->params, *ModelParams::Zeros(2, 3));
  EXPECT_EQ(result->report.spent_epsilon, 0.0);
}

TEST(TrainDpTest, BitwiseDeterministic) {
  const Dataset data = RandomData(60, 3, 5, 6);
  for (const ClipMode mode : {ClipMode::kBatch, ClipMode::kPerExample}) {
    TrainConfig config;
    config.seed = 99;
    config.epochs = 4;
    config.batch_size = 8;
    config.clip_mode = mode;
    auto a = TrainDp(data, config);
    auto b = TrainDp(data, config);
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_TRUE(BitwiseEqual(a->params, b->params));
    EXPECT_EQ(a->report.epoch_losses, b->report.epoch_losses);
    config.seed = 100;
    auto c = TrainDp(data, config);
    EXPECT_FALSE(BitwiseEqual(a->params, c->params));
  }
}

TEST(TrainDpTest, NoNoiseBatchClipMatchesBaselineBitwise) {
  const Dataset data = RandomData(45, 3, 4, 7);
  for (const double clip : {kInf, 1e12}) {
    TrainConfig config;
    config.seed = 11;
    config.epochs = 5;
    config.batch_size = 8;
    config.noise_enabled = false;
    config.clip_mode = ClipMode::kBatch;
    config.clip = clip;
    config.l2 = 0.01;
    auto dp = TrainDp(data, config);
    auto base = TrainBaseline(data, config);
    ASSERT_TRUE(dp.ok() && base.ok());
    EXPECT_TRUE(BitwiseEqual(dp->params, base->params)) << "clip " << clip;
    EXPECT_EQ(dp->report.epoch_losses, base->report.epoch_losses);
    EXPECT_EQ(dp->report.sigma, 0.0);
  }
}

TEST(TrainDpTest, NoNoiseStillChargesLedger) {
  const Dataset data = RandomData(10, 2, 2, 8);
  TrainConfig config;
  config.noise_enabled = false;
  config.epochs = 2;
  config.batch_size = 5;
  auto result = TrainDp(data, config);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->ledger.steps_taken(), 4u);
  EXPECT_EQ(result->report.spent_epsilon, 4.0);
}

TEST(TrainDpTest, ObservedDirectionsRespectClipNorm) {
  const Dataset data = RandomData(40, 3, 6, 9);
  for (const ClipMode mode : {ClipMode::kBatch, ClipMode::kPerExample}) {
    for (const double clip : {0.05, 0.5, 2.0}) {
      TrainConfig config;
      config.clip = clip;
      config.clip_mode = mode;
      config.epochs = 3;
      config.batch_size = 6;
      config.lr = 0.5;
      uint64_t observed = 0;
      auto result = TrainDp(data, config, [&](const StepTrace& trace) {
        ++observed;
        EXPECT_EQ(trace.step, observed);
        ASSERT_NE(trace.clipped_direction, nullptr);
        EXPECT_LE(trace.clipped_norm, clip + 1e-12);
        EXPECT_LE(config.lr * trace.clipped_direction->L2Norm(),
                  config.lr * clip + 1e-12);
        ASSERT_NE(trace.noise, nullptr);
        EXPECT_EQ(trace.noise->size(), trace.clipped_direction->size());
      });
      ASSERT_TRUE(result.ok());
      EXPECT_EQ(observed, result->report.steps_taken);
    }
  }
}

TEST(TrainDpTest, ObserverNoiseReconstructsUpdate) {
  const Dataset data = RandomData(12, 2, 3, 10);
  TrainConfig config;
  config.epochs = 1;
  config.batch_size = 12;
  config.lr = 0.3;
  GradientVector direction;
  GradientVector noise;
  auto result = TrainDp(data, config, [&](const StepTrace& trace) {
    direction = *trace.clipped_direction;
    noise = *trace.noise;
  });
  ASSERT_TRUE(result.ok());
  for (size_t i = 0; i < direction.size(); ++i) {
    EXPECT_DOUBLE_EQ(result->params.flat()[i],
                     0.0 - config.lr * (direction[i] + noise[i]));
  }
}

TEST(TrainDpTest, NoiseDoesNotDependOnClipMode) {
  // Noise comes from its own sub-stream, so the draws are the same whatever
  // the clipping path consumed.
  const Dataset data = RandomData(16, 2, 3, 12);
  std::vector<GradientVector> noise_a;
  std::vector<GradientVector> noise_b;
  TrainConfig config;
  config.epochs = 2;
  config.batch_size = 4;
  config.clip_mode = ClipMode::kBatch;
  ASSERT_TRUE(TrainDp(data, config, [&](const StepTrace& t) {
                noise_a.push_back(*t.noise);
              }).ok());
  config.clip_mode = ClipMode::kPerExample;
  ASSERT_TRUE(TrainDp(data, config, [&](const StepTrace& t) {
                noise_b.push_back(*t.noise);
              }).ok());
  EXPECT_EQ(noise_a, noise_b);
}

TEST(TrainDpTest, ExpectedUpdateMatchesNoiselessUpdate) {
  // One full-batch step from theta = 0, repeated over many seeds: the mean
  // update must match the noiseless clipped update within 3 standard errors.
  const Dataset data = RandomData(8, 2, 2, 13);
  TrainConfig config;
  config.epochs = 1;
  config.batch_size = 8;
  config.lr = 0.1;
  config.clip = 0.5;
  config.noise_enabled = false;
  const ModelParams target = TrainDp(data, config)->params;

  config.noise_enabled = true;
  constexpr int kDraws = 2000;
  const size_t dim = target.flat_size();
  std::vector<double> sum(dim, 0.0);
  std::vector<double> sum_sq(dim, 0.0);
  for (int s = 0; s < kDraws; ++s) {
    config.seed = static_cast<uint64_t>(s);
    const ModelParams p = TrainDp(data, config)->params;
    for (size_t i = 0; i < dim; ++i) {
      sum[i] += p.flat()[i];
      sum_sq[i] += p.flat()[i] * p.flat()[i];
    }
  }
  for (size_t i = 0; i < dim; ++i) {
    const double mean = sum[i] / kDraws;
    const double var = (sum_sq[i] - kDraws * mean * mean) / (kDraws - 1);
    const double se = std::sqrt(var / kDraws);
    EXPECT_NEAR(mean, target.flat()[i], 3.0 * se) << "coordinate " << i;
    // The spread itself is lr * sigma.
    EXPECT_NEAR(std::sqrt(var), config.lr * std::sqrt(2.0 * std::log(1e5)),
                0.05 * config.lr * std::sqrt(2.0 * std::log(1e5)));
  }
}

TEST(TrainDpTest, PerExampleClippingBoundsEachContribution) {
  // One example with a huge feature value dominates the unclipped mean; with
  // per-example clipping its contribution is capped at C / n.
  Dataset data;
  data.num_classes = 2;
  data.num_features = 1;
  data.examples = {{Dense({1000.0}), 1}, {Dense({1.0}), 0}};
  TrainConfig config;
  config.epochs = 1;
  config.batch_size = 2;
  config.clip = 1.0;
  config.noise_enabled = false;
  GradientVector direction;
  ASSERT_TRUE(TrainDp(data, config, [&](const StepTrace& t) {
                direction = *t.clipped_direction;
              }).ok());
  // Oracle: clip each per-example gradient by hand, then average.
  const ModelParams zeros = *ModelParams::Zeros(2, 1);
  const auto per = *PerExampleGradients(zeros, data.examples);
  std::vector<double> expected(4, 0.0);
  for (const GradientVector& g : per) {
    const double scale = std::min(1.0, 1.0 / g.L2Norm());
    for (size_t i = 0; i < 4; ++i) expected[i] += 0.5 * scale * g[i];
  }
  for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(direction[i], expected[i], 1e-15);
}

TEST(TrainDpTest, InputErrors) {
  TrainConfig config;
  Dataset empty;
  empty.num_classes = 2;
  empty.num_features = 2;
  EXPECT_FALSE(TrainDp(empty, config).ok());
  EXPECT_FALSE(TrainBaseline(empty, config).ok());

  Dataset bad_label = RandomData(4, 2, 2, 1);
  bad_label.examples[2].label = 5;
  EXPECT_FALSE(TrainDp(bad_label, config).ok());

  Dataset bad_dim = RandomData(4, 2, 2, 1);
  bad_dim.examples[1].features.num_features = 3;
  EXPECT_FALSE(TrainDp(bad_dim, config).ok());
  EXPECT_FALSE(TrainBaseline(bad_dim, config).ok());
}

TEST(TrainDpTest, ShuffleDependsOnSeed) {
  // Baseline runs differ across seeds only through the per-epoch shuffle.
  const Dataset data = RandomData(30, 2, 3, 14);
  TrainConfig config;
  config.epochs = 2;
  config.batch_size = 5;
  config.seed = 1;
  const ModelParams a = TrainBaseline(data, config)->params;
  config.seed = 2;
  const ModelParams b = TrainBaseline(data, config)->params;
  EXPECT_FALSE(BitwiseEqual(a, b));
  config.batch_size = 30;  // Full batch: order no longer matters much.
  config.seed = 1;
  const ModelParams c = TrainBaseline(data, config)->params;
  config.seed = 2;
  const ModelParams d = TrainBaseline(data, config)->params;
  for (size_t i = 0; i < c.flat_size(); ++i) {
    EXPECT_NEAR(c.flat()[i], d.flat()[i], 1e-12);
  }
}

}  // namespace
}  // namespace dptext
