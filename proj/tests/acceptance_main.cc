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

// Acceptance suite: one PASS/FAIL line per criterion, with its runtime.
// Exits nonzero when any criterion fails.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dptext/cli.h"
#include "dptext/corpus_io.h"
#include "dptext/experiment.h"
#include "dptext/metrics.h"
#include "dptext/model.h"
#include "dptext/privacy.h"
#include "dptext/random.h"
#include "dptext/run_config.h"
#include "dptext/synthetic.h"
#include "dptext/text_pipeline.h"
#include "dptext/trainer.h"
#include "test_util.h"

namespace dptext {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

FeatureVector Dense(const std::vector<double>& x) {
  FeatureVector fv;
  fv.num_features = x.size();
  for (size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0) fv.entries.emplace_back(static_cast<uint32_t>(j), x[j]);
  }
  return fv;
}

bool BitwiseEqual(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<uint64_t>(a[i]) != std::bit_cast<uint64_t>(b[i])) {
      return false;
    }
  }
  return true;
}

Outcome F1Consistency() {
  const double f1 = F1Score(0.85, 0.88);
  const MetricsReport m = Metrics(ConfusionCounts::FromBinary(85 * 88, 15 * 88,
                                                              85 * 12, 0),
                                  Averaging::kBinaryPositiveClass);
  const bool pass = std::abs(f1 - 0.8647) <= 0.0005 &&
                    std::abs(m.precision - 0.85) < 1e-12 &&
                    std::abs(m.recall - 0.88) < 1e-12 &&
                    std::abs(m.f1 - f1) < 1e-12;
  return {pass, absl::StrFormat("F1(0.85, 0.88) = %.10f, from counts %.10f",
                                f1, m.f1)};
}

Outcome ClippingSuite() {
  RandomStream rng(20260101);
  double worst_excess = -kInf;
  size_t identity_cases = 0;
  size_t failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t dim = 1 + rng.NextIndex(100);
    const double c = 0.01 + 10.0 * rng.NextUniform();
    const double target = trial == 0 ? 0.0 : 10.0 * c * rng.NextUniform();
    GradientVector g(dim);
    for (double& v : g) v = rng.NextGaussian();
    const double raw = g.L2Norm();
    for (double& v : g) v = raw > 0.0 ? v * (target / raw) : 0.0;
    const GradientVector clipped = *ClipGradient(g, *ClipNorm::Create(c));
    const double norm = clipped.L2Norm();
    worst_excess = std::max(worst_excess, norm - c);
    if (norm > c + 1e-12) ++failures;
    if (g.L2Norm() <= c) {
      ++identity_cases;
      if (!BitwiseEqual(clipped.values(), g.values())) ++failures;
    }
  }
  return {failures == 0 && identity_cases > 0,
          absl::StrFormat("1000 gradients, %d within C returned unchanged, "
                          "max ||clip(g)|| - C = %.3g, %d failures",
                          identity_cases, worst_excess, failures)};
}

Outcome NoiseCalibration() {
  constexpr size_t kSamples = 100000;
  const NoiseSpec spec = *NoiseSigma(*PrivacyParams::Create(1.0, 1e-5));
  RandomStream rng(7);
  const GradientVector noise = SampleNoise(spec, kSamples, rng);
  double mean = 0.0;
  for (double v : noise) mean += v;
  mean /= kSamples;
  double var = 0.0;
  for (double v : noise) var += (v - mean) * (v - mean);
  const double std = std::sqrt(var / (kSamples - 1));
  constexpr double kTarget = 4.79853;
  const double mean_bound = 4.0 * kTarget / std::sqrt(double(kSamples));
  const bool pass = std::abs(spec.sigma - kTarget) < 1e-5 &&
                    std::abs(std - kTarget) <= 0.02 * kTarget &&
                    std::abs(mean) <= mean_bound;
  return {pass, absl::StrFormat("sigma = %.6f, sample std = %.5f (%.2f%% off), "
                                "mean = %.5f (bound %.5f)",
                                spec.sigma, std,
                                100.0 * std::abs(std / kTarget - 1.0), mean,
                                mean_bound)};
}

// Dense log-sum-exp cross-entropy plus (l2 / 2) ||W||^2.
double LossOracle(size_t k_count, size_t v_count,
                  const std::vector<double>& flat,
                  const std::vector<LabeledExample>& batch, double l2) {
  double total = 0.0;
  for (const LabeledExample& ex : batch) {
    std::vector<double> x(v_count, 0.0);
    for (const auto& [j, w] : ex.features.entries) x[j] = w;
    std::vector<double> z(k_count);
    for (size_t k = 0; k < k_count; ++k) {
      z[k] = flat[k_count * v_count + k];
      for (size_t j = 0; j < v_count; ++j) z[k] += flat[k * v_count + j] * x[j];
    }
    const double m = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double zk : z) s += std::exp(zk - m);
    total += m + std::log(s) - z[ex.label];
  }
  double reg = 0.0;
  for (size_t i = 0; i < k_count * v_count; ++i) reg += flat[i] * flat[i];
  return total / batch.size() + 0.5 * l2 * reg;
}

Outcome GradientCorrectness() {
  constexpr double kH = 1e-5;
  RandomStream rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const size_t k = 2 + rng.NextIndex(2);
    const size_t v = 1 + rng.NextIndex(5);
    const size_t n = 1 + rng.NextIndex(10);
    std::vector<double> flat(k * v + k);
    for (double& w : flat) w = rng.NextGaussian();
    std::vector<LabeledExample> batch;
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> x(v);
      for (double& xj : x) xj = rng.NextGaussian();
      batch.push_back({Dense(x), static_cast<size_t>(rng.NextIndex(k))});
    }
    const double l2 = trial % 2 == 0 ? 0.0 : 0.1;
    const GradientVector g =
        *Gradient(*ModelParams::FromFlat(k, v, flat), batch, l2);
    for (size_t i = 0; i < flat.size(); ++i) {
      const double saved = flat[i];
      flat[i] = saved + kH;
      const double up = LossOracle(k, v, flat, batch, l2);
      flat[i] = saved - kH;
      const double down = LossOracle(k, v, flat, batch, l2);
      flat[i] = saved;
      const double numeric = (up - down) / (2.0 * kH);
      const double scale =
          std::max({std::abs(g[i]), std::abs(numeric), 1e-12});
      worst = std::max(worst, std::abs(g[i] - numeric) / scale);
    }
  }
  return {worst < 1e-6,
          absl::StrFormat("50 instances, max relative error %.3g", worst)};
}

Outcome Degeneracy() {
  RandomStream rng(5);
  Dataset data;
  data.num_classes = 3;
  data.num_features = 6;
  for (int i = 0; i < 120; ++i) {
    std::vector<double> x(6);
    for (double& xj : x) xj = rng.NextGaussian();
    data.examples.push_back({Dense(x), static_cast<size_t>(rng.NextIndex(3))});
  }
  int equal = 0;
  int runs = 0;
  for (const double clip : {kInf, 1e12}) {
    for (const uint64_t seed : {0u, 1u, 2u}) {
      TrainConfig config;
      config.seed = seed;
      config.epochs = 10;
      config.batch_size = 16;
      config.noise_enabled = false;
      config.clip_mode = ClipMode::kBatch;
      config.clip = clip;
      config.l2 = 0.01;
      auto dp = TrainDp(data, config);
      auto base = TrainBaseline(data, config);
      ++runs;
      if (dp.ok() && base.ok() &&
          BitwiseEqual(dp->params.flat(), base->params.flat())) {
        ++equal;
      }
    }
  }
  return {equal == runs,
          absl::StrFormat("%d/%d runs bitwise equal (C = inf and 1e12)", equal,
                          runs)};
}

double Accuracy(const ModelParams& params, const Dataset& data) {
  auto m = EvaluateModel(params, data);
  return m.ok() ? m->accuracy : -1.0;
}

Outcome PrivacyUtility() {
  SyntheticCorpusOptions synth;
  synth.num_documents = 500;
  synth.num_classes = 2;
  std::vector<RawDocument> docs = GenerateSyntheticCorpus(synth);
  std::vector<TokenList> tokens;
  for (RawDocument& doc : docs) {
    tokens.push_back(CleanDocument(doc, StopwordList::Default()));
    doc.text = absl::StrJoin(tokens.back(), " ");
  }
  RunConfig config;
  auto vocab = BuildVocabulary(tokens, config.min_doc_freq);
  if (!vocab.ok()) return {false, std::string(vocab.status().message())};
  auto data = PrepareData(docs, *vocab, config);
  if (!data.ok()) return {false, std::string(data.status().message())};
  const Dataset& train = data->train;

  TrainConfig base = config.train;
  base.epsilon = 4.0;
  base.delta = 1e-5;
  base.clip = 1.0;
  const double baseline = Accuracy(TrainBaseline(train, base)->params, train);
  const double dp_default = Accuracy(TrainDp(train, base)->params, train);

  constexpr std::array<double, 3> kEpsilons = {0.5, 1.0, 4.0};
  std::array<double, 3> means{};
  for (size_t e = 0; e < kEpsilons.size(); ++e) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      TrainConfig run = base;
      run.epsilon = kEpsilons[e];
      run.seed = seed;
      means[e] += Accuracy(TrainDp(train, run)->params, train) / 5.0;
    }
  }
  const bool trend =
      means[1] >= means[0] - 0.02 && means[2] >= means[1] - 0.02;
  const bool pass =
      baseline >= 0.95 && dp_default >= 0.80 && means[2] >= 0.80 && trend;
  return {pass,
          absl::StrFormat(
              "train acc: baseline %.4f, dp(eps=4, seed 0) %.4f; 5-seed means "
              "eps 0.5/1/4 = %.4f/%.4f/%.4f",
              baseline, dp_default, means[0], means[1], means[2])};
}

Outcome MetricsOracle() {
  RandomStream rng(31337);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t k = 2 + rng.NextIndex(3);
    const size_t n = 1 + rng.NextIndex(60);
    std::vector<size_t> preds(n), labels(n);
    for (size_t i = 0; i < n; ++i) {
      preds[i] = rng.NextIndex(k);
      labels[i] = rng.NextIndex(k);
    }
    const MetricsReport m =
        Metrics(*Confusion(preds, labels, k), DefaultAveraging(k));
    size_t correct = 0;
    for (size_t i = 0; i < n; ++i) correct += preds[i] == labels[i];
    double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
    const size_t first = k == 2 ? 1 : 0;
    for (size_t c = first; c < k; ++c) {
      size_t tp = 0, fp = 0, fn = 0;
      for (size_t i = 0; i < n; ++i) {
        tp += preds[i] == c && labels[i] == c;
        fp += preds[i] == c && labels[i] != c;
        fn += preds[i] != c && labels[i] == c;
      }
      const double p = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
      const double r = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
      p_sum += p;
      r_sum += r;
      f_sum += p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    }
    const double classes = double(k - first);
    worst = std::max({worst, std::abs(m.accuracy - double(correct) / n),
                      std::abs(m.precision - p_sum / classes),
                      std::abs(m.recall - r_sum / classes),
                      std::abs(m.f1 - f_sum / classes)});
  }
  return {worst <= 1e-12,
          absl::StrFormat("100 sets, max deviation %.3g", worst)};
}

Outcome LedgerExactness() {
  int failures = 0;
  for (const double e : {0.1, 0.25, 1.0 / 3.0, 0.7, 2.0}) {
    auto ledger = BudgetLedger::Create(*PrivacyParams::Create(e, 1e-6),
                                       std::nullopt, std::nullopt);
    for (uint64_t t = 1; t <= 50; ++t) {
      if (!ledger->ChargeStep().ok() ||
          ledger->spent_epsilon() != double(t) * e) {
        ++failures;
      }
    }
  }
  // A cap of 3e inside training: exactly three updates, then early stop.
  Dataset data;
  data.num_classes = 2;
  data.num_features = 2;
  for (int i = 0; i < 40; ++i) {
    data.examples.push_back(
        {Dense({double(i % 2), 1.0 - double(i % 2)}), size_t(i % 2)});
  }
  std::string steps;
  for (const double e : {0.1, 0.3, 1.0}) {
    TrainConfig config;
    config.epochs = 5;
    config.batch_size = 4;
    config.epsilon = e;
    config.epsilon_cap = 3.0 * e;
    auto result = TrainDp(data, config);
    if (!result.ok() || result->report.steps_taken != 3 ||
        !result->report.early_stopped ||
        result->report.spent_epsilon != 3.0 * e) {
      ++failures;
    }
    absl::StrAppend(&steps, steps.empty() ? "" : ",",
                    result.ok() ? result->report.steps_taken : 0);
  }
  return {failures == 0,
          absl::StrFormat("spent = T*e exactly for T <= 50; cap 3e took %s "
                          "steps; %d failures",
                          steps, failures)};
}

Outcome Determinism() {
  const auto dir = testing_util::MakeTempDir("acceptance_determinism");
  auto path = [&](const std::string& name) { return (dir / name).string(); };
  SyntheticCorpusOptions synth;
  synth.num_documents = 300;
  if (!SaveCorpus(GenerateSyntheticCorpus(synth), path("raw.jsonl")).ok()) {
    return {false, "cannot write corpus"};
  }
  std::ostringstream sink;
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "dptext");
    return RunCli(args, sink, sink);
  };
  int rc = run({"clean", "--corpus", path("raw.jsonl"), "--out",
                path("clean.jsonl")});
  rc |= run({"vocab", "--corpus", path("clean.jsonl"), "--out",
             path("vocab.tsv")});
  for (const char* tag : {"a", "b"}) {
    rc |= run({"train", "--corpus", path("clean.jsonl"), "--vocab",
               path("vocab.tsv"), "--seed", "17", "--model",
               path(std::string(tag) + ".model"), "--report",
               path(std::string(tag) + ".report")});
  }
  const std::string model_a = testing_util::ReadFile(path("a.model"));
  const std::string report_a = testing_util::ReadFile(path("a.report"));
  const bool same_model =
      !model_a.empty() && model_a == testing_util::ReadFile(path("b.model"));
  const bool same_report =
      !report_a.empty() && report_a == testing_util::ReadFile(path("b.report"));
  return {rc == 0 && same_model && same_report,
          absl::StrFormat("exit status %d, checkpoints %s (%d bytes), reports "
                          "%s",
                          rc, same_model ? "identical" : "DIFFER",
                          model_a.size(), same_report ? "identical" : "DIFFER")};
}

Outcome CleaningSpotChecks() {
  const std::string borrowing = Lemmatize("borrowing");
  const std::string books = Lemmatize("books");
  const std::string stripped =
      StripMarkup(testing_util::kLibraryActSnippet);
  const bool no_markup = stripped.find('<') == std::string::npos &&
                         stripped.find('>') == std::string::npos;
  const TokenList tokens = CleanDocument(
      {"act", testing_util::kLibraryActSnippet, std::nullopt},
      StopwordList::Default());
  const bool has_tokens =
      std::find(tokens.begin(), tokens.end(), "borrow") != tokens.end() &&
      std::find(tokens.begin(), tokens.end(), "book") != tokens.end() &&
      std::find(tokens.begin(), tokens.end(), "p") == tokens.end();
  return {borrowing == "borrow" && books == "book" && no_markup && has_tokens,
          absl::StrFormat("borrowing -> %s, books -> %s, markup %s, "
                          "%d cleaned tokens",
                          borrowing, books,
                          no_markup ? "fully stripped" : "REMAINS",
                          tokens.size())};
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

int Main() {
  const std::vector<Criterion> criteria = {
      {"f1_consistency", 1.0, F1Consistency},
      {"clipping_suite", 1.0, ClippingSuite},
      {"noise_calibration", 5.0, NoiseCalibration},
      {"gradient_correctness", 5.0, GradientCorrectness},
      {"degeneracy", 10.0, Degeneracy},
      {"privacy_utility_trend", 60.0, PrivacyUtility},
      {"metrics_oracle", 1.0, MetricsOracle},
      {"ledger_exactness", 1.0, LedgerExactness},
      {"determinism", 20.0, Determinism},
      {"cleaning_spot_checks", 1.0, CleaningSpotChecks},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = c.check();
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %-22s %s [%.3fs, budget %.0fs%s]\n",
                pass ? "PASS" : "FAIL", c.name, outcome.detail.c_str(),
                seconds, c.budget_seconds, in_time ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace dptext

int main() { return dptext::Main(); }
