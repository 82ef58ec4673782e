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

#include "dptext/cli.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>
#include <utility>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "dptext/corpus_io.h"
#include "dptext/experiment.h"
#include "dptext/metrics.h"
#include "dptext/model.h"
#include "dptext/numeric_text.h"
#include "dptext/run_config.h"
#include "dptext/synthetic.h"
#include "dptext/text_pipeline.h"
#include "dptext/trainer.h"

namespace dptext {
namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

constexpr absl::string_view kSweepCsvHeader =
    "model_tag,epsilon,seed,accuracy,precision,recall,f1,status";

// Config file path plus `key = value` overrides collected from flags, applied
// in that order.
struct ConfigSources {
  std::string config_path;
  Overrides overrides;
};

void AddOverride(CLI::App* app, ConfigSources& sources,
                 const std::string& flag, const std::string& key,
                 const std::string& help) {
  app->add_option_function<std::string>(
      flag,
      [&sources, key](const std::string& value) {
        sources.overrides.emplace_back(key, value);
      },
      help);
}

void AddPathOptions(CLI::App* app, ConfigSources& sources) {
  app->add_option("--config", sources.config_path,
                  "Flat key = value config file; flags override it");
  AddOverride(app, sources, "--corpus", "corpus", "Cleaned corpus (JSONL)");
  AddOverride(app, sources, "--vocab", "vocab", "Vocabulary file (TSV)");
  AddOverride(app, sources, "--features", "features",
              "Feature scheme: count or tfidf");
  AddOverride(app, sources, "--split-seed", "split_seed",
              "Seed of the train/val/test split");
}

void AddTrainingOptions(CLI::App* app, ConfigSources& sources) {
  AddOverride(app, sources, "--seed", "seed", "Training seed");
  AddOverride(app, sources, "--epsilon", "epsilon", "Per-step epsilon");
  AddOverride(app, sources, "--delta", "delta", "Per-step delta");
  AddOverride(app, sources, "--clip", "clip",
              "Gradient clip norm C (inf disables clipping)");
  AddOverride(app, sources, "--lr", "lr", "Learning rate");
  AddOverride(app, sources, "--epochs", "epochs", "Number of epochs");
  AddOverride(app, sources, "--batch-size", "batch_size", "Mini-batch size");
  AddOverride(app, sources, "--clip-mode", "clip_mode",
              "batch or per_example");
  AddOverride(app, sources, "--sigma-mode", "sigma_mode",
              "literal or sensitivity");
  AddOverride(app, sources, "--l2", "l2", "L2 regularization strength");
  AddOverride(app, sources, "--epsilon-cap", "epsilon_cap",
              "Total epsilon budget (none = unbounded)");
  AddOverride(app, sources, "--delta-cap", "delta_cap",
              "Total delta budget (none = unbounded)");
  AddOverride(app, sources, "--mode", "mode", "dp or baseline");
  app->add_flag_callback(
      "--no-noise",
      [&sources] { sources.overrides.emplace_back("noise", "false"); },
      "Disable Gaussian noise (clipping and accounting still apply)");
}

// Resolves the final RunConfig. Returns kExitOk or kExitUsage.
int ResolveConfig(const ConfigSources& sources, RunConfig& config,
                  std::ostream& err) {
  if (!sources.config_path.empty()) {
    const absl::Status s = ApplyConfigFile(sources.config_path, config);
    if (!s.ok()) {
      err << "error: " << sources.config_path << ": " << s.message() << "\n";
      return kExitUsage;
    }
  }
  for (const auto& [key, value] : sources.overrides) {
    const absl::Status s = config.Set(key, value);
    if (!s.ok()) {
      err << "error: " << s.message() << "\n";
      return kExitUsage;
    }
  }
  const absl::Status s = config.Validate();
  if (!s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int DataError(std::ostream& err, absl::string_view context,
              const absl::Status& status) {
  err << "error: " << context << ": " << status.message() << "\n";
  return kExitDataError;
}

bool RequirePath(const std::string& path, absl::string_view what,
                 std::ostream& err) {
  if (!path.empty()) return true;
  err << "error: missing " << what << " path\n";
  return false;
}

// Appends `row` to a CSV file, writing `header` first if the file is new or
// empty.
absl::Status AppendCsvRow(const std::string& path, absl::string_view header,
                          absl::string_view row) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) ||
                     std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot open ", path));
  if (fresh) out << header << '\n';
  out << row << '\n';
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

struct LoadedData {
  PreparedData prepared;
  Vocabulary vocab;
};

absl::StatusOr<LoadedData> LoadData(const RunConfig& config) {
  auto docs = LoadCorpus(config.corpus_path);
  if (!docs.ok()) {
    return absl::Status(docs.status().code(),
                        absl::StrCat(config.corpus_path, ": ",
                                     docs.status().message()));
  }
  if (docs->empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(config.corpus_path, ": empty corpus"));
  }
  auto vocab = Vocabulary::Load(config.vocab_path);
  if (!vocab.ok()) {
    return absl::Status(vocab.status().code(),
                        absl::StrCat(config.vocab_path, ": ",
                                     vocab.status().message()));
  }
  auto prepared = PrepareData(*docs, *vocab, config);
  if (!prepared.ok()) return prepared.status();
  return LoadedData{*std::move(prepared), *std::move(vocab)};
}

// ---------------------------------------------------------------------------
// clean

int CmdClean(const std::string& corpus_path, const std::string& stopwords_path,
             const std::string& out_path, std::ostream& out,
             std::ostream& err) {
  auto docs = LoadCorpus(corpus_path);
  if (!docs.ok()) return DataError(err, corpus_path, docs.status());
  if (docs->empty()) {
    return DataError(err, corpus_path,
                     absl::InvalidArgumentError("empty corpus"));
  }
  StopwordList stops = StopwordList::Default();
  if (!stopwords_path.empty()) {
    auto loaded = StopwordList::Load(stopwords_path);
    if (!loaded.ok()) return DataError(err, stopwords_path, loaded.status());
    stops = *std::move(loaded);
  }
  std::vector<RawDocument> cleaned;
  cleaned.reserve(docs->size());
  for (const RawDocument& doc : *docs) {
    RawDocument c = doc;
    c.text = absl::StrJoin(CleanDocument(doc, stops), " ");
    cleaned.push_back(std::move(c));
  }
  if (const absl::Status s = SaveCorpus(cleaned, out_path); !s.ok()) {
    return DataError(err, out_path, s);
  }
  out << "cleaned " << cleaned.size() << " documents -> " << out_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// vocab

int CmdVocab(const RunConfig& config, const std::string& out_path,
             std::ostream& out, std::ostream& err) {
  auto docs = LoadCorpus(config.corpus_path);
  if (!docs.ok()) return DataError(err, config.corpus_path, docs.status());
  if (docs->empty()) {
    return DataError(err, config.corpus_path,
                     absl::InvalidArgumentError("empty corpus"));
  }
  std::vector<TokenList> token_lists;
  token_lists.reserve(docs->size());
  for (const RawDocument& doc : *docs) token_lists.push_back(CleanedTokens(doc));
  auto vocab = Vocabulary::Build(token_lists, config.min_doc_freq);
  if (!vocab.ok()) return DataError(err, config.corpus_path, vocab.status());
  if (const absl::Status s = vocab->Save(out_path); !s.ok()) {
    return DataError(err, out_path, s);
  }
  out << "vocabulary: " << vocab->size() << " tokens from "
      << vocab->num_documents() << " documents -> " << out_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

int CmdTrain(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!RequirePath(config.corpus_path, "corpus", err) ||
      !RequirePath(config.vocab_path, "vocabulary", err) ||
      !RequirePath(config.model_path, "model", err) ||
      !RequirePath(config.report_path, "report", err)) {
    return kExitUsage;
  }
  auto data = LoadData(config);
  if (!data.ok()) return DataError(err, "train", data.status());
  const Dataset& train = data->prepared.train;

  TrainReport report;
  std::optional<ModelParams> params;
  if (config.mode == TrainMode::kDp) {
    auto result = TrainDp(train, config.train);
    if (!result.ok()) return DataError(err, "train", result.status());
    params = std::move(result->params);
    report = std::move(result->report);
  } else {
    auto result = TrainBaseline(train, config.train);
    if (!result.ok()) return DataError(err, "train", result.status());
    params = std::move(result->params);
    report = std::move(result->report);
  }

  if (const absl::Status s = SaveCheckpoint(*params, config.model_path);
      !s.ok()) {
    return DataError(err, config.model_path, s);
  }
  std::ofstream report_out(config.report_path,
                           std::ios::binary | std::ios::trunc);
  if (!report_out) {
    return DataError(err, config.report_path,
                     absl::UnavailableError("cannot open for writing"));
  }
  WriteRunReport(config, report, report_out);
  report_out.flush();
  if (!report_out) {
    return DataError(err, config.report_path,
                     absl::DataLossError("write failed"));
  }

  out << "mode=" << TrainModeName(config.mode)
      << " train_examples=" << train.examples.size()
      << " steps=" << report.steps_taken << "/" << report.planned_steps
      << " final_loss=" << FormatDouble(report.final_loss) << "\n";
  if (config.mode == TrainMode::kDp) {
    out << "sigma=" << FormatDouble(report.sigma)
        << " spent_epsilon=" << FormatDouble(report.spent_epsilon)
        << " spent_delta=" << FormatDouble(report.spent_delta) << "\n";
  }
  if (report.early_stopped) {
    out << "early stop: privacy budget exhausted after "
        << report.steps_taken << " of " << report.planned_steps
        << " steps; partial model saved\n";
  }
  out << "model -> " << config.model_path << ", report -> "
      << config.report_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

int CmdEvaluate(const RunConfig& config, Split split, const std::string& tag,
                std::ostream& out, std::ostream& err) {
  if (!RequirePath(config.corpus_path, "corpus", err) ||
      !RequirePath(config.vocab_path, "vocabulary", err) ||
      !RequirePath(config.model_path, "model", err)) {
    return kExitUsage;
  }
  auto params = LoadCheckpoint(config.model_path);
  if (!params.ok()) return DataError(err, config.model_path, params.status());
  auto data = LoadData(config);
  if (!data.ok()) return DataError(err, "evaluate", data.status());
  if (params->num_features() != data->vocab.size()) {
    return DataError(
        err, "evaluate",
        absl::InvalidArgumentError(absl::StrCat(
            "dimension mismatch: model has V=", params->num_features(),
            ", vocabulary has V=", data->vocab.size())));
  }
  auto metrics = EvaluateModel(*params, data->prepared.Get(split));
  if (!metrics.ok()) return DataError(err, "evaluate", metrics.status());

  const std::string row = FormatMetricsCsvRow(tag, *metrics);
  out << "# split=" << SplitName(split)
      << " averaging=" << AveragingName(metrics->averaging) << "\n"
      << kMetricsCsvHeader << "\n"
      << row << "\n";
  if (!config.metrics_path.empty()) {
    if (const absl::Status s =
            AppendCsvRow(config.metrics_path, kMetricsCsvHeader, row);
        !s.ok()) {
      return DataError(err, config.metrics_path, s);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepJob {
  bool baseline = false;
  double epsilon = 0.0;
  uint64_t seed = 0;
  std::string row;
  bool ok = false;
};

void RunSweepJob(const RunConfig& base, const PreparedData& data, Split split,
                 SweepJob& job) {
  RunConfig config = base;
  config.train.seed = job.seed;
  const std::string eps_text =
      job.baseline ? "inf" : FormatDouble(job.epsilon);
  auto fail = [&](const absl::Status& s) {
    std::string message(s.message());
    absl::StrReplaceAll({{",", ";"}, {"\n", " "}}, &message);
    job.row = absl::StrCat(job.baseline ? "baseline" : "dp", ",", eps_text,
                           ",", job.seed, ",,,,,error: ", message);
    job.ok = false;
  };

  absl::StatusOr<ModelParams> params = absl::UnknownError("not run");
  if (job.baseline) {
    auto result = TrainBaseline(data.train, config.train);
    if (!result.ok()) return fail(result.status());
    params = std::move(result->params);
  } else {
    config.train.epsilon = job.epsilon;
    auto result = TrainDp(data.train, config.train);
    if (!result.ok()) return fail(result.status());
    params = std::move(result->params);
  }
  auto metrics = EvaluateModel(*params, data.Get(split));
  if (!metrics.ok()) return fail(metrics.status());
  // Reuses the metrics CSV formatting for the four-decimal columns.
  const std::string metric_row = FormatMetricsCsvRow("", *metrics);
  job.row = absl::StrCat(job.baseline ? "baseline" : "dp", ",", eps_text, ",",
                         job.seed, metric_row, ",ok");
  job.ok = true;
}

int CmdSweep(const RunConfig& config, const std::vector<std::string>& epsilons,
             std::vector<uint64_t> seeds, Split split, size_t jobs_flag,
             const std::string& out_path, std::ostream& out,
             std::ostream& err) {
  if (epsilons.empty()) {
    err << "error: sweep needs a non-empty --epsilons list\n";
    return kExitUsage;
  }
  std::vector<double> eps_values;
  for (const std::string& text : epsilons) {
    const auto v = ParseDouble(text);
    if (!v || !(*v > 0.0)) {
      err << "error: invalid epsilon '" << text << "'\n";
      return kExitUsage;
    }
    eps_values.push_back(*v);
  }
  if (seeds.empty()) seeds.push_back(config.train.seed);
  if (!RequirePath(config.corpus_path, "corpus", err) ||
      !RequirePath(config.vocab_path, "vocabulary", err)) {
    return kExitUsage;
  }
  auto data = LoadData(config);
  if (!data.ok()) return DataError(err, "sweep", data.status());

  std::vector<SweepJob> jobs;
  for (const double eps : eps_values) {
    for (const uint64_t seed : seeds) {
      jobs.push_back(SweepJob{false, eps, seed, "", false});
    }
  }
  for (const uint64_t seed : seeds) {
    jobs.push_back(SweepJob{true, 0.0, seed, "", false});
  }

  // Each job owns its RNG streams; rows are written in job order afterwards.
  const size_t workers = std::clamp<size_t>(jobs_flag, 1, jobs.size());
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t i = next++; i < jobs.size(); i = next++) {
        RunSweepJob(config, data->prepared, split, jobs[i]);
      }
    });
  }
  for (std::thread& t : threads) t.join();

  std::ofstream file;
  std::ostream* csv = &out;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      return DataError(err, out_path,
                       absl::UnavailableError("cannot open for writing"));
    }
    csv = &file;
  }
  *csv << kSweepCsvHeader << "\n";
  size_t ok_count = 0;
  for (const SweepJob& job : jobs) {
    *csv << job.row << "\n";
    if (job.ok) ++ok_count;
  }
  csv->flush();
  if (!out_path.empty()) {
    out << "sweep: " << ok_count << "/" << jobs.size() << " runs ok (split="
        << SplitName(split) << ") -> " << out_path << "\n";
  }
  if (ok_count == 0) {
    err << "error: every sweep run failed\n";
    return kExitDataError;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

int CmdSynth(const SyntheticCorpusOptions& options, const std::string& out_path,
             std::ostream& out, std::ostream& err) {
  const std::vector<RawDocument> docs = GenerateSyntheticCorpus(options);
  if (const absl::Status s = SaveCorpus(docs, out_path); !s.ok()) {
    return DataError(err, out_path, s);
  }
  out << "wrote " << docs.size() << " synthetic documents -> " << out_path
      << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Differentially private text classification toolkit"};
  app.require_subcommand(1);

  // clean
  CLI::App* clean = app.add_subcommand("clean", "Clean a raw JSONL corpus");
  std::string clean_corpus, clean_stopwords, clean_out;
  clean->add_option("--corpus", clean_corpus, "Raw corpus (JSONL)")
      ->required();
  clean->add_option("--stopwords", clean_stopwords,
                    "Stopword file (default: built-in English list)");
  clean->add_option("--out", clean_out, "Cleaned corpus output")->required();

  // vocab
  CLI::App* vocab = app.add_subcommand("vocab", "Build a vocabulary");
  ConfigSources vocab_sources;
  std::string vocab_out;
  vocab->add_option("--config", vocab_sources.config_path, "Config file");
  AddOverride(vocab, vocab_sources, "--corpus", "corpus", "Cleaned corpus");
  AddOverride(vocab, vocab_sources, "--min-df", "min_doc_freq",
              "Minimum document frequency");
  vocab->add_option("--out", vocab_out, "Vocabulary output (TSV)")->required();

  // train
  CLI::App* train = app.add_subcommand("train", "Train a model");
  ConfigSources train_sources;
  AddPathOptions(train, train_sources);
  AddTrainingOptions(train, train_sources);
  AddOverride(train, train_sources, "--model", "model", "Checkpoint output");
  AddOverride(train, train_sources, "--report", "report", "Run report output");

  // evaluate
  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint");
  ConfigSources eval_sources;
  std::string eval_split = "test";
  std::string eval_tag = "model";
  AddPathOptions(evaluate, eval_sources);
  AddOverride(evaluate, eval_sources, "--model", "model", "Checkpoint");
  AddOverride(evaluate, eval_sources, "--out", "metrics",
              "Metrics CSV to append to");
  evaluate->add_option("--split", eval_split, "train, val, test or all");
  evaluate->add_option("--tag", eval_tag, "model_tag column value");

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "Epsilon sweep to CSV");
  ConfigSources sweep_sources;
  std::vector<std::string> sweep_eps;
  std::vector<uint64_t> sweep_seeds;
  std::string sweep_split = "test";
  std::string sweep_out;
  size_t sweep_jobs = 1;
  AddPathOptions(sweep, sweep_sources);
  AddTrainingOptions(sweep, sweep_sources);
  sweep->add_option("--epsilons", sweep_eps, "Comma-separated epsilon list")
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_seeds, "Comma-separated seed list")
      ->delimiter(',');
  sweep->add_option("--split", sweep_split, "Evaluation split");
  sweep->add_option("--out", sweep_out, "CSV output (default: stdout)");
  sweep->add_option("--jobs", sweep_jobs, "Concurrent runs");

  // synth
  CLI::App* synth =
      app.add_subcommand("synth", "Write a synthetic separable corpus");
  SyntheticCorpusOptions synth_options;
  std::string synth_out;
  synth->add_option("--out", synth_out, "Corpus output (JSONL)")->required();
  synth->add_option("--docs", synth_options.num_documents, "Documents");
  synth->add_option("--classes", synth_options.num_classes, "Classes (2-4)")
      ->check(CLI::Range(2, 4));
  synth->add_option("--seed", synth_options.seed, "Generator seed");
  synth->add_option("--indicator-pool", synth_options.indicator_pool,
                    "Indicator words per class (1-8)");
  synth->add_option("--min-indicators", synth_options.min_indicators,
                    "Minimum indicator words per document");
  synth->add_option("--max-indicators", synth_options.max_indicators,
                    "Maximum indicator words per document");
  synth->add_option("--min-filler", synth_options.min_filler,
                    "Minimum filler words per document");
  synth->add_option("--max-filler", synth_options.max_filler,
                    "Maximum filler words per document");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*clean) {
    return CmdClean(clean_corpus, clean_stopwords, clean_out, out, err);
  }
  if (*synth) return CmdSynth(synth_options, synth_out, out, err);

  RunConfig config;
  if (*vocab) {
    if (int rc = ResolveConfig(vocab_sources, config, err); rc != kExitOk) {
      return rc;
    }
    if (!RequirePath(config.corpus_path, "corpus", err)) return kExitUsage;
    return CmdVocab(config, vocab_out, out, err);
  }
  if (*train) {
    if (int rc = ResolveConfig(train_sources, config, err); rc != kExitOk) {
      return rc;
    }
    return CmdTrain(config, out, err);
  }
  if (*evaluate) {
    if (int rc = ResolveConfig(eval_sources, config, err); rc != kExitOk) {
      return rc;
    }
    const auto split = ParseSplit(eval_split);
    if (!split) {
      err << "error: unknown split '" << eval_split << "'\n";
      return kExitUsage;
    }
    return CmdEvaluate(config, *split, eval_tag, out, err);
  }
  if (*sweep) {
    if (int rc = ResolveConfig(sweep_sources, config, err); rc != kExitOk) {
      return rc;
    }
    const auto split = ParseSplit(sweep_split);
    if (!split) {
      err << "error: unknown split '" << sweep_split << "'\n";
      return kExitUsage;
    }
    return CmdSweep(config, sweep_eps, sweep_seeds, *split, sweep_jobs,
                    sweep_out, out, err);
  }
  return kExitUsage;
}

}  // namespace dptext
