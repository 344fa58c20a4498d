// Copyright 2026 The CompGCN-cpp Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end: train, eval, prune, sweep, gradcheck, inspect.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "compgcn/classification.h"
#include "compgcn/config.h"
#include "compgcn/evaluation.h"
#include "compgcn/filter_index.h"
#include "compgcn/gradient_suite.h"
#include "compgcn/graph.h"
#include "compgcn/graph_io.h"
#include "compgcn/link_prediction.h"
#include "compgcn/relation_category.h"
#include "compgcn/sweep.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace compgcn {
namespace {

constexpr int kExitMissingConfig = 2;

void WriteJson(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

RunConfig LoadConfig(const std::string& path, std::optional<uint64_t> seed) {
  RunConfig config = LoadRunConfig(path);
  if (seed) config.seed = *seed;
  return config;
}

void TrainLinkPredictionRun(const RunConfig& config, const MultiRelGraph& graph,
                            const fs::path& out) {
  const LinkPredictionResult result = TrainLinkPrediction(config, graph);
  WriteLinkPredictionArtifacts(out, config, graph, result);
  std::cout << "best epoch " << result.best_epoch << ", artifacts in " << out.string() << '\n';
  if (result.test) std::cout << FormatReportTable(*result.test);
}

void TrainNodeRun(const RunConfig& config, const NodeClassificationData& data,
                  const fs::path& out) {
  const NodeClassificationReport report = TrainNodeClassification(config, data);
  fs::create_directories(out);
  {
    std::ofstream csv(out / "metrics.csv", std::ios::binary | std::ios::trunc);
    csv << "epoch,loss\n";
    char buf[64];
    for (size_t i = 0; i < report.losses.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i + 1, report.losses[i]);
      csv << buf;
    }
  }
  WriteJson(out / "report.json", {{"config", RunConfigToJson(config)},
                                  {"best_epoch", report.best_epoch},
                                  {"train_accuracy", report.train_accuracy},
                                  {"valid_accuracy", report.valid_accuracy},
                                  {"test_accuracy", report.test_accuracy},
                                  {"num_train", report.num_train},
                                  {"num_valid", report.num_valid},
                                  {"num_test", report.num_test}});
  std::printf("test accuracy %.4f (%lld labelled test nodes)\n", report.test_accuracy,
              static_cast<long long>(report.num_test));
}

void TrainGraphRun(const RunConfig& config, const GraphDataset& data, const fs::path& out) {
  const CrossValidationReport report = TrainGraphClassification(config, data);
  fs::create_directories(out);
  WriteJson(out / "report.json", {{"config", RunConfigToJson(config)},
                                  {"fold_accuracies", report.fold_accuracies},
                                  {"mean", report.mean},
                                  {"stddev", report.stddev}});
  std::printf("accuracy %.4f +- %.4f over %zu folds\n", report.mean, report.stddev,
              report.fold_accuracies.size());
}

int RunTrain(const std::string& config_path, std::optional<uint64_t> seed, const fs::path& out) {
  const RunConfig base = LoadConfig(config_path, seed);
  const std::vector<RunConfig> runs = ExpandGrid(base);
  for (size_t i = 0; i < runs.size(); ++i) {
    const fs::path dir = runs.size() == 1 ? out : out / ("run_" + std::to_string(i));
    switch (base.task) {
      case Task::kLinkPrediction:
        TrainLinkPredictionRun(runs[i], LoadTriples(runs[i].dataset).graph, dir);
        break;
      case Task::kNodeClassification:
        TrainNodeRun(runs[i], LoadNodeClassification(runs[i].dataset), dir);
        break;
      case Task::kGraphClassification:
        TrainGraphRun(runs[i], LoadGraphDataset(runs[i].dataset), dir);
        break;
    }
  }
  return 0;
}

int RunEval(const std::string& config_path, const fs::path& checkpoint, const std::string& split,
            const std::string& out) {
  const RunConfig config = LoadConfig(config_path, std::nullopt);
  if (config.task != Task::kLinkPrediction) {
    throw std::invalid_argument("eval supports link-prediction configurations only");
  }
  const MultiRelGraph graph = LoadTriples(config.dataset).graph;
  CompGcnModel model = LoadModel(checkpoint);
  const AugmentedGraph aug = Augment(graph);
  if (model.num_nodes() != graph.num_entities() || model.num_relations() != aug.num_relations()) {
    throw std::invalid_argument("checkpoint " + checkpoint.string() +
                                " does not match the dataset's entity or relation counts");
  }
  const auto categories = CategorizeRelations(graph, config.category_threshold);
  const Evaluation eval = EvaluateModel(model, aug, graph, ParseSplit(split),
                                        BuildFilterIndex(graph), config.score, categories);
  std::cout << FormatReportTable(eval.report);
  if (!out.empty()) WriteJson(out, ReportToJson(eval.report));
  return 0;
}

int RunPrune(const fs::path& data, int32_t m, const fs::path& out) {
  const MultiRelGraph pruned = PruneTopRelations(LoadTriples(data).graph, m);
  WriteTriples(pruned, out);
  std::printf("kept %d relations, %d entities, %lld triples\n", pruned.num_relations(),
              pruned.num_entities(), static_cast<long long>(pruned.triples().size()));
  return 0;
}

int RunSweep(const std::string& config_path, std::optional<uint64_t> seed,
             const SweepOptions& options, const fs::path& out) {
  const RunConfig config = LoadConfig(config_path, seed);
  const std::vector<SweepRow> rows =
      ScalabilitySweep(config, LoadTriples(config.dataset).graph, options);
  fs::create_directories(out);
  WriteSweepCsv(out / "sweep.csv", rows);
  std::cout << SweepCsv(rows);
  return 0;
}

int RunGradcheck(uint64_t seed, int trials, bool verbose) {
  const GradCheckResult result = RunGradientSuite(seed, trials);
  if (verbose) {
    for (const GradCheckEntry& e : result.entries) {
      std::printf("%-40s %.3e\n", e.name.c_str(), e.relative_error);
    }
  }
  const bool ok = result.max_relative_error < 1e-4;
  std::printf("max relative error %.3e over %zu gradients: %s\n", result.max_relative_error,
              result.entries.size(), ok ? "ok" : "FAILED");
  return ok ? 0 : 1;
}

int RunInspect(const fs::path& dir) {
  const LoadedGraph loaded = LoadTriples(dir);
  const MultiRelGraph& g = loaded.graph;
  std::printf("Entities %d / Relations %d / Edges %zu\n", g.num_entities(), g.num_relations(),
              g.triples().size());
  std::printf("Train %lld / Valid %lld / Test %lld\n",
              static_cast<long long>(g.CountIn(Split::kTrain)),
              static_cast<long long>(g.CountIn(Split::kValid)),
              static_cast<long long>(g.CountIn(Split::kTest)));
  if (loaded.report.duplicates_dropped > 0) {
    std::printf("duplicates dropped %lld\n",
                static_cast<long long>(loaded.report.duplicates_dropped));
  }
  if (loaded.report.entities_outside_train > 0) {
    std::printf("entities absent from train %lld\n",
                static_cast<long long>(loaded.report.entities_outside_train));
  }
  return 0;
}

}  // namespace
}  // namespace compgcn

int main(int argc, char** argv) {
  using namespace compgcn;
  CLI::App app{"CompGCN multi-relational graph convolution toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string config_path, out = "out", device = "cpu";
  std::optional<uint64_t> seed;

  auto* train = app.add_subcommand("train", "Train a model described by a JSON config");
  train->add_option("--config", config_path, "Run configuration (JSON)")->required();
  train->add_option("--seed", seed, "Override the configured seed");
  train->add_option("--out", out, "Output directory")->capture_default_str();
  train->add_option("--device", device, "Compute device (only cpu)")
      ->check(CLI::IsMember({"cpu"}))
      ->capture_default_str();

  std::string checkpoint, split = "test", eval_out;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint with filtered ranking");
  eval->add_option("--config", config_path, "Run configuration (JSON)")->required();
  eval->add_option("--checkpoint", checkpoint, "model.ckpt written by train")->required();
  eval->add_option("--split", split, "train, valid or test")->capture_default_str();
  eval->add_option("--out", eval_out, "Write the report as JSON to this file");

  std::string data_dir;
  int32_t m = 0;
  auto* prune = app.add_subcommand("prune", "Keep the m most frequent relations");
  prune->add_option("--data", data_dir, "Dataset directory")->required();
  prune->add_option("--m", m, "Relations to keep")->required()->check(CLI::PositiveNumber);
  prune->add_option("--out", out, "Output dataset directory")->required();

  SweepOptions sweep_options;
  auto* sweep = app.add_subcommand("sweep", "Relation-count and basis-count study");
  sweep->add_option("--config", config_path, "Run configuration (JSON)")->required();
  sweep->add_option("--seed", seed, "Override the configured seed");
  sweep->add_option("--m", sweep_options.m_values, "Relation counts to prune to")->delimiter(',');
  sweep->add_option("--bases", sweep_options.basis_values, "Basis counts on the full graph")
      ->delimiter(',');
  sweep->add_option("--fixed-bases", sweep_options.fixed_bases, "Bases for the relation study")
      ->capture_default_str();
  sweep->add_option("--out", out, "Output directory")->capture_default_str();

  uint64_t check_seed = 0;
  int trials = 20;
  bool verbose = false;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient suite");
  gradcheck->add_option("--seed", check_seed, "Random seed")->capture_default_str();
  gradcheck->add_option("--trials", trials, "Random inputs per op")->capture_default_str();
  gradcheck->add_flag("--verbose", verbose, "Print every gradient's error");

  std::string inspect_dir;
  auto* inspect = app.add_subcommand("inspect", "Print dataset statistics");
  inspect->add_option("dir", inspect_dir, "Dataset directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return RunTrain(config_path, seed, out);
    if (*eval) return RunEval(config_path, checkpoint, split, eval_out);
    if (*prune) return RunPrune(data_dir, m, out);
    if (*sweep) return RunSweep(config_path, seed, sweep_options, out);
    if (*gradcheck) return RunGradcheck(check_seed, trials, verbose);
    if (*inspect) return RunInspect(inspect_dir);
  } catch (const ConfigFileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMissingConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
