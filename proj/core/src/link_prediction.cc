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

#include "compgcn/link_prediction.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "compgcn/checkpoint.h"
#include "compgcn/filter_index.h"
#include "compgcn/optim.h"
#include "compgcn/random.h"
#include "compgcn/relation_category.h"
#include "compgcn/scoring.h"

namespace compgcn {
namespace {

// Independent streams so that, e.g., changing dropout does not perturb
// initialization or batch order.
constexpr uint64_t kShuffleStream = 0x5348554646ULL;
constexpr uint64_t kDropoutStream = 0x44524f50ULL;

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

CompGcnModel MakeLinkPredictionModel(const RunConfig& config, const MultiRelGraph& graph) {
  Rng init_rng(config.seed);
  return CompGcnModel(config.model, graph.num_entities(), 2 * graph.num_relations() + 1, init_rng);
}

LinkPredictionResult TrainLinkPrediction(const RunConfig& config, const MultiRelGraph& graph) {
  const AugmentedGraph aug = Augment(graph);
  const FilterIndex filter = BuildFilterIndex(graph);
  const std::vector<RelationCategoryInfo> categories =
      CategorizeRelations(graph, config.category_threshold);
  std::vector<TrainingQuery> queries = BuildTrainingQueries(graph);
  if (queries.empty()) throw std::invalid_argument("no training queries: empty train split");

  CompGcnModel model = MakeLinkPredictionModel(config, graph);
  Rng shuffle_rng(config.seed ^ kShuffleStream);
  Rng dropout_rng(config.seed ^ kDropoutStream);
  Adam adam(model.parameters(), AdamOptions{.lr = config.lr});
  adam.ZeroGrad();

  const bool has_valid = graph.CountIn(Split::kValid) > 0;
  LinkPredictionResult result{model, 0, {}, {}, std::nullopt, std::nullopt};
  double best_mrr = -1.0;
  int stale = 0;

  std::vector<size_t> order(queries.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<TrainingQuery> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    int batches = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      batch.clear();
      for (size_t i = start; i < end; ++i) batch.push_back(queries[order[i]]);
      Tape tape;
      const Encoding enc = model.Encode(tape, aug, /*training=*/true, &dropout_rng);
      Var loss = LinkPredictionLoss(config.score, enc, batch, config.label_smoothing);
      const double value = loss.value().item();
      if (!std::isfinite(value)) {
        throw TrainingDiverged("non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                               std::to_string(batches + 1));
      }
      tape.Backward(loss);
      adam.Step();
      adam.ZeroGrad();
      result.step_losses.push_back(value);
      epoch_loss += value;
      ++batches;
    }
    EpochRecord record{epoch, epoch_loss / std::max(batches, 1), std::nullopt};
    const bool eval_now = epoch % config.eval_every == 0 || epoch == config.epochs;
    if (has_valid && eval_now) {
      Evaluation valid = EvaluateModel(model, aug, graph, Split::kValid, filter, config.score,
                                       categories);
      record.valid = valid.report.overall;
      if (valid.report.overall.mrr > best_mrr) {
        best_mrr = valid.report.overall.mrr;
        result.model = model;
        result.best_epoch = epoch;
        result.best_valid = valid.report;
        stale = 0;
      } else {
        ++stale;
      }
    }
    result.history.push_back(record);
    if (has_valid && stale >= config.patience) break;
  }
  if (!has_valid) {
    result.model = model;
    result.best_epoch = result.history.empty() ? 0 : result.history.back().epoch;
  }
  if (graph.CountIn(Split::kTest) > 0) {
    result.test = EvaluateModel(result.model, aug, graph, Split::kTest, filter, config.score,
                                categories)
                      .report;
  }
  return result;
}

std::string MetricsCsv(const std::vector<EpochRecord>& history) {
  std::ostringstream out;
  out << "epoch,loss,valid_mrr,valid_mr,valid_hits1,valid_hits3,valid_hits10\n";
  for (const EpochRecord& r : history) {
    out << r.epoch << ',' << Num(r.loss);
    if (r.valid) {
      out << ',' << Num(r.valid->mrr) << ',' << Num(r.valid->mr) << ',' << Num(r.valid->hits1)
          << ',' << Num(r.valid->hits3) << ',' << Num(r.valid->hits10);
    } else {
      out << ",,,,,";
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json LinkPredictionReportJson(const RunConfig& config,
                                        const LinkPredictionResult& result) {
  nlohmann::json j = {{"config", RunConfigToJson(config)},
                      {"best_epoch", result.best_epoch},
                      {"epochs_run", result.history.size()}};
  j["valid"] = result.best_valid ? ReportToJson(*result.best_valid) : nlohmann::json();
  j["test"] = result.test ? ReportToJson(*result.test) : nlohmann::json();
  return j;
}

void SaveModel(const std::filesystem::path& path, const CompGcnModel& model,
               const nlohmann::json& extra_metadata) {
  nlohmann::json meta = extra_metadata;
  meta["model"] = ModelConfigToJson(model.config());
  meta["num_nodes"] = model.num_nodes();
  meta["num_relations"] = model.num_relations();
  const auto params = model.parameters();
  SaveCheckpoint(path, params, meta);
}

CompGcnModel LoadModel(const std::filesystem::path& path) {
  const CheckpointData data = LoadCheckpoint(path);
  const auto& meta = data.metadata;
  if (!meta.contains("model") || !meta.contains("num_nodes") || !meta.contains("num_relations")) {
    throw CheckpointError(path.string() + " lacks model metadata");
  }
  Rng unused(0);
  CompGcnModel model(ModelConfigFromJson(meta.at("model")), meta.at("num_nodes").get<int32_t>(),
                     meta.at("num_relations").get<int32_t>(), unused);
  RestoreParameters(data, model.parameters());
  return model;
}

void WriteLinkPredictionArtifacts(const std::filesystem::path& dir, const RunConfig& config,
                                  const MultiRelGraph& graph, const LinkPredictionResult& result) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "metrics.csv", std::ios::trunc | std::ios::binary);
    csv << MetricsCsv(result.history);
  }
  {
    std::ofstream report(dir / "report.json", std::ios::trunc | std::ios::binary);
    report << LinkPredictionReportJson(config, result).dump(2) << '\n';
  }
  SaveModel(dir / "model.ckpt", result.model,
            {{"num_entities", graph.num_entities()}, {"num_base_relations", graph.num_relations()}});
}

}  // namespace compgcn
