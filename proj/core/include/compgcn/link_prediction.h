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

#ifndef COMPGCN_LINK_PREDICTION_H_
#define COMPGCN_LINK_PREDICTION_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "compgcn/config.h"
#include "compgcn/evaluation.h"
#include "compgcn/graph.h"
#include "compgcn/model.h"

namespace compgcn {

// Training produced a non-finite loss.
class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  // Set on evaluation epochs when the graph has a validation split.
  std::optional<Metrics> valid;
};

struct LinkPredictionResult {
  // Parameters from the evaluation with the best validation MRR (the final
  // parameters when there is no validation split).
  CompGcnModel model;
  int best_epoch = 0;
  std::vector<EpochRecord> history;
  std::vector<double> step_losses;
  std::optional<EvalReport> best_valid;
  std::optional<EvalReport> test;
};

// Full-graph encoding on every step, 1-N BCE over shuffled mini-batches of
// train queries in both directions, Adam updates, periodic filtered
// validation with early stopping, and a final filtered test report.
LinkPredictionResult TrainLinkPrediction(const RunConfig& config, const MultiRelGraph& graph);

// Builds the model a configuration describes, drawing initial values from
// a generator seeded with config.seed.
CompGcnModel MakeLinkPredictionModel(const RunConfig& config, const MultiRelGraph& graph);

// metrics.csv: epoch,loss,valid_mrr,valid_mr,valid_hits1,valid_hits3,valid_hits10
std::string MetricsCsv(const std::vector<EpochRecord>& history);

nlohmann::json LinkPredictionReportJson(const RunConfig& config,
                                        const LinkPredictionResult& result);

// Writes metrics.csv, report.json and model.ckpt into `dir`.
void WriteLinkPredictionArtifacts(const std::filesystem::path& dir, const RunConfig& config,
                                  const MultiRelGraph& graph, const LinkPredictionResult& result);

void SaveModel(const std::filesystem::path& path, const CompGcnModel& model,
               const nlohmann::json& extra_metadata = nlohmann::json::object());
// Rebuilds a model from a checkpoint written by SaveModel.
CompGcnModel LoadModel(const std::filesystem::path& path);

}  // namespace compgcn

#endif  // COMPGCN_LINK_PREDICTION_H_
