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

#ifndef COMPGCN_CONFIG_H_
#define COMPGCN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "compgcn/model.h"
#include "compgcn/scoring.h"

namespace compgcn {

enum class Task : uint8_t { kLinkPrediction, kNodeClassification, kGraphClassification };

std::string_view TaskName(Task t);
Task ParseTask(std::string_view name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The configuration file itself could not be opened.
class ConfigFileError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Values to enumerate; each list must stay inside the allowed domain:
// layers {1, 2, 3}, lr {0.001, 0.0001}, batch size {128, 256}, dropout
// {0.0, 0.1, 0.2, 0.3}. Empty lists keep the base configuration's value.
struct GridSpec {
  std::vector<int> layers;
  std::vector<double> learning_rates;
  std::vector<int> batch_sizes;
  std::vector<double> dropouts;
};

struct RunConfig {
  Task task = Task::kLinkPrediction;
  std::string dataset;
  ModelConfig model;
  ScoreOptions score;
  double lr = 1e-3;
  int batch_size = 128;
  int epochs = 100;
  int eval_every = 1;
  uint64_t seed = 0;
  double label_smoothing = 0.1;
  // Consecutive evaluations without improvement before stopping.
  int patience = 25;
  double category_threshold = 1.5;
  // Node classification: held-out share of labelled nodes when labels.tsv
  // carries no split column, and the share of training labels kept for
  // validation.
  double test_fraction = 0.2;
  double validation_fraction = 0.1;
  int folds = 10;
  std::optional<GridSpec> grid;
};

RunConfig RunConfigFromJson(const nlohmann::json& json);
nlohmann::json RunConfigToJson(const RunConfig& config);
// Throws ConfigFileError naming the path when it cannot be read and
// ConfigError for invalid contents.
RunConfig LoadRunConfig(const std::filesystem::path& path);

// One configuration per grid point, in row-major order over (layers, lr,
// batch size, dropout). Changing the layer count repeats the last hidden
// width. Returns {config} when no grid is set.
std::vector<RunConfig> ExpandGrid(const RunConfig& config);

}  // namespace compgcn

#endif  // COMPGCN_CONFIG_H_
