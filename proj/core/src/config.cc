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

#include "compgcn/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace compgcn {
namespace {

const std::set<std::string> kKnownKeys = {
    "task",     "dataset",  "model",           "score",         "transe_norm",
    "lr",       "batch_size", "epochs",        "eval_every",    "seed",
    "label_smoothing", "patience", "category_threshold", "test_fraction",
    "validation_fraction", "folds", "grid"};

template <typename T>
bool InDomain(T value, std::initializer_list<T> domain) {
  for (T d : domain) {
    if (std::abs(static_cast<double>(value) - static_cast<double>(d)) < 1e-12) return true;
  }
  return false;
}

template <typename T>
void ReadIf(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

GridSpec GridFromJson(const nlohmann::json& j) {
  GridSpec g;
  ReadIf(j, "layers", g.layers);
  ReadIf(j, "lr", g.learning_rates);
  ReadIf(j, "batch_size", g.batch_sizes);
  ReadIf(j, "dropout", g.dropouts);
  for (int k : g.layers) {
    if (!InDomain(k, {1, 2, 3})) throw ConfigError("grid.layers value outside {1, 2, 3}");
  }
  for (double lr : g.learning_rates) {
    if (!InDomain(lr, {0.001, 0.0001})) throw ConfigError("grid.lr value outside {0.001, 0.0001}");
  }
  for (int b : g.batch_sizes) {
    if (!InDomain(b, {128, 256})) throw ConfigError("grid.batch_size value outside {128, 256}");
  }
  for (double p : g.dropouts) {
    if (!InDomain(p, {0.0, 0.1, 0.2, 0.3})) {
      throw ConfigError("grid.dropout value outside {0.0, 0.1, 0.2, 0.3}");
    }
  }
  return g;
}

}  // namespace

std::string_view TaskName(Task t) {
  switch (t) {
    case Task::kLinkPrediction:
      return "link-prediction";
    case Task::kNodeClassification:
      return "node-classification";
    case Task::kGraphClassification:
      return "graph-classification";
  }
  return "?";
}

Task ParseTask(std::string_view name) {
  if (name == "link-prediction") return Task::kLinkPrediction;
  if (name == "node-classification") return Task::kNodeClassification;
  if (name == "graph-classification") return Task::kGraphClassification;
  throw ConfigError("unknown task '" + std::string(name) + "'");
}

RunConfig RunConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("run configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.count(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }
  RunConfig c;
  try {
    if (j.contains("task")) c.task = ParseTask(j.at("task").get<std::string>());
    ReadIf(j, "dataset", c.dataset);
    if (j.contains("model")) c.model = ModelConfigFromJson(j.at("model"));
    if (j.contains("score")) c.score.function = ParseScoreFunction(j.at("score").get<std::string>());
    ReadIf(j, "transe_norm", c.score.transe_norm);
    ReadIf(j, "lr", c.lr);
    ReadIf(j, "batch_size", c.batch_size);
    ReadIf(j, "epochs", c.epochs);
    ReadIf(j, "eval_every", c.eval_every);
    ReadIf(j, "seed", c.seed);
    ReadIf(j, "label_smoothing", c.label_smoothing);
    ReadIf(j, "patience", c.patience);
    ReadIf(j, "category_threshold", c.category_threshold);
    ReadIf(j, "test_fraction", c.test_fraction);
    ReadIf(j, "validation_fraction", c.validation_fraction);
    ReadIf(j, "folds", c.folds);
    if (j.contains("grid") && !j.at("grid").is_null()) c.grid = GridFromJson(j.at("grid"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  if (c.score.transe_norm != 1 && c.score.transe_norm != 2) {
    throw ConfigError("transe_norm must be 1 or 2");
  }
  if (!(c.lr > 0.0)) throw ConfigError("lr must be positive");
  if (c.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (c.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (c.eval_every < 1) throw ConfigError("eval_every must be >= 1");
  if (!(c.label_smoothing >= 0.0 && c.label_smoothing < 1.0)) {
    throw ConfigError("label_smoothing must lie in [0, 1)");
  }
  if (c.patience < 1) throw ConfigError("patience must be >= 1");
  if (!(c.category_threshold > 0.0)) throw ConfigError("category_threshold must be positive");
  if (!(c.test_fraction >= 0.0 && c.test_fraction < 1.0) ||
      !(c.validation_fraction >= 0.0 && c.validation_fraction < 1.0)) {
    throw ConfigError("test_fraction and validation_fraction must lie in [0, 1)");
  }
  if (c.folds < 2) throw ConfigError("folds must be >= 2");
  return c;
}

nlohmann::json RunConfigToJson(const RunConfig& c) {
  nlohmann::json j = {{"task", TaskName(c.task)},
                      {"dataset", c.dataset},
                      {"model", ModelConfigToJson(c.model)},
                      {"score", ScoreFunctionName(c.score.function)},
                      {"transe_norm", c.score.transe_norm},
                      {"lr", c.lr},
                      {"batch_size", c.batch_size},
                      {"epochs", c.epochs},
                      {"eval_every", c.eval_every},
                      {"seed", c.seed},
                      {"label_smoothing", c.label_smoothing},
                      {"patience", c.patience},
                      {"category_threshold", c.category_threshold},
                      {"test_fraction", c.test_fraction},
                      {"validation_fraction", c.validation_fraction},
                      {"folds", c.folds}};
  if (c.grid) {
    j["grid"] = {{"layers", c.grid->layers},
                 {"lr", c.grid->learning_rates},
                 {"batch_size", c.grid->batch_sizes},
                 {"dropout", c.grid->dropouts}};
  } else {
    j["grid"] = nullptr;
  }
  return j;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigFileError("cannot read config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  RunConfig c = RunConfigFromJson(j);
  if (!c.dataset.empty() && std::filesystem::path(c.dataset).is_relative()) {
    c.dataset = (path.parent_path() / c.dataset).lexically_normal().string();
  }
  return c;
}

std::vector<RunConfig> ExpandGrid(const RunConfig& config) {
  if (!config.grid) return {config};
  const GridSpec& g = *config.grid;
  const std::vector<int> layers = g.layers.empty() ? std::vector<int>{config.model.num_layers()}
                                                   : g.layers;
  const std::vector<double> lrs = g.learning_rates.empty() ? std::vector<double>{config.lr}
                                                           : g.learning_rates;
  const std::vector<int> batches = g.batch_sizes.empty() ? std::vector<int>{config.batch_size}
                                                         : g.batch_sizes;
  const std::vector<double> drops = g.dropouts.empty()
                                        ? std::vector<double>{config.model.dropout}
                                        : g.dropouts;
  std::vector<RunConfig> out;
  for (int k : layers) {
    for (double lr : lrs) {
      for (int b : batches) {
        for (double p : drops) {
          RunConfig c = config;
          c.grid.reset();
          const int64_t width = c.model.dims.size() > 1 ? c.model.dims.back() : c.model.dims[0];
          c.model.dims.resize(1);
          c.model.dims.resize(k + 1, width);
          c.lr = lr;
          c.batch_size = b;
          c.model.dropout = p;
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

}  // namespace compgcn
