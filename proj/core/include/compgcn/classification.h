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

#ifndef COMPGCN_CLASSIFICATION_H_
#define COMPGCN_CLASSIFICATION_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "compgcn/config.h"
#include "compgcn/graph.h"
#include "compgcn/model.h"
#include "compgcn/tape.h"

namespace compgcn {

struct NodeLabels {
  std::vector<EntityId> nodes;
  std::vector<int32_t> labels;
  // Train or test for each labelled node; validation is carved out of train
  // at training time.
  std::vector<Split> splits;
  std::vector<std::string> class_names;

  int32_t num_classes() const { return static_cast<int32_t>(class_names.size()); }
};

struct NodeClassificationData {
  MultiRelGraph graph;
  NodeLabels labels;
};

// Reads train.txt (valid.txt and test.txt optional) plus labels.tsv with
// lines entity<TAB>class[<TAB>train|test]. Without the split column, a
// config.test_fraction share is held out at training time.
NodeClassificationData LoadNodeClassification(const std::filesystem::path& dir);

struct NodeClassificationReport {
  double train_accuracy = 0.0;
  double valid_accuracy = 0.0;
  double test_accuracy = 0.0;
  int best_epoch = 0;
  int64_t num_train = 0;
  int64_t num_valid = 0;
  int64_t num_test = 0;
  std::vector<double> losses;
};

// Encoder plus a linear softmax head on the final node states, full-batch
// cross entropy on training labels, best validation accuracy checkpoint
// evaluated on the test labels.
NodeClassificationReport TrainNodeClassification(const RunConfig& config,
                                                 const NodeClassificationData& data);

// One labelled graph. Node types index a vocabulary shared by the dataset;
// edges use dataset-wide relation ids.
struct GraphSample {
  int32_t num_nodes = 0;
  std::vector<int32_t> node_types;
  std::vector<Triple> edges;
  int32_t label = 0;
};

struct GraphDataset {
  std::vector<GraphSample> graphs;
  std::vector<std::string> relation_names;
  std::vector<std::string> node_type_names;
  std::vector<std::string> class_names;

  int32_t num_relations() const { return static_cast<int32_t>(relation_names.size()); }
  int32_t num_node_types() const { return static_cast<int32_t>(node_type_names.size()); }
  int32_t num_classes() const { return static_cast<int32_t>(class_names.size()); }
};

// Reads index.tsv (graph-directory<TAB>class) and, per graph directory,
// edges.tsv (node<TAB>relation<TAB>node) plus an optional nodes.tsv
// (node<TAB>type). Nodes without a type share the type "_".
GraphDataset LoadGraphDataset(const std::filesystem::path& dir);

// Disjoint union of several graphs as one all-train multi-relational graph.
struct GraphBatch {
  MultiRelGraph graph;
  std::vector<int32_t> node_types;
  std::vector<int32_t> graph_of_node;
  std::vector<int32_t> labels;
};

GraphBatch MakeGraphBatch(const GraphDataset& data, std::span<const size_t> members);

// h_G = mean of the node states of each graph.
Var MeanReadout(Var nodes, std::span<const int32_t> graph_of_node, int64_t num_graphs);

// `k` disjoint folds covering [0, n) whose sizes differ by at most one;
// indices are shuffled with `seed` first.
std::vector<std::vector<size_t>> KFoldSplit(size_t n, int k, uint64_t seed);

struct CrossValidationReport {
  std::vector<double> fold_accuracies;
  double mean = 0.0;
  // Population standard deviation over folds.
  double stddev = 0.0;
};

// For each fold, trains encoder + mean readout + softmax head on the other
// folds and records accuracy on the held-out fold after the last epoch.
CrossValidationReport TrainGraphClassification(const RunConfig& config,
                                               const GraphDataset& data);

}  // namespace compgcn

#endif  // COMPGCN_CLASSIFICATION_H_
