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


// Shared fixtures for the unit and acceptance tests: random inputs,
// independent reference implementations and small synthetic datasets.

#ifndef COMPGCN_TESTS_SUPPORT_TEST_SUPPORT_H_
#define COMPGCN_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "compgcn/classification.h"
#include "compgcn/graph.h"
#include "compgcn/model.h"
#include "compgcn/random.h"
#include "compgcn/tensor.h"

namespace compgcn::testing {

using Matrix = std::vector<std::vector<double>>;

Tensor RandomTensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0);
Matrix ToMatrix(const Tensor& t);
double MaxAbsDiff(const Tensor& a, const Tensor& b);

// All triples distinct and in the train split.
MultiRelGraph RandomGraph(Rng& rng, int32_t max_entities, int32_t max_relations,
                          int32_t max_triples);
// Like RandomGraph but every triple gets a random split.
MultiRelGraph RandomSplitGraph(Rng& rng, int32_t max_entities, int32_t max_relations,
                               int32_t max_triples);

// phi written out from its definition, independent of the library.
std::vector<double> ReferenceCompose(Composition op, std::span<const double> a,
                                     std::span<const double> b);
std::vector<double> ReferenceCorrelation(std::span<const double> a, std::span<const double> b);

// Dense reference of one layer built from per-relation adjacency matrices of
// `graph`'s train triples (inverse and self-loop relations derived here, not
// by the library). Dropout is not modelled.
struct DenseLayerOutput {
  Matrix nodes;
  Matrix relations;
};
DenseLayerOutput DenseLayerReference(const MultiRelGraph& graph, const Matrix& nodes,
                                     const Matrix& relations, const LayerParams& params,
                                     const LayerOptions& options);

// f(D^-1/2 (A + I) D^-1/2 H W) for an undirected graph with 0/1 adjacency.
Matrix KipfDenseReference(int32_t num_nodes, std::span<const std::pair<int32_t, int32_t>> edges,
                          const Matrix& h, const Matrix& w, Activation activation);

// Filtered rank from sorted competitor lists: the optimistic and pessimistic
// positions of gold among its ties are found by sorting, and the rank is the
// optimistic position plus half the gap rounded up.
int64_t SortedRankOracle(std::span<const double> scores, EntityId gold,
                         std::span<const EntityId> known_true);

// 20 entities in three groups A (0-6), B (7-13), C (14-19). Two paths
// A->B->C: r0 then r1, and r3 then r4. r2 composes the first path and r5 the
// second. For the last `held_out` A entities the r2 and r5 triples go to the
// test split.
MultiRelGraph CompositionalKg(int held_out = 3);

// Small KG with a valid and test split for trend studies.
MultiRelGraph ToyKg(uint64_t seed);

// Twelve train triples with one relation per category:
// r0 1-1, r1 1-N, r2 N-1, r3 N-N.
MultiRelGraph CategoryGraph();

// Graphs of 3-7 nodes whose label is whether relation "r1" occurs.
GraphDataset RelationPresenceDataset(int num_graphs, uint64_t seed);

// Two dense clusters joined by a few cross edges; label = cluster.
NodeClassificationData TwoClusterGraph(uint64_t seed);

// A fresh empty directory under the system temp directory.
std::filesystem::path TempDir(const std::string& name);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace compgcn::testing

#endif  // COMPGCN_TESTS_SUPPORT_TEST_SUPPORT_H_
