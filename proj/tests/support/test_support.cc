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


#include "test_support.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace compgcn::testing {
namespace {

int32_t RandomCount(Rng& rng, int32_t lo, int32_t hi) {
  return lo + static_cast<int32_t>(UniformIndex(rng, static_cast<uint64_t>(hi - lo + 1)));
}

std::vector<std::string> RelationNames(int32_t n) {
  std::vector<std::string> names;
  for (int32_t r = 0; r < n; ++r) names.push_back("r" + std::to_string(r));
  return names;
}

Matrix Zeros(size_t rows, size_t cols) { return Matrix(rows, std::vector<double>(cols, 0.0)); }

Matrix MatMulRef(const Matrix& a, const Matrix& b) {
  const size_t inner = b.size();
  const size_t cols = inner == 0 ? 0 : b[0].size();
  Matrix out = Zeros(a.size(), cols);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t k = 0; k < inner; ++k) {
      for (size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

double ApplyActivation(Activation a, double x) {
  switch (a) {
    case Activation::kIdentity:
      return x;
    case Activation::kTanh:
      return std::tanh(x);
    case Activation::kRelu:
      return x > 0.0 ? x : 0.0;
  }
  return x;
}

MultiRelGraph BuildRandom(Rng& rng, int32_t max_entities, int32_t max_relations,
                          int32_t max_triples, bool random_splits) {
  const int32_t n = RandomCount(rng, 2, max_entities);
  const int32_t r = RandomCount(rng, 1, max_relations);
  const int32_t capacity = n * n * r;
  const int32_t target = RandomCount(rng, 1, std::min(max_triples, capacity));
  std::set<Triple> triples;
  while (static_cast<int32_t>(triples.size()) < target) {
    triples.insert({static_cast<EntityId>(UniformIndex(rng, n)),
                    static_cast<RelationId>(UniformIndex(rng, r)),
                    static_cast<EntityId>(UniformIndex(rng, n))});
  }
  std::vector<Triple> list(triples.begin(), triples.end());
  Shuffle(list.begin(), list.end(), rng);
  std::vector<Split> splits(list.size(), Split::kTrain);
  if (random_splits) {
    for (auto& s : splits) s = kAllSplits[UniformIndex(rng, 3)];
    splits[0] = Split::kTrain;
  }
  std::vector<std::string> entity_names;
  for (int32_t e = 0; e < n; ++e) entity_names.push_back("e" + std::to_string(e));
  return MultiRelGraph(n, RelationNames(r), std::move(list), std::move(splits),
                       std::move(entity_names));
}

}  // namespace

Tensor RandomTensor(Shape shape, Rng& rng, double lo, double hi) {
  Tensor t(std::move(shape));
  for (double& v : t.storage()) v = lo + (hi - lo) * UniformUnit(rng);
  return t;
}

Matrix ToMatrix(const Tensor& t) {
  Matrix m = Zeros(static_cast<size_t>(t.rows()), static_cast<size_t>(t.cols()));
  for (int64_t i = 0; i < t.rows(); ++i) {
    for (int64_t j = 0; j < t.cols(); ++j) m[i][j] = t.at(i, j);
  }
  return m;
}

double MaxAbsDiff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return INFINITY;
  double worst = 0.0;
  for (int64_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

MultiRelGraph RandomGraph(Rng& rng, int32_t max_entities, int32_t max_relations,
                          int32_t max_triples) {
  return BuildRandom(rng, max_entities, max_relations, max_triples, false);
}

MultiRelGraph RandomSplitGraph(Rng& rng, int32_t max_entities, int32_t max_relations,
                               int32_t max_triples) {
  return BuildRandom(rng, max_entities, max_relations, max_triples, true);
}

std::vector<double> ReferenceCorrelation(std::span<const double> a, std::span<const double> b) {
  const size_t d = a.size();
  std::vector<double> out(d, 0.0);
  for (size_t k = 0; k < d; ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < d; ++i) acc += a[i] * b[(i + k) % d];
    out[k] = acc;
  }
  return out;
}

std::vector<double> ReferenceCompose(Composition op, std::span<const double> a,
                                     std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  switch (op) {
    case Composition::kSub:
      for (size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
      return out;
    case Composition::kMult:
      for (size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
      return out;
    case Composition::kCorr:
      return ReferenceCorrelation(a, b);
    case Composition::kNodeOnly:
    case Composition::kScaledNode:
      return out;
  }
  return out;
}

DenseLayerOutput DenseLayerReference(const MultiRelGraph& graph, const Matrix& nodes,
                                     const Matrix& relations, const LayerParams& params,
                                     const LayerOptions& options) {
  const size_t n = static_cast<size_t>(graph.num_entities());
  const int32_t base = graph.num_relations();
  const int32_t total = 2 * base + 1;
  // adjacency[rho][v][u] counts edges u -> v carrying augmented relation rho.
  std::vector<Matrix> adjacency(total, Zeros(n, n));
  for (const Triple& t : graph.TriplesIn(Split::kTrain)) {
    adjacency[t.relation][t.object][t.subject] += 1.0;
    adjacency[t.relation + base][t.subject][t.object] += 1.0;
  }
  for (size_t v = 0; v < n; ++v) adjacency[2 * base][v][v] = 1.0;

  auto direction = [base](int32_t rho) { return rho < base ? 0 : (rho < 2 * base ? 1 : 2); };
  Matrix in_count = Zeros(n, 3);
  std::vector<double> degree(n, 0.0);
  for (int32_t rho = 0; rho < total; ++rho) {
    for (size_t v = 0; v < n; ++v) {
      for (size_t u = 0; u < n; ++u) {
        in_count[v][direction(rho)] += adjacency[rho][v][u];
        degree[v] += adjacency[rho][v][u];
      }
    }
  }

  const size_t out_dim = static_cast<size_t>(params.out_dim);
  Matrix pre = Zeros(n, out_dim);
  for (int32_t rho = 0; rho < total; ++rho) {
    size_t slot = 0;
    if (options.weights == WeightSharing::kDirection) slot = static_cast<size_t>(direction(rho));
    if (options.weights == WeightSharing::kPerRelation) slot = static_cast<size_t>(rho);
    Matrix scaled = adjacency[rho];
    for (size_t v = 0; v < n; ++v) {
      for (size_t u = 0; u < n; ++u) {
        if (scaled[v][u] == 0.0) continue;
        if (options.norm == NormMode::kInDegree) scaled[v][u] /= in_count[v][direction(rho)];
        if (options.norm == NormMode::kSymmetric) scaled[v][u] /= std::sqrt(degree[u] * degree[v]);
      }
    }
    Matrix phi(n);
    for (size_t u = 0; u < n; ++u) {
      phi[u] = ReferenceCompose(options.composition, nodes[u], relations[rho]);
      if (options.composition == Composition::kScaledNode) {
        const double alpha = params.relation_scale->value[rho];
        for (double& x : phi[u]) x *= alpha;
      }
    }
    const Matrix contribution =
        MatMulRef(MatMulRef(scaled, phi), ToMatrix(params.weights[slot].value));
    for (size_t v = 0; v < n; ++v) {
      for (size_t j = 0; j < out_dim; ++j) pre[v][j] += contribution[v][j];
    }
  }
  for (auto& row : pre) {
    for (double& x : row) x = ApplyActivation(options.activation, x);
  }
  return {pre, MatMulRef(relations, ToMatrix(params.relation_weight.value))};
}

Matrix KipfDenseReference(int32_t num_nodes, std::span<const std::pair<int32_t, int32_t>> edges,
                          const Matrix& h, const Matrix& w, Activation activation) {
  const size_t n = static_cast<size_t>(num_nodes);
  Matrix a_tilde = Zeros(n, n);
  for (auto [u, v] : edges) {
    a_tilde[u][v] = 1.0;
    a_tilde[v][u] = 1.0;
  }
  for (size_t i = 0; i < n; ++i) a_tilde[i][i] = 1.0;
  std::vector<double> d(n, 0.0);
  for (size_t i = 0; i < n; ++i) d[i] = std::accumulate(a_tilde[i].begin(), a_tilde[i].end(), 0.0);
  Matrix normalized = Zeros(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) normalized[i][j] = a_tilde[i][j] / std::sqrt(d[i] * d[j]);
  }
  Matrix out = MatMulRef(MatMulRef(normalized, h), w);
  for (auto& row : out) {
    for (double& x : row) x = ApplyActivation(activation, x);
  }
  return out;
}

int64_t SortedRankOracle(std::span<const double> scores, EntityId gold,
                         std::span<const EntityId> known_true) {
  const std::set<EntityId> filtered(known_true.begin(), known_true.end());
  std::vector<std::pair<double, EntityId>> competitors;
  for (EntityId e = 0; e < static_cast<EntityId>(scores.size()); ++e) {
    if (e == gold || !filtered.contains(e)) competitors.emplace_back(scores[e], e);
  }
  auto position = [&](bool gold_first) {
    auto order = competitors;
    std::sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      const bool xg = x.second == gold, yg = y.second == gold;
      if (xg != yg) return gold_first ? xg : yg;
      return x.second < y.second;
    });
    for (size_t i = 0; i < order.size(); ++i) {
      if (order[i].second == gold) return static_cast<int64_t>(i) + 1;
    }
    return int64_t{-1};
  };
  const int64_t best = position(true);
  const int64_t worst = position(false);
  return best + (worst - best + 1) / 2;
}

MultiRelGraph CompositionalKg(int held_out) {
  constexpr int32_t kA = 0, kB = 7, kC = 14;
  // f0, g0: bijections A -> B. f1, g1: maps B -> C.
  const int f0[7] = {3, 5, 0, 6, 1, 4, 2};
  const int g0[7] = {1, 0, 4, 2, 6, 3, 5};
  const int f1[7] = {2, 0, 5, 1, 4, 3, 0};
  const int g1[7] = {4, 1, 0, 3, 5, 2, 2};
  std::vector<Triple> triples;
  std::vector<Split> splits;
  auto add = [&](EntityId s, RelationId r, EntityId o, Split split) {
    triples.push_back({s, r, o});
    splits.push_back(split);
  };
  for (int i = 0; i < 7; ++i) {
    add(kA + i, 0, kB + f0[i], Split::kTrain);
    add(kB + i, 1, kC + f1[i], Split::kTrain);
    add(kA + i, 3, kB + g0[i], Split::kTrain);
    add(kB + i, 4, kC + g1[i], Split::kTrain);
  }
  // r2 and r5 compose the two paths; only relation types tell them apart.
  for (int i = 0; i < 7; ++i) {
    const Split split = i < 7 - held_out ? Split::kTrain : Split::kTest;
    add(kA + i, 2, kC + f1[f0[i]], split);
    add(kA + i, 5, kC + g1[g0[i]], split);
  }
  return MultiRelGraph(20, {"r0", "r1", "r2", "r3", "r4", "r5"}, std::move(triples),
                       std::move(splits));
}

MultiRelGraph ToyKg(uint64_t seed) {
  constexpr int32_t kEntities = 30;
  constexpr int32_t kRelations = 6;
  Rng rng(seed);
  // Each relation is a random partial function with a few extra objects.
  std::set<Triple> triples;
  for (RelationId r = 0; r < kRelations; ++r) {
    for (EntityId s = 0; s < kEntities; ++s) {
      if (UniformUnit(rng) < 0.25) continue;
      triples.insert({s, r, static_cast<EntityId>(UniformIndex(rng, kEntities))});
      if (UniformUnit(rng) < 0.2) {
        triples.insert({s, r, static_cast<EntityId>(UniformIndex(rng, kEntities))});
      }
    }
  }
  std::vector<Triple> list(triples.begin(), triples.end());
  Shuffle(list.begin(), list.end(), rng);
  std::vector<Split> splits(list.size(), Split::kTrain);
  const size_t tenth = list.size() / 10;
  for (size_t i = 0; i < tenth; ++i) {
    splits[i] = Split::kValid;
    splits[tenth + i] = Split::kTest;
  }
  return MultiRelGraph(kEntities, RelationNames(kRelations), std::move(list), std::move(splits));
}

MultiRelGraph CategoryGraph() {
  std::vector<Triple> triples = {
      {0, 0, 1}, {2, 0, 3},                          // 1-1
      {0, 1, 1}, {0, 1, 2}, {0, 1, 3},               // 1-N
      {1, 2, 0}, {2, 2, 0}, {3, 2, 0},               // N-1
      {0, 3, 2}, {0, 3, 3}, {1, 3, 2}, {1, 3, 3}};   // N-N
  std::vector<Split> splits(triples.size(), Split::kTrain);
  return MultiRelGraph(4, RelationNames(4), std::move(triples), std::move(splits));
}

GraphDataset RelationPresenceDataset(int num_graphs, uint64_t seed) {
  Rng rng(seed);
  GraphDataset data;
  data.relation_names = {"r0", "r1", "r2"};
  data.node_type_names = {"_"};
  data.class_names = {"absent", "present"};
  for (int g = 0; g < num_graphs; ++g) {
    GraphSample sample;
    sample.num_nodes = RandomCount(rng, 3, 7);
    sample.node_types.assign(static_cast<size_t>(sample.num_nodes), 0);
    sample.label = g % 2;
    std::set<Triple> edges;
    // A path keeps the graph connected.
    for (int32_t v = 1; v < sample.num_nodes; ++v) {
      const RelationId r = UniformUnit(rng) < 0.5 ? 0 : 2;
      edges.insert({v - 1, r, v});
    }
    const int32_t extra = RandomCount(rng, 0, sample.num_nodes);
    for (int32_t i = 0; i < extra; ++i) {
      const EntityId s = static_cast<EntityId>(UniformIndex(rng, sample.num_nodes));
      const EntityId o = static_cast<EntityId>(UniformIndex(rng, sample.num_nodes));
      if (s != o) edges.insert({s, UniformUnit(rng) < 0.5 ? 0 : 2, o});
    }
    if (sample.label == 1) {
      const EntityId s = static_cast<EntityId>(UniformIndex(rng, sample.num_nodes));
      EntityId o = static_cast<EntityId>(UniformIndex(rng, sample.num_nodes - 1));
      if (o >= s) ++o;
      edges.insert({s, 1, o});
    }
    sample.edges.assign(edges.begin(), edges.end());
    data.graphs.push_back(std::move(sample));
  }
  return data;
}

NodeClassificationData TwoClusterGraph(uint64_t seed) {
  constexpr int32_t kPerCluster = 30;
  Rng rng(seed);
  std::set<Triple> triples;
  for (int c = 0; c < 2; ++c) {
    const int32_t lo = c * kPerCluster;
    for (int32_t v = 0; v < kPerCluster; ++v) {
      for (int k = 0; k < 3; ++k) {
        const EntityId u = lo + static_cast<EntityId>(UniformIndex(rng, kPerCluster));
        if (u != lo + v) triples.insert({lo + v, static_cast<RelationId>(c), u});
      }
    }
  }
  for (int k = 0; k < 4; ++k) {
    triples.insert({static_cast<EntityId>(UniformIndex(rng, kPerCluster)), 2,
                    kPerCluster + static_cast<EntityId>(UniformIndex(rng, kPerCluster))});
  }
  std::vector<Triple> list(triples.begin(), triples.end());
  std::vector<Split> splits(list.size(), Split::kTrain);
  NodeClassificationData data{
      MultiRelGraph(2 * kPerCluster, {"near_a", "near_b", "cross"}, std::move(list),
                    std::move(splits)),
      {}};
  data.labels.class_names = {"a", "b"};
  for (EntityId v = 0; v < 2 * kPerCluster; ++v) {
    data.labels.nodes.push_back(v);
    data.labels.labels.push_back(v < kPerCluster ? 0 : 1);
    data.labels.splits.push_back(Split::kTrain);
  }
  return data;
}

std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("compgcn_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace compgcn::testing
