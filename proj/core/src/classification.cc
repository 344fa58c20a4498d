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

#include "compgcn/classification.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "compgcn/graph_io.h"
#include "compgcn/ops.h"
#include "compgcn/optim.h"
#include "compgcn/random.h"

namespace compgcn {
namespace {

constexpr uint64_t kSplitStream = 0x53504c4954ULL;
constexpr uint64_t kDropoutStream = 0x44524f50ULL;
constexpr uint64_t kShuffleStream = 0x5348554646ULL;

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  for (size_t tab; (tab = line.find('\t')) != std::string_view::npos;) {
    fields.push_back(line.substr(0, tab));
    line.remove_prefix(tab + 1);
  }
  fields.push_back(line);
  return fields;
}

// Calls `fn(fields, line_no)` for each non-empty line; strips CR.
template <typename Fn>
void ForEachRow(const std::filesystem::path& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(SplitTabs(line), line_no, line);
  }
}

class Names {
 public:
  int32_t Intern(std::string_view name) {
    auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<int32_t>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }
  std::optional<int32_t> Find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  std::vector<std::string>& names() { return names_; }
  int32_t size() const { return static_cast<int32_t>(names_.size()); }

 private:
  std::unordered_map<std::string, int32_t> ids_;
  std::vector<std::string> names_;
};

int32_t ArgMax(std::span<const double> row) {
  return static_cast<int32_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

double Accuracy(const Tensor& logits, std::span<const int32_t> labels) {
  if (labels.empty()) return 0.0;
  int64_t correct = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (ArgMax(logits.row(static_cast<int64_t>(i))) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

Parameter MakeClassifier(int64_t in_dim, int32_t num_classes, Rng& rng) {
  return Parameter("classifier", XavierUniform({in_dim, num_classes}, rng));
}

}  // namespace

NodeClassificationData LoadNodeClassification(const std::filesystem::path& dir) {
  LoadedGraph loaded = LoadTriples(dir, LoadOptions{.require_all_splits = false});
  const MultiRelGraph& graph = loaded.graph;
  std::unordered_map<std::string, EntityId> entity_ids;
  for (EntityId e = 0; e < graph.num_entities(); ++e) entity_ids[graph.EntityName(e)] = e;

  NodeLabels labels;
  Names classes;
  std::set<EntityId> seen;
  const auto path = dir / "labels.tsv";
  ForEachRow(path, [&](const std::vector<std::string_view>& f, int64_t line_no,
                       const std::string& line) {
    if (f.size() < 2 || f.size() > 3 || f[0].empty() || f[1].empty()) {
      throw ParseError(path.string(), line_no, "expected entity<TAB>class[<TAB>split], got '" +
                                                   line + "'");
    }
    auto it = entity_ids.find(std::string(f[0]));
    if (it == entity_ids.end()) {
      throw ParseError(path.string(), line_no, "unknown entity '" + std::string(f[0]) + "'");
    }
    if (!seen.insert(it->second).second) {
      throw ParseError(path.string(), line_no, "entity labelled twice");
    }
    Split split = Split::kTrain;
    if (f.size() == 3) {
      split = ParseSplit(f[2]);
      if (split == Split::kValid) {
        throw ParseError(path.string(), line_no, "label split must be train or test");
      }
    }
    labels.nodes.push_back(it->second);
    labels.labels.push_back(classes.Intern(f[1]));
    labels.splits.push_back(split);
  });
  if (labels.nodes.empty()) throw std::runtime_error("no labelled nodes in " + path.string());
  labels.class_names = std::move(classes.names());
  return {std::move(loaded.graph), std::move(labels)};
}

NodeClassificationReport TrainNodeClassification(const RunConfig& config,
                                                 const NodeClassificationData& data) {
  const NodeLabels& labels = data.labels;
  if (labels.nodes.empty()) throw std::invalid_argument("no labelled nodes");
  const int32_t num_classes = std::max(labels.num_classes(), 1);

  // Assign train / valid / test membership.
  Rng split_rng(config.seed ^ kSplitStream);
  std::vector<size_t> train_pool, test_idx;
  const bool has_split_column =
      std::any_of(labels.splits.begin(), labels.splits.end(),
                  [](Split s) { return s == Split::kTest; });
  for (size_t i = 0; i < labels.nodes.size(); ++i) {
    (labels.splits[i] == Split::kTest ? test_idx : train_pool).push_back(i);
  }
  if (!has_split_column) {
    Shuffle(train_pool.begin(), train_pool.end(), split_rng);
    const auto n_test = static_cast<size_t>(std::floor(config.test_fraction * train_pool.size()));
    test_idx.assign(train_pool.end() - static_cast<std::ptrdiff_t>(n_test), train_pool.end());
    train_pool.resize(train_pool.size() - n_test);
    std::sort(test_idx.begin(), test_idx.end());
  }
  Shuffle(train_pool.begin(), train_pool.end(), split_rng);
  const auto n_valid =
      static_cast<size_t>(std::floor(config.validation_fraction * train_pool.size()));
  std::vector<size_t> valid_idx(train_pool.end() - static_cast<std::ptrdiff_t>(n_valid),
                                train_pool.end());
  train_pool.resize(train_pool.size() - n_valid);
  std::sort(train_pool.begin(), train_pool.end());
  std::sort(valid_idx.begin(), valid_idx.end());
  if (train_pool.empty()) throw std::invalid_argument("no labelled nodes left for training");

  auto gather = [&labels](const std::vector<size_t>& idx) {
    std::pair<std::vector<EntityId>, std::vector<int32_t>> out;
    for (size_t i : idx) {
      out.first.push_back(labels.nodes[i]);
      out.second.push_back(labels.labels[i]);
    }
    return out;
  };
  const auto [train_nodes, train_labels] = gather(train_pool);
  const auto [valid_nodes, valid_labels] = gather(valid_idx);
  const auto [test_nodes, test_labels] = gather(test_idx);

  const AugmentedGraph aug = Augment(data.graph);
  Rng init_rng(config.seed);
  CompGcnModel model(config.model, data.graph.num_entities(), aug.num_relations(), init_rng);
  Parameter head = MakeClassifier(config.model.output_dim(), num_classes, init_rng);
  Rng dropout_rng(config.seed ^ kDropoutStream);
  std::vector<Parameter*> params = model.parameters();
  params.push_back(&head);
  Adam adam(params, AdamOptions{.lr = config.lr});
  adam.ZeroGrad();

  auto predict = [&](CompGcnModel& m, Parameter& h, const std::vector<EntityId>& nodes) {
    Tape tape;
    const Encoding enc = m.Encode(tape, aug, /*training=*/false, nullptr);
    return MatMul(GatherRows(enc.nodes, nodes), tape.Leaf(h)).value();
  };

  // Accuracy on the selection nodes, ties broken by lower cross-entropy.
  auto selection_score = [&](const std::vector<EntityId>& nodes,
                             const std::vector<int32_t>& node_labels) {
    Tape tape;
    const Encoding enc = model.Encode(tape, aug, /*training=*/false, nullptr);
    Var logits = MatMul(GatherRows(enc.nodes, nodes), tape.Leaf(head));
    return std::pair{Accuracy(logits.value(), node_labels),
                     -SoftmaxCrossEntropy(logits, node_labels).value().item()};
  };

  NodeClassificationReport report;
  report.num_train = static_cast<int64_t>(train_nodes.size());
  report.num_valid = static_cast<int64_t>(valid_nodes.size());
  report.num_test = static_cast<int64_t>(test_nodes.size());
  CompGcnModel best_model = model;
  Parameter best_head = head;
  std::pair<double, double> best_score{-1.0, -std::numeric_limits<double>::infinity()};
  int stale = 0;
  const bool select_on_valid = !valid_nodes.empty();
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Tape tape;
    const Encoding enc = model.Encode(tape, aug, /*training=*/true, &dropout_rng);
    Var logits = MatMul(GatherRows(enc.nodes, train_nodes), tape.Leaf(head));
    Var loss = SoftmaxCrossEntropy(logits, train_labels);
    report.losses.push_back(loss.value().item());
    tape.Backward(loss);
    adam.Step();
    adam.ZeroGrad();
    if (epoch % config.eval_every != 0 && epoch != config.epochs) continue;
    const auto score = select_on_valid ? selection_score(valid_nodes, valid_labels)
                                       : selection_score(train_nodes, train_labels);
    if (score > best_score) {
      best_score = score;
      best_model = model;
      best_head = head;
      report.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  report.train_accuracy = Accuracy(predict(best_model, best_head, train_nodes), train_labels);
  report.valid_accuracy =
      select_on_valid ? Accuracy(predict(best_model, best_head, valid_nodes), valid_labels) : 0.0;
  report.test_accuracy = Accuracy(predict(best_model, best_head, test_nodes), test_labels);
  return report;
}

GraphDataset LoadGraphDataset(const std::filesystem::path& dir) {
  GraphDataset data;
  Names relations, types, classes;
  const auto index_path = dir / "index.tsv";
  ForEachRow(index_path, [&](const std::vector<std::string_view>& f, int64_t line_no,
                             const std::string& line) {
    if (f.size() != 2 || f[0].empty() || f[1].empty()) {
      throw ParseError(index_path.string(), line_no,
                       "expected graph-directory<TAB>class, got '" + line + "'");
    }
    const auto gdir = dir / std::string(f[0]);
    GraphSample g;
    g.label = classes.Intern(f[1]);
    Names nodes;
    std::vector<int32_t> node_types;
    if (std::filesystem::exists(gdir / "nodes.tsv")) {
      const auto npath = gdir / "nodes.tsv";
      ForEachRow(npath, [&](const std::vector<std::string_view>& nf, int64_t nline,
                            const std::string& text) {
        if (nf.size() != 2 || nf[0].empty() || nf[1].empty()) {
          throw ParseError(npath.string(), nline, "expected node<TAB>type, got '" + text + "'");
        }
        if (nodes.Find(nf[0])) throw ParseError(npath.string(), nline, "node listed twice");
        nodes.Intern(nf[0]);
        node_types.push_back(types.Intern(nf[1]));
      });
    }
    std::set<Triple> edges;
    const auto epath = gdir / "edges.tsv";
    ForEachRow(epath, [&](const std::vector<std::string_view>& ef, int64_t eline,
                          const std::string& text) {
      if (ef.size() != 3 || ef[0].empty() || ef[1].empty() || ef[2].empty()) {
        throw ParseError(epath.string(), eline,
                         "expected node<TAB>relation<TAB>node, got '" + text + "'");
      }
      const int32_t known = nodes.size();
      const EntityId s = nodes.Intern(ef[0]);
      const RelationId r = relations.Intern(ef[1]);
      const EntityId o = nodes.Intern(ef[2]);
      for (int32_t added = known; added < nodes.size(); ++added) {
        node_types.push_back(types.Intern("_"));
      }
      edges.insert({s, r, o});
    });
    g.num_nodes = nodes.size();
    if (g.num_nodes == 0) throw std::runtime_error(gdir.string() + " has no nodes");
    g.node_types = std::move(node_types);
    g.edges.assign(edges.begin(), edges.end());
    data.graphs.push_back(std::move(g));
  });
  data.relation_names = std::move(relations.names());
  data.node_type_names = std::move(types.names());
  data.class_names = std::move(classes.names());
  return data;
}

GraphBatch MakeGraphBatch(const GraphDataset& data, std::span<const size_t> members) {
  GraphBatch batch;
  std::vector<Triple> triples;
  int32_t offset = 0;
  for (size_t slot = 0; slot < members.size(); ++slot) {
    const GraphSample& g = data.graphs.at(members[slot]);
    for (const Triple& t : g.edges) {
      triples.push_back({t.subject + offset, t.relation, t.object + offset});
    }
    batch.node_types.insert(batch.node_types.end(), g.node_types.begin(), g.node_types.end());
    batch.graph_of_node.insert(batch.graph_of_node.end(), g.num_nodes,
                               static_cast<int32_t>(slot));
    batch.labels.push_back(g.label);
    offset += g.num_nodes;
  }
  std::vector<Split> splits(triples.size(), Split::kTrain);
  batch.graph = MultiRelGraph(offset, data.relation_names, std::move(triples), std::move(splits));
  return batch;
}

Var MeanReadout(Var nodes, std::span<const int32_t> graph_of_node, int64_t num_graphs) {
  return SegmentMean(nodes, graph_of_node, num_graphs);
}

std::vector<std::vector<size_t>> KFoldSplit(size_t n, int k, uint64_t seed) {
  if (k < 2) throw std::invalid_argument("need at least 2 folds");
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  Shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<size_t>> folds(k);
  for (size_t i = 0; i < n; ++i) folds[i % k].push_back(order[i]);
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

CrossValidationReport TrainGraphClassification(const RunConfig& config,
                                               const GraphDataset& data) {
  if (static_cast<int>(data.graphs.size()) < config.folds) {
    throw std::invalid_argument("graph classification needs at least " +
                                std::to_string(config.folds) + " graphs, got " +
                                std::to_string(data.graphs.size()));
  }
  const int32_t num_relations = 2 * data.num_relations() + 1;
  const int32_t num_classes = std::max(data.num_classes(), 1);
  const auto folds = KFoldSplit(data.graphs.size(), config.folds, config.seed);

  CrossValidationReport report;
  for (int f = 0; f < config.folds; ++f) {
    std::vector<size_t> train;
    for (int g = 0; g < config.folds; ++g) {
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train.begin(), train.end());

    Rng init_rng(config.seed + static_cast<uint64_t>(f));
    CompGcnModel model(config.model, data.num_node_types(), num_relations, init_rng);
    Parameter head = MakeClassifier(config.model.output_dim(), num_classes, init_rng);
    Rng dropout_rng((config.seed + static_cast<uint64_t>(f)) ^ kDropoutStream);
    Rng shuffle_rng((config.seed + static_cast<uint64_t>(f)) ^ kShuffleStream);
    std::vector<Parameter*> params = model.parameters();
    params.push_back(&head);
    Adam adam(params, AdamOptions{.lr = config.lr});
    adam.ZeroGrad();

    auto run = [&](const GraphBatch& batch, bool training) {
      const AugmentedGraph aug = Augment(batch.graph);
      auto tape = std::make_unique<Tape>();
      Var inputs = GatherRows(tape->Leaf(model.node_embeddings()), batch.node_types);
      const Encoding enc = model.Encode(*tape, aug, inputs, training, &dropout_rng);
      Var pooled = MeanReadout(enc.nodes, batch.graph_of_node,
                               static_cast<int64_t>(batch.labels.size()));
      Var logits = MatMul(pooled, tape->Leaf(head));
      return std::make_pair(std::move(tape), logits);
    };

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
      Shuffle(train.begin(), train.end(), shuffle_rng);
      for (size_t start = 0; start < train.size(); start += config.batch_size) {
        const size_t end = std::min(train.size(), start + static_cast<size_t>(config.batch_size));
        const GraphBatch batch =
            MakeGraphBatch(data, std::span<const size_t>(train).subspan(start, end - start));
        auto [tape, logits] = run(batch, /*training=*/true);
        Var loss = SoftmaxCrossEntropy(logits, batch.labels);
        tape->Backward(loss);
        adam.Step();
        adam.ZeroGrad();
      }
    }
    const GraphBatch held_out = MakeGraphBatch(data, folds[f]);
    auto [tape, logits] = run(held_out, /*training=*/false);
    report.fold_accuracies.push_back(Accuracy(logits.value(), held_out.labels));
  }
  const auto k = static_cast<double>(report.fold_accuracies.size());
  report.mean = std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(), 0.0) / k;
  double var = 0.0;
  for (double a : report.fold_accuracies) var += (a - report.mean) * (a - report.mean);
  report.stddev = std::sqrt(var / k);
  return report;
}

}  // namespace compgcn
