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

#include "compgcn/model.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "compgcn/optim.h"

namespace compgcn {
namespace {

template <typename Enum, size_t N>
Enum ParseName(std::string_view name, const std::pair<std::string_view, Enum> (&table)[N],
               const char* what) {
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

template <typename Enum, size_t N>
std::string_view NameOf(Enum value, const std::pair<std::string_view, Enum> (&table)[N]) {
  for (const auto& [key, v] : table) {
    if (v == value) return key;
  }
  return "?";
}

constexpr std::pair<std::string_view, Composition> kCompositions[] = {
    {"sub", Composition::kSub},
    {"mult", Composition::kMult},
    {"corr", Composition::kCorr},
    {"node", Composition::kNodeOnly},
    {"scaled_node", Composition::kScaledNode}};
constexpr std::pair<std::string_view, WeightSharing> kSharings[] = {
    {"direction", WeightSharing::kDirection},
    {"shared", WeightSharing::kShared},
    {"relation", WeightSharing::kPerRelation}};
constexpr std::pair<std::string_view, NormMode> kNorms[] = {
    {"none", NormMode::kNone}, {"in_degree", NormMode::kInDegree},
    {"symmetric", NormMode::kSymmetric}};
constexpr std::pair<std::string_view, Preset> kPresets[] = {
    {"none", Preset::kNone},
    {"kipf_gcn", Preset::kKipfGcn},
    {"relational_gcn", Preset::kRelationalGcn},
    {"directed_gcn", Preset::kDirectedGcn},
    {"weighted_gcn", Preset::kWeightedGcn}};

int64_t WeightSlots(WeightSharing sharing, int32_t num_relations) {
  switch (sharing) {
    case WeightSharing::kDirection:
      return 3;
    case WeightSharing::kShared:
      return 1;
    case WeightSharing::kPerRelation:
      return num_relations;
  }
  return 0;
}

int32_t SlotOf(const AugmentedEdge& e, WeightSharing sharing) {
  switch (sharing) {
    case WeightSharing::kDirection:
      return static_cast<int32_t>(e.direction);
    case WeightSharing::kShared:
      return 0;
    case WeightSharing::kPerRelation:
      return e.relation;
  }
  return 0;
}

// Per-edge message scale for the chosen normalization; empty for kNone.
std::vector<double> EdgeNormalization(const AugmentedGraph& graph, NormMode norm) {
  const auto edges = graph.edges();
  std::vector<double> coef;
  if (norm == NormMode::kNone) return coef;
  coef.resize(edges.size());
  if (norm == NormMode::kInDegree) {
    std::vector<int64_t> count(3 * static_cast<size_t>(graph.num_entities()), 0);
    for (const AugmentedEdge& e : edges) ++count[3 * e.target + static_cast<int>(e.direction)];
    for (size_t i = 0; i < edges.size(); ++i) {
      coef[i] = 1.0 / static_cast<double>(
                          count[3 * edges[i].target + static_cast<int>(edges[i].direction)]);
    }
  } else {
    std::vector<int64_t> degree(graph.num_entities(), 0);
    for (const AugmentedEdge& e : edges) ++degree[e.target];
    for (size_t i = 0; i < edges.size(); ++i) {
      coef[i] = 1.0 / std::sqrt(static_cast<double>(degree[edges[i].source]) *
                                static_cast<double>(degree[edges[i].target]));
    }
  }
  return coef;
}

void RequireRows(const Var& v, int64_t rows, int64_t cols, const char* what) {
  const Tensor& t = v.value();
  if (t.rank() != 2 || t.dim(0) != rows || t.dim(1) != cols) {
    throw ShapeError(std::string(what) + " has shape " + ShapeToString(t.shape()) + ", expected " +
                     ShapeToString({rows, cols}));
  }
}

}  // namespace

std::string_view CompositionName(Composition c) { return NameOf(c, kCompositions); }
Composition ParseComposition(std::string_view name) {
  return ParseName(name, kCompositions, "composition");
}
std::string_view WeightSharingName(WeightSharing w) { return NameOf(w, kSharings); }
WeightSharing ParseWeightSharing(std::string_view name) {
  return ParseName(name, kSharings, "weight sharing");
}
std::string_view NormModeName(NormMode n) { return NameOf(n, kNorms); }
NormMode ParseNormMode(std::string_view name) { return ParseName(name, kNorms, "norm mode"); }
std::string_view PresetName(Preset p) { return NameOf(p, kPresets); }
Preset ParsePreset(std::string_view name) { return ParseName(name, kPresets, "preset"); }

ModelConfig ReductionPreset(Preset kind, ModelConfig base) {
  base.preset = kind;
  switch (kind) {
    case Preset::kNone:
      break;
    case Preset::kKipfGcn:
      base.weights = WeightSharing::kShared;
      base.composition = Composition::kNodeOnly;
      break;
    case Preset::kRelationalGcn:
      base.weights = WeightSharing::kPerRelation;
      base.composition = Composition::kNodeOnly;
      break;
    case Preset::kDirectedGcn:
      base.weights = WeightSharing::kDirection;
      base.composition = Composition::kNodeOnly;
      break;
    case Preset::kWeightedGcn:
      base.weights = WeightSharing::kShared;
      base.composition = Composition::kScaledNode;
      break;
  }
  return base;
}

nlohmann::json ModelConfigToJson(const ModelConfig& config) {
  nlohmann::json j;
  j["dims"] = config.dims;
  j["layers"] = config.num_layers();
  j["composition"] = CompositionName(config.composition);
  j["weight_sharing"] = WeightSharingName(config.weights);
  j["norm_mode"] = NormModeName(config.norm);
  j["num_bases"] = config.num_bases ? nlohmann::json(*config.num_bases) : nlohmann::json();
  j["dropout"] = config.dropout;
  j["activation"] = ActivationName(config.activation);
  j["preset"] = config.preset == Preset::kNone ? nlohmann::json()
                                               : nlohmann::json(PresetName(config.preset));
  return j;
}

ModelConfig ModelConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("model config must be a JSON object");
  ModelConfig c;
  if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<int64_t>>();
  if (c.dims.empty()) throw std::invalid_argument("model.dims must list at least d0");
  for (int64_t d : c.dims) {
    if (d < 1) throw std::invalid_argument("model.dims entries must be positive");
  }
  if (j.contains("layers") && j.at("layers").get<int>() != c.num_layers()) {
    throw std::invalid_argument("model.layers disagrees with model.dims");
  }
  if (j.contains("composition")) {
    c.composition = ParseComposition(j.at("composition").get<std::string>());
  }
  if (j.contains("weight_sharing")) {
    c.weights = ParseWeightSharing(j.at("weight_sharing").get<std::string>());
  }
  if (j.contains("norm_mode")) c.norm = ParseNormMode(j.at("norm_mode").get<std::string>());
  if (j.contains("num_bases") && !j.at("num_bases").is_null()) {
    c.num_bases = j.at("num_bases").get<int64_t>();
    if (*c.num_bases < 1) throw std::invalid_argument("model.num_bases must be >= 1");
  }
  if (j.contains("dropout")) c.dropout = j.at("dropout").get<double>();
  if (!(c.dropout >= 0.0 && c.dropout < 1.0)) {
    throw std::invalid_argument("model.dropout must lie in [0, 1)");
  }
  if (j.contains("activation")) c.activation = ParseActivation(j.at("activation").get<std::string>());
  if (j.contains("preset") && !j.at("preset").is_null()) {
    c = ReductionPreset(ParsePreset(j.at("preset").get<std::string>()), c);
  }
  return c;
}

Var Compose(Composition op, Var subject, Var relation) {
  switch (op) {
    case Composition::kSub:
      if (subject.shape() != relation.shape()) {
        throw ShapeError("compose shape mismatch: " + ShapeToString(subject.shape()) + " and " +
                         ShapeToString(relation.shape()));
      }
      return Sub(subject, relation);
    case Composition::kMult:
      if (subject.shape() != relation.shape()) {
        throw ShapeError("compose shape mismatch: " + ShapeToString(subject.shape()) + " and " +
                         ShapeToString(relation.shape()));
      }
      return Mul(subject, relation);
    case Composition::kCorr:
      return CircularCorrelation(subject, relation);
    case Composition::kNodeOnly:
      return subject;
    case Composition::kScaledNode:
      throw std::invalid_argument("scaled-node composition needs per-relation scalars");
  }
  return subject;
}

std::vector<double> Compose(Composition op, std::span<const double> subject,
                            std::span<const double> relation) {
  if (subject.size() != relation.size()) {
    throw ShapeError("compose length mismatch: " + std::to_string(subject.size()) + " and " +
                     std::to_string(relation.size()));
  }
  std::vector<double> out(subject.size());
  switch (op) {
    case Composition::kSub:
      for (size_t i = 0; i < out.size(); ++i) out[i] = subject[i] - relation[i];
      break;
    case Composition::kMult:
      for (size_t i = 0; i < out.size(); ++i) out[i] = subject[i] * relation[i];
      break;
    case Composition::kCorr:
      CircularCorrelate(subject, relation, out);
      break;
    case Composition::kNodeOnly:
      out.assign(subject.begin(), subject.end());
      break;
    case Composition::kScaledNode:
      throw std::invalid_argument("scaled-node composition needs per-relation scalars");
  }
  return out;
}

LayerParams LayerParams::Create(const std::string& prefix, int64_t in_dim, int64_t out_dim,
                                WeightSharing sharing, bool scaled, int32_t num_relations,
                                Rng& rng) {
  LayerParams p;
  p.in_dim = in_dim;
  p.out_dim = out_dim;
  const Shape shape{in_dim, out_dim};
  switch (sharing) {
    case WeightSharing::kDirection:
      p.weights.emplace_back(prefix + ".w_original", XavierUniform(shape, rng));
      p.weights.emplace_back(prefix + ".w_inverse", XavierUniform(shape, rng));
      p.weights.emplace_back(prefix + ".w_self", XavierUniform(shape, rng));
      break;
    case WeightSharing::kShared:
      p.weights.emplace_back(prefix + ".w_shared", XavierUniform(shape, rng));
      break;
    case WeightSharing::kPerRelation:
      for (int32_t r = 0; r < num_relations; ++r) {
        p.weights.emplace_back(prefix + ".w_relation." + std::to_string(r),
                               XavierUniform(shape, rng));
      }
      break;
  }
  p.relation_weight = Parameter(prefix + ".w_rel", XavierUniform(shape, rng));
  if (scaled) {
    p.relation_scale.emplace(prefix + ".relation_scale", Tensor(Shape{num_relations}, 1.0));
  }
  return p;
}

std::vector<Parameter*> LayerParams::parameters() {
  std::vector<Parameter*> out;
  for (Parameter& w : weights) out.push_back(&w);
  out.push_back(&relation_weight);
  if (relation_scale) out.push_back(&*relation_scale);
  return out;
}

std::vector<const Parameter*> LayerParams::parameters() const {
  std::vector<const Parameter*> out;
  for (const Parameter& w : weights) out.push_back(&w);
  out.push_back(&relation_weight);
  if (relation_scale) out.push_back(&*relation_scale);
  return out;
}

LayerOutput LayerForward(Tape& tape, const AugmentedGraph& graph, Var nodes, Var relations,
                         LayerParams& params, const LayerOptions& options, bool training,
                         Rng* dropout_rng) {
  const int32_t num_nodes = graph.num_entities();
  const int32_t num_rel = graph.num_relations();
  RequireRows(nodes, num_nodes, params.in_dim, "node states");
  RequireRows(relations, num_rel, params.in_dim, "relation states");
  const int64_t slots = WeightSlots(options.weights, num_rel);
  if (static_cast<int64_t>(params.weights.size()) != slots) {
    throw std::invalid_argument("layer has " + std::to_string(params.weights.size()) +
                                " weight matrices, sharing mode needs " + std::to_string(slots));
  }
  if (options.composition == Composition::kScaledNode &&
      (!params.relation_scale || params.relation_scale->value.size() != num_rel)) {
    throw std::invalid_argument("scaled-node composition requires one scalar per relation");
  }

  const auto edges = graph.edges();
  const std::vector<double> norm = EdgeNormalization(graph, options.norm);
  std::vector<std::vector<int32_t>> slot_edges(slots);
  for (size_t i = 0; i < edges.size(); ++i) {
    slot_edges[SlotOf(edges[i], options.weights)].push_back(static_cast<int32_t>(i));
  }

  Var scales;
  if (options.composition == Composition::kScaledNode) scales = tape.Leaf(*params.relation_scale);

  Var total;
  std::vector<int32_t> src, rel, dst;
  for (int64_t s = 0; s < slots; ++s) {
    const auto& ids = slot_edges[s];
    if (ids.empty()) continue;
    src.clear();
    rel.clear();
    dst.clear();
    for (int32_t i : ids) {
      src.push_back(edges[i].source);
      rel.push_back(edges[i].relation);
      dst.push_back(edges[i].target);
    }
    Var from = GatherRows(nodes, src);
    Var message;
    if (options.composition == Composition::kScaledNode) {
      message = ScaleRows(from, GatherRows(scales, rel));
    } else if (options.composition == Composition::kNodeOnly) {
      message = from;
    } else {
      message = Compose(options.composition, from, GatherRows(relations, rel));
    }
    if (!norm.empty()) {
      std::vector<double> coef;
      coef.reserve(ids.size());
      for (int32_t i : ids) coef.push_back(norm[i]);
      message = ScaleRows(message, tape.Constant(Tensor::Vector(std::move(coef))));
    }
    Var summed = ScatterAddRows(message, dst, num_nodes);
    Var projected = MatMul(summed, tape.Leaf(params.weights[s]));
    total = total.valid() ? Add(total, projected) : projected;
  }
  if (!total.valid()) total = tape.Constant(Tensor(Shape{num_nodes, params.out_dim}));

  if (training && options.dropout > 0.0 && dropout_rng == nullptr) {
    throw std::invalid_argument("training with dropout requires a random generator");
  }
  Var dropped = dropout_rng != nullptr ? Dropout(total, options.dropout, *dropout_rng, training)
                                       : total;
  LayerOutput out;
  out.nodes = Activate(options.activation, dropped);
  out.relations = MatMul(relations, tape.Leaf(params.relation_weight));
  return out;
}

RelationInputs RelationInputs::Create(int32_t num_relations, int64_t dim,
                                      std::optional<int64_t> num_bases, Rng& rng) {
  RelationInputs in;
  if (!num_bases) {
    in.table.emplace("relation_table", XavierUniform({num_relations, dim}, rng));
    return in;
  }
  if (*num_bases < 1) {
    throw std::invalid_argument("number of relation bases must be >= 1, got " +
                                std::to_string(*num_bases));
  }
  in.bases.emplace("relation_bases", XavierUniform({*num_bases, dim}, rng));
  in.coefficients.emplace("relation_coefficients", XavierUniform({num_relations, *num_bases}, rng));
  return in;
}

std::vector<Parameter*> RelationInputs::parameters() {
  std::vector<Parameter*> out;
  if (table) out.push_back(&*table);
  if (bases) out.push_back(&*bases);
  if (coefficients) out.push_back(&*coefficients);
  return out;
}

std::vector<const Parameter*> RelationInputs::parameters() const {
  std::vector<const Parameter*> out;
  if (table) out.push_back(&*table);
  if (bases) out.push_back(&*bases);
  if (coefficients) out.push_back(&*coefficients);
  return out;
}

Var MaterializeRelationInputs(Tape& tape, RelationInputs& inputs) {
  if (inputs.table) return tape.Leaf(*inputs.table);
  if (!inputs.bases || !inputs.coefficients) {
    throw std::invalid_argument("relation inputs have neither a table nor a basis");
  }
  return MatMul(tape.Leaf(*inputs.coefficients), tape.Leaf(*inputs.bases));
}

Tensor MaterializeRelationInputs(const RelationInputs& inputs) {
  if (inputs.table) return inputs.table->value;
  if (!inputs.bases || !inputs.coefficients) {
    throw std::invalid_argument("relation inputs have neither a table nor a basis");
  }
  const Tensor& alpha = inputs.coefficients->value;
  const Tensor& basis = inputs.bases->value;
  if (alpha.dim(1) != basis.dim(0)) {
    throw ShapeError("coefficients " + ShapeToString(alpha.shape()) + " do not match bases " +
                     ShapeToString(basis.shape()));
  }
  Tensor z(Shape{alpha.dim(0), basis.dim(1)});
  for (int64_t r = 0; r < alpha.dim(0); ++r) {
    for (int64_t b = 0; b < alpha.dim(1); ++b) {
      const double a = alpha.at(r, b);
      if (a == 0.0) continue;
      for (int64_t c = 0; c < basis.dim(1); ++c) z.at(r, c) += a * basis.at(b, c);
    }
  }
  return z;
}

CompGcnModel::CompGcnModel(const ModelConfig& config, int32_t num_nodes, int32_t num_relations,
                           Rng& rng)
    : config_(config), num_nodes_(num_nodes), num_relations_(num_relations) {
  if (config_.dims.empty()) throw std::invalid_argument("model needs at least an input width");
  node_embeddings_ = Parameter("node_embeddings", XavierUniform({num_nodes, config_.dims[0]}, rng));
  relation_inputs_ = RelationInputs::Create(num_relations, config_.dims[0], config_.num_bases, rng);
  const bool scaled = config_.composition == Composition::kScaledNode;
  for (int k = 0; k < config_.num_layers(); ++k) {
    layers_.push_back(LayerParams::Create("layer" + std::to_string(k), config_.dims[k],
                                          config_.dims[k + 1], config_.weights, scaled,
                                          num_relations, rng));
  }
}

std::vector<Parameter*> CompGcnModel::parameters() {
  std::vector<Parameter*> out{&node_embeddings_};
  for (Parameter* p : relation_inputs_.parameters()) out.push_back(p);
  for (LayerParams& layer : layers_) {
    for (Parameter* p : layer.parameters()) out.push_back(p);
  }
  return out;
}

std::vector<const Parameter*> CompGcnModel::parameters() const {
  std::vector<const Parameter*> out{&node_embeddings_};
  for (const Parameter* p : relation_inputs_.parameters()) out.push_back(p);
  for (const LayerParams& layer : layers_) {
    for (const Parameter* p : layer.parameters()) out.push_back(p);
  }
  return out;
}

int64_t CompGcnModel::ParameterCount() const {
  int64_t total = 0;
  for (const Parameter* p : parameters()) total += p->value.size();
  return total;
}

LayerOptions CompGcnModel::layer_options() const {
  LayerOptions o;
  o.composition = config_.composition;
  o.weights = config_.weights;
  o.norm = config_.norm;
  o.dropout = config_.dropout;
  o.activation = config_.activation;
  return o;
}

Encoding CompGcnModel::Encode(Tape& tape, const AugmentedGraph& graph, bool training,
                              Rng* dropout_rng) {
  if (graph.num_entities() != num_nodes_) {
    throw std::invalid_argument("graph has " + std::to_string(graph.num_entities()) +
                                " entities, model was built for " + std::to_string(num_nodes_));
  }
  return Encode(tape, graph, tape.Leaf(node_embeddings_), training, dropout_rng);
}

Encoding CompGcnModel::Encode(Tape& tape, const AugmentedGraph& graph, Var node_inputs,
                              bool training, Rng* dropout_rng) {
  if (graph.num_relations() != num_relations_) {
    throw std::invalid_argument("graph has " + std::to_string(graph.num_relations()) +
                                " augmented relations, model was built for " +
                                std::to_string(num_relations_));
  }
  Encoding enc{node_inputs, MaterializeRelationInputs(tape, relation_inputs_)};
  const LayerOptions options = layer_options();
  for (LayerParams& layer : layers_) {
    LayerOutput out =
        LayerForward(tape, graph, enc.nodes, enc.relations, layer, options, training, dropout_rng);
    enc.nodes = out.nodes;
    enc.relations = out.relations;
  }
  return enc;
}

int64_t ExpectedParameterCount(const ModelConfig& config, int32_t num_nodes,
                               int32_t num_relations) {
  const int64_t d0 = config.dims.front();
  int64_t count = static_cast<int64_t>(num_nodes) * d0;
  if (config.num_bases) {
    count += *config.num_bases * d0 + static_cast<int64_t>(num_relations) * *config.num_bases;
  } else {
    count += static_cast<int64_t>(num_relations) * d0;
  }
  const int64_t slots = WeightSlots(config.weights, num_relations);
  const int64_t scalars = config.composition == Composition::kScaledNode ? num_relations : 0;
  for (int k = 0; k < config.num_layers(); ++k) {
    const int64_t mat = config.dims[k] * config.dims[k + 1];
    count += slots * mat + mat + scalars;
  }
  return count;
}

}  // namespace compgcn
