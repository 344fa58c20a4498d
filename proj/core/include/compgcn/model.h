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

#ifndef COMPGCN_MODEL_H_
#define COMPGCN_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "compgcn/graph.h"
#include "compgcn/ops.h"
#include "compgcn/random.h"
#include "compgcn/tape.h"
#include "compgcn/tensor.h"

namespace compgcn {

// Entity-relation composition phi(h_u, h_r). kSub, kMult and kCorr are the
// CompGCN operators; kNodeOnly (h_u) and kScaledNode (alpha_r * h_u) exist
// for the reductions to earlier relational GCNs.
enum class Composition : uint8_t { kSub, kMult, kCorr, kNodeOnly, kScaledNode };

// How the layer picks its weight matrix for an edge: one per direction class
// (original, inverse, self loop), one for all edges, or one per augmented
// relation.
enum class WeightSharing : uint8_t { kDirection, kShared, kPerRelation };

// kNone is the plain sum over incoming edges. kInDegree divides each
// direction's sum by that direction's incoming edge count at the node.
// kSymmetric weights edge u -> v by 1/sqrt(deg(u) deg(v)) with deg counting
// all incoming augmented edges, self loop included.
enum class NormMode : uint8_t { kNone, kInDegree, kSymmetric };

enum class Preset : uint8_t { kNone, kKipfGcn, kRelationalGcn, kDirectedGcn, kWeightedGcn };

std::string_view CompositionName(Composition c);
Composition ParseComposition(std::string_view name);
std::string_view WeightSharingName(WeightSharing w);
WeightSharing ParseWeightSharing(std::string_view name);
std::string_view NormModeName(NormMode n);
NormMode ParseNormMode(std::string_view name);
std::string_view PresetName(Preset p);
Preset ParsePreset(std::string_view name);

struct ModelConfig {
  // dims[0] is the input embedding width; dims[k] is the output width of
  // layer k. The number of layers is dims.size() - 1.
  std::vector<int64_t> dims = {100, 100};
  Composition composition = Composition::kMult;
  WeightSharing weights = WeightSharing::kDirection;
  NormMode norm = NormMode::kNone;
  // Number of relation basis vectors; nullopt gives every augmented relation
  // its own free input embedding.
  std::optional<int64_t> num_bases;
  double dropout = 0.0;
  Activation activation = Activation::kTanh;
  Preset preset = Preset::kNone;

  int num_layers() const { return static_cast<int>(dims.size()) - 1; }
  int64_t output_dim() const { return dims.back(); }
  bool operator==(const ModelConfig&) const = default;
};

// Returns `base` with the weight sharing and composition of the requested
// reduction:
//   KipfGCN       shared W,          phi = h_u
//   RelationalGCN W_r per relation,  phi = h_u
//   DirectedGCN   W_dir(r),          phi = h_u
//   WeightedGCN   shared W,          phi = alpha_r h_u
ModelConfig ReductionPreset(Preset kind, ModelConfig base = {});

nlohmann::json ModelConfigToJson(const ModelConfig& config);
// Validates ranges and names; a non-null "preset" overrides composition and
// weight sharing.
ModelConfig ModelConfigFromJson(const nlohmann::json& json);

// phi on vectors ([d]) or row-aligned matrices ([n x d]).
Var Compose(Composition op, Var subject, Var relation);
std::vector<double> Compose(Composition op, std::span<const double> subject,
                            std::span<const double> relation);

struct LayerOptions {
  Composition composition = Composition::kMult;
  WeightSharing weights = WeightSharing::kDirection;
  NormMode norm = NormMode::kNone;
  double dropout = 0.0;
  Activation activation = Activation::kTanh;
};

// Weights of one layer. Matrices are stored [d_in x d_out] and applied on the
// right of row-vector states.
struct LayerParams {
  int64_t in_dim = 0;
  int64_t out_dim = 0;
  // Indexed by weight slot: (original, inverse, self loop) for kDirection, a
  // single matrix for kShared, one per augmented relation for kPerRelation.
  std::vector<Parameter> weights;
  Parameter relation_weight;
  // Per augmented relation scalar used by kScaledNode.
  std::optional<Parameter> relation_scale;

  static LayerParams Create(const std::string& prefix, int64_t in_dim, int64_t out_dim,
                            WeightSharing sharing, bool scaled, int32_t num_relations, Rng& rng);

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
};

struct LayerOutput {
  Var nodes;
  Var relations;
};

// One CompGCN layer over the augmented graph. For every node v,
//   h_v' = f(dropout(sum over edges (u, r) into v of W_slot(r) phi(h_u, h_r)))
// and the relation states become h_r' = h_r W_rel. Each slot's messages are
// summed per target in edge order before the matrix product, so the
// reduction order is fixed.
LayerOutput LayerForward(Tape& tape, const AugmentedGraph& graph, Var nodes, Var relations,
                         LayerParams& params, const LayerOptions& options, bool training,
                         Rng* dropout_rng);

// Initial relation features z_r: either a free [|R'| x d0] table or
// z = coefficients * bases with coefficients [|R'| x B] and bases [B x d0].
struct RelationInputs {
  std::optional<Parameter> table;
  std::optional<Parameter> bases;
  std::optional<Parameter> coefficients;

  static RelationInputs Create(int32_t num_relations, int64_t dim,
                               std::optional<int64_t> num_bases, Rng& rng);

  bool uses_basis() const { return bases.has_value(); }
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
};

Var MaterializeRelationInputs(Tape& tape, RelationInputs& inputs);
Tensor MaterializeRelationInputs(const RelationInputs& inputs);

struct Encoding {
  Var nodes;
  Var relations;
};

class CompGcnModel {
 public:
  // `num_nodes` rows of learned input embeddings; `num_relations` is the
  // augmented relation count 2|R| + 1.
  CompGcnModel(const ModelConfig& config, int32_t num_nodes, int32_t num_relations, Rng& rng);

  const ModelConfig& config() const { return config_; }
  int32_t num_nodes() const { return num_nodes_; }
  int32_t num_relations() const { return num_relations_; }

  Parameter& node_embeddings() { return node_embeddings_; }
  const Parameter& node_embeddings() const { return node_embeddings_; }
  RelationInputs& relation_inputs() { return relation_inputs_; }
  const RelationInputs& relation_inputs() const { return relation_inputs_; }
  std::vector<LayerParams>& layers() { return layers_; }
  const std::vector<LayerParams>& layers() const { return layers_; }

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  int64_t ParameterCount() const;

  LayerOptions layer_options() const;

  // Runs all layers starting from the learned node embeddings.
  Encoding Encode(Tape& tape, const AugmentedGraph& graph, bool training, Rng* dropout_rng);
  // Runs all layers starting from caller-provided node inputs, e.g. rows of
  // node_embeddings() gathered by node type.
  Encoding Encode(Tape& tape, const AugmentedGraph& graph, Var node_inputs, bool training,
                  Rng* dropout_rng);

 private:
  ModelConfig config_;
  int32_t num_nodes_;
  int32_t num_relations_;
  Parameter node_embeddings_;
  RelationInputs relation_inputs_;
  std::vector<LayerParams> layers_;
};

// Closed-form parameter count for a configuration:
//   N d0 + (B d0 + |R'| B  or  |R'| d0) + sum_k (S d_k d_{k+1} + d_k d_{k+1} + A)
// with S weight slots per layer (3, 1 or |R'|) and A = |R'| relation scalars
// for the weighted reduction.
int64_t ExpectedParameterCount(const ModelConfig& config, int32_t num_nodes,
                               int32_t num_relations);

}  // namespace compgcn

#endif  // COMPGCN_MODEL_H_
