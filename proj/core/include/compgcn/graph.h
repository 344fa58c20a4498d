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

#ifndef COMPGCN_GRAPH_H_
#define COMPGCN_GRAPH_H_

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace compgcn {

using EntityId = int32_t;
using RelationId = int32_t;

enum class Split : uint8_t { kTrain = 0, kValid = 1, kTest = 2 };
inline constexpr Split kAllSplits[] = {Split::kTrain, Split::kValid, Split::kTest};

std::string_view SplitName(Split split);
Split ParseSplit(std::string_view name);

struct Triple {
  EntityId subject = 0;
  RelationId relation = 0;
  EntityId object = 0;

  auto operator<=>(const Triple&) const = default;
};

// Raised when graph contents violate an id-range, duplicate or disjointness
// invariant.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Entities, relation vocabulary and split-tagged directed triples. Immutable
// after construction; the constructor validates every invariant.
class MultiRelGraph {
 public:
  MultiRelGraph() = default;
  MultiRelGraph(int32_t num_entities, std::vector<std::string> relation_names,
                std::vector<Triple> triples, std::vector<Split> splits,
                std::vector<std::string> entity_names = {});

  int32_t num_entities() const { return num_entities_; }
  int32_t num_relations() const { return static_cast<int32_t>(relation_names_.size()); }
  std::span<const Triple> triples() const { return triples_; }
  std::span<const Split> splits() const { return splits_; }
  const std::vector<std::string>& relation_names() const { return relation_names_; }
  // Empty when the graph was built without names.
  const std::vector<std::string>& entity_names() const { return entity_names_; }
  std::string EntityName(EntityId e) const;

  std::vector<Triple> TriplesIn(Split split) const;
  int64_t CountIn(Split split) const;

 private:
  void Validate() const;

  int32_t num_entities_ = 0;
  std::vector<std::string> relation_names_;
  std::vector<Triple> triples_;
  std::vector<Split> splits_;
  std::vector<std::string> entity_names_;
};

enum class Direction : uint8_t { kOriginal = 0, kInverse = 1, kSelfLoop = 2 };

struct AugmentedEdge {
  EntityId source = 0;
  EntityId target = 0;
  RelationId relation = 0;
  Direction direction = Direction::kOriginal;

  bool operator==(const AugmentedEdge&) const = default;
};

// Message-passing graph: every train triple (u, r, v) yields an Original edge
// u -> v labelled r and an Inverse edge v -> u labelled r + R; every entity
// gets one SelfLoop edge labelled 2R. Edges are stored as the block of
// originals (train order), the block of inverses (same order), then self
// loops by entity id.
class AugmentedGraph {
 public:
  AugmentedGraph() = default;
  AugmentedGraph(int32_t num_entities, int32_t num_base_relations,
                 std::vector<AugmentedEdge> edges);

  int32_t num_entities() const { return num_entities_; }
  int32_t num_base_relations() const { return num_base_relations_; }
  int32_t num_relations() const { return 2 * num_base_relations_ + 1; }
  RelationId self_loop_relation() const { return 2 * num_base_relations_; }
  RelationId InverseOf(RelationId r) const;
  std::span<const AugmentedEdge> edges() const { return edges_; }

 private:
  int32_t num_entities_ = 0;
  int32_t num_base_relations_ = 0;
  std::vector<AugmentedEdge> edges_;
};

Direction DirectionOf(RelationId augmented, int32_t num_base_relations);

AugmentedGraph Augment(const MultiRelGraph& graph);

// Keeps the triples (every split) of the m relations most frequent in the
// train split, ties going to the lower relation id. Surviving relations and
// the entities incident to surviving triples are renumbered in ascending
// original id order.
MultiRelGraph PruneTopRelations(const MultiRelGraph& graph, int32_t m);

}  // namespace compgcn

#endif  // COMPGCN_GRAPH_H_
