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

#include "compgcn/graph.h"

#include <algorithm>
#include <numeric>
#include <unordered_set>
#include <utility>

namespace compgcn {
namespace {

struct TripleHash {
  size_t operator()(const Triple& t) const {
    uint64_t h = static_cast<uint32_t>(t.subject);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<uint32_t>(t.relation);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<uint32_t>(t.object);
    return static_cast<size_t>(h ^ (h >> 29));
  }
};

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  throw std::invalid_argument("unknown split '" + std::string(name) + "'");
}

MultiRelGraph::MultiRelGraph(int32_t num_entities, std::vector<std::string> relation_names,
                             std::vector<Triple> triples, std::vector<Split> splits,
                             std::vector<std::string> entity_names)
    : num_entities_(num_entities),
      relation_names_(std::move(relation_names)),
      triples_(std::move(triples)),
      splits_(std::move(splits)),
      entity_names_(std::move(entity_names)) {
  Validate();
}

void MultiRelGraph::Validate() const {
  if (num_entities_ < 0) throw GraphError("negative entity count");
  if (triples_.size() != splits_.size()) {
    throw GraphError("split tags (" + std::to_string(splits_.size()) + ") do not match triples (" +
                     std::to_string(triples_.size()) + ")");
  }
  if (!entity_names_.empty() && static_cast<int32_t>(entity_names_.size()) != num_entities_) {
    throw GraphError("entity name table has " + std::to_string(entity_names_.size()) +
                     " entries for " + std::to_string(num_entities_) + " entities");
  }
  const int32_t num_rel = num_relations();
  std::unordered_set<Triple, TripleHash> seen;
  seen.reserve(triples_.size());
  for (size_t i = 0; i < triples_.size(); ++i) {
    const Triple& t = triples_[i];
    if (t.subject < 0 || t.subject >= num_entities_ || t.object < 0 ||
        t.object >= num_entities_) {
      throw GraphError("triple " + std::to_string(i) + " references an entity outside [0, " +
                       std::to_string(num_entities_) + ")");
    }
    if (t.relation < 0 || t.relation >= num_rel) {
      throw GraphError("triple " + std::to_string(i) + " references relation " +
                       std::to_string(t.relation) + " outside [0, " + std::to_string(num_rel) +
                       ")");
    }
    if (!seen.insert(t).second) {
      throw GraphError("triple (" + std::to_string(t.subject) + ", " + std::to_string(t.relation) +
                       ", " + std::to_string(t.object) +
                       ") occurs twice; splits must be duplicate-free and disjoint");
    }
  }
}

std::string MultiRelGraph::EntityName(EntityId e) const {
  if (!entity_names_.empty()) return entity_names_.at(e);
  return std::to_string(e);
}

std::vector<Triple> MultiRelGraph::TriplesIn(Split split) const {
  std::vector<Triple> out;
  for (size_t i = 0; i < triples_.size(); ++i) {
    if (splits_[i] == split) out.push_back(triples_[i]);
  }
  return out;
}

int64_t MultiRelGraph::CountIn(Split split) const {
  return std::count(splits_.begin(), splits_.end(), split);
}

AugmentedGraph::AugmentedGraph(int32_t num_entities, int32_t num_base_relations,
                               std::vector<AugmentedEdge> edges)
    : num_entities_(num_entities),
      num_base_relations_(num_base_relations),
      edges_(std::move(edges)) {
  for (const AugmentedEdge& e : edges_) {
    if (e.source < 0 || e.source >= num_entities_ || e.target < 0 || e.target >= num_entities_ ||
        e.relation < 0 || e.relation >= num_relations()) {
      throw GraphError("dangling augmented edge " + std::to_string(e.source) + " -> " +
                       std::to_string(e.target) + " (relation " + std::to_string(e.relation) +
                       ")");
    }
    if (DirectionOf(e.relation, num_base_relations_) != e.direction) {
      throw GraphError("edge direction tag disagrees with relation id " +
                       std::to_string(e.relation));
    }
  }
}

RelationId AugmentedGraph::InverseOf(RelationId r) const {
  if (r < 0 || r >= 2 * num_base_relations_) {
    throw std::out_of_range("relation " + std::to_string(r) + " has no inverse");
  }
  return r < num_base_relations_ ? r + num_base_relations_ : r - num_base_relations_;
}

Direction DirectionOf(RelationId augmented, int32_t num_base_relations) {
  if (augmented < num_base_relations) return Direction::kOriginal;
  if (augmented < 2 * num_base_relations) return Direction::kInverse;
  return Direction::kSelfLoop;
}

AugmentedGraph Augment(const MultiRelGraph& graph) {
  const int32_t num_rel = graph.num_relations();
  const std::vector<Triple> train = graph.TriplesIn(Split::kTrain);
  std::vector<AugmentedEdge> edges;
  edges.reserve(2 * train.size() + graph.num_entities());
  for (const Triple& t : train) {
    edges.push_back({t.subject, t.object, t.relation, Direction::kOriginal});
  }
  for (const Triple& t : train) {
    edges.push_back({t.object, t.subject, t.relation + num_rel, Direction::kInverse});
  }
  for (EntityId v = 0; v < graph.num_entities(); ++v) {
    edges.push_back({v, v, 2 * num_rel, Direction::kSelfLoop});
  }
  return AugmentedGraph(graph.num_entities(), num_rel, std::move(edges));
}

MultiRelGraph PruneTopRelations(const MultiRelGraph& graph, int32_t m) {
  const int32_t num_rel = graph.num_relations();
  if (m < 1 || m > num_rel) {
    throw std::invalid_argument("relation count m must lie in [1, " + std::to_string(num_rel) +
                                "], got " + std::to_string(m));
  }
  std::vector<int64_t> freq(num_rel, 0);
  for (size_t i = 0; i < graph.triples().size(); ++i) {
    if (graph.splits()[i] == Split::kTrain) ++freq[graph.triples()[i].relation];
  }
  std::vector<RelationId> order(num_rel);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&freq](RelationId a, RelationId b) { return freq[a] > freq[b]; });
  std::vector<bool> keep(num_rel, false);
  for (int32_t i = 0; i < m; ++i) keep[order[i]] = true;

  std::vector<RelationId> rel_map(num_rel, -1);
  std::vector<std::string> rel_names;
  for (RelationId r = 0; r < num_rel; ++r) {
    if (!keep[r]) continue;
    rel_map[r] = static_cast<RelationId>(rel_names.size());
    rel_names.push_back(graph.relation_names()[r]);
  }

  std::vector<bool> incident(graph.num_entities(), false);
  for (const Triple& t : graph.triples()) {
    if (keep[t.relation]) incident[t.subject] = incident[t.object] = true;
  }
  std::vector<EntityId> ent_map(graph.num_entities(), -1);
  std::vector<std::string> ent_names;
  int32_t num_entities = 0;
  for (EntityId e = 0; e < graph.num_entities(); ++e) {
    if (!incident[e]) continue;
    ent_map[e] = num_entities++;
    if (!graph.entity_names().empty()) ent_names.push_back(graph.entity_names()[e]);
  }

  std::vector<Triple> triples;
  std::vector<Split> splits;
  for (size_t i = 0; i < graph.triples().size(); ++i) {
    const Triple& t = graph.triples()[i];
    if (!keep[t.relation]) continue;
    triples.push_back({ent_map[t.subject], rel_map[t.relation], ent_map[t.object]});
    splits.push_back(graph.splits()[i]);
  }
  return MultiRelGraph(num_entities, std::move(rel_names), std::move(triples), std::move(splits),
                       std::move(ent_names));
}

}  // namespace compgcn
