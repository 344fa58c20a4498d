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

#include "compgcn/relation_category.h"

#include <set>
#include <stdexcept>
#include <string>

namespace compgcn {

std::string_view CategoryName(RelationCategory c) {
  switch (c) {
    case RelationCategory::kOneToOne:
      return "1-1";
    case RelationCategory::kOneToMany:
      return "1-N";
    case RelationCategory::kManyToOne:
      return "N-1";
    case RelationCategory::kManyToMany:
      return "N-N";
  }
  return "?";
}

std::vector<RelationCategoryInfo> CategorizeRelations(const MultiRelGraph& graph,
                                                      double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("category threshold must be positive, got " +
                                std::to_string(threshold));
  }
  const int32_t num_rel = graph.num_relations();
  std::vector<std::set<EntityId>> heads(num_rel), tails(num_rel);
  std::vector<int64_t> counts(num_rel, 0);
  for (size_t i = 0; i < graph.triples().size(); ++i) {
    if (graph.splits()[i] != Split::kTrain) continue;
    const Triple& t = graph.triples()[i];
    heads[t.relation].insert(t.subject);
    tails[t.relation].insert(t.object);
    ++counts[t.relation];
  }
  std::vector<RelationCategoryInfo> out(num_rel);
  for (RelationId r = 0; r < num_rel; ++r) {
    RelationCategoryInfo& info = out[r];
    info.num_train_triples = counts[r];
    if (counts[r] == 0) {
      info.no_train_triples = true;
      continue;
    }
    info.tails_per_head = static_cast<double>(counts[r]) / static_cast<double>(heads[r].size());
    info.heads_per_tail = static_cast<double>(counts[r]) / static_cast<double>(tails[r].size());
    const bool many_tails = info.tails_per_head >= threshold;
    const bool many_heads = info.heads_per_tail >= threshold;
    if (!many_tails && !many_heads) {
      info.category = RelationCategory::kOneToOne;
    } else if (many_tails && !many_heads) {
      info.category = RelationCategory::kOneToMany;
    } else if (!many_tails) {
      info.category = RelationCategory::kManyToOne;
    } else {
      info.category = RelationCategory::kManyToMany;
    }
  }
  return out;
}

}  // namespace compgcn
