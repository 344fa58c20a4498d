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

#ifndef COMPGCN_RELATION_CATEGORY_H_
#define COMPGCN_RELATION_CATEGORY_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "compgcn/graph.h"

namespace compgcn {

enum class RelationCategory : uint8_t { kOneToOne, kOneToMany, kManyToOne, kManyToMany };

inline constexpr RelationCategory kAllCategories[] = {
    RelationCategory::kOneToOne, RelationCategory::kOneToMany, RelationCategory::kManyToOne,
    RelationCategory::kManyToMany};

// "1-1", "1-N", "N-1", "N-N".
std::string_view CategoryName(RelationCategory c);

inline constexpr double kDefaultCategoryThreshold = 1.5;

struct RelationCategoryInfo {
  RelationCategory category = RelationCategory::kOneToOne;
  double tails_per_head = 0.0;
  double heads_per_tail = 0.0;
  int64_t num_train_triples = 0;
  // Set for relations without train triples; those are tagged 1-1 with zero
  // ratios.
  bool no_train_triples = false;
};

// Tags each relation from its train triples: tph = #triples / #distinct
// heads, hpt = #triples / #distinct tails. A side counts as "many" when its
// ratio reaches `threshold`.
std::vector<RelationCategoryInfo> CategorizeRelations(const MultiRelGraph& graph,
                                                      double threshold = kDefaultCategoryThreshold);

}  // namespace compgcn

#endif  // COMPGCN_RELATION_CATEGORY_H_
