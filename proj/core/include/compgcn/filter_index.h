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

#ifndef COMPGCN_FILTER_INDEX_H_
#define COMPGCN_FILTER_INDEX_H_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <unordered_map>
#include <vector>

#include "compgcn/graph.h"

namespace compgcn {

// Known-true answers for (subject, relation, ?) and (?, relation, object)
// queries. Answer lists are sorted ascending and duplicate-free.
class FilterIndex {
 public:
  FilterIndex() = default;

  std::span<const EntityId> Objects(EntityId subject, RelationId relation) const;
  std::span<const EntityId> Subjects(EntityId object, RelationId relation) const;
  bool HasObject(EntityId subject, RelationId relation, EntityId object) const;
  bool HasSubject(EntityId object, RelationId relation, EntityId subject) const;

  int64_t num_triples() const { return num_triples_; }
  size_t num_object_keys() const { return objects_.size(); }
  size_t num_subject_keys() const { return subjects_.size(); }

 private:
  friend FilterIndex BuildFilterIndex(const MultiRelGraph&, std::initializer_list<Split>);

  uint64_t Key(EntityId e, RelationId r) const {
    return static_cast<uint64_t>(e) * static_cast<uint64_t>(num_relations_) +
           static_cast<uint64_t>(r);
  }

  int32_t num_relations_ = 0;
  int64_t num_triples_ = 0;
  std::unordered_map<uint64_t, std::vector<EntityId>> objects_;
  std::unordered_map<uint64_t, std::vector<EntityId>> subjects_;
};

// Index over the triples of the listed splits (all three by default).
FilterIndex BuildFilterIndex(const MultiRelGraph& graph,
                             std::initializer_list<Split> splits = {Split::kTrain, Split::kValid,
                                                                    Split::kTest});

}  // namespace compgcn

#endif  // COMPGCN_FILTER_INDEX_H_
