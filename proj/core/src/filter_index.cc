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

#include "compgcn/filter_index.h"

#include <algorithm>

namespace compgcn {

std::span<const EntityId> FilterIndex::Objects(EntityId subject, RelationId relation) const {
  auto it = objects_.find(Key(subject, relation));
  if (it == objects_.end()) return {};
  return it->second;
}

std::span<const EntityId> FilterIndex::Subjects(EntityId object, RelationId relation) const {
  auto it = subjects_.find(Key(object, relation));
  if (it == subjects_.end()) return {};
  return it->second;
}

bool FilterIndex::HasObject(EntityId subject, RelationId relation, EntityId object) const {
  auto objs = Objects(subject, relation);
  return std::binary_search(objs.begin(), objs.end(), object);
}

bool FilterIndex::HasSubject(EntityId object, RelationId relation, EntityId subject) const {
  auto subs = Subjects(object, relation);
  return std::binary_search(subs.begin(), subs.end(), subject);
}

FilterIndex BuildFilterIndex(const MultiRelGraph& graph, std::initializer_list<Split> splits) {
  FilterIndex index;
  index.num_relations_ = std::max(graph.num_relations(), 1);
  for (size_t i = 0; i < graph.triples().size(); ++i) {
    if (std::find(splits.begin(), splits.end(), graph.splits()[i]) == splits.end()) continue;
    const Triple& t = graph.triples()[i];
    index.objects_[index.Key(t.subject, t.relation)].push_back(t.object);
    index.subjects_[index.Key(t.object, t.relation)].push_back(t.subject);
    ++index.num_triples_;
  }
  for (auto* table : {&index.objects_, &index.subjects_}) {
    for (auto& [key, list] : *table) std::sort(list.begin(), list.end());
  }
  return index;
}

}  // namespace compgcn
