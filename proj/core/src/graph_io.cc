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

#include "compgcn/graph_io.h"

#include <fstream>
#include <set>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace compgcn {
namespace {

constexpr const char* kSplitFiles[] = {"train.txt", "valid.txt", "test.txt"};

class Vocabulary {
 public:
  int32_t Intern(std::string_view name) {
    auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<int32_t>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }
  int32_t size() const { return static_cast<int32_t>(names_.size()); }
  std::vector<std::string> Release() { return std::move(names_); }

 private:
  std::unordered_map<std::string, int32_t> ids_;
  std::vector<std::string> names_;
};

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& file, int64_t line, const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
      file_(file),
      line_(line) {}

LoadedGraph LoadTriples(const std::filesystem::path& dir, const LoadOptions& options) {
  Vocabulary entities;
  Vocabulary relations;
  std::vector<Triple> triples;
  std::vector<Split> splits;
  LoadReport report;

  for (Split split : kAllSplits) {
    const auto path = dir / kSplitFiles[static_cast<int>(split)];
    std::ifstream in(path);
    if (!in) {
      if (split != Split::kTrain && !options.require_all_splits) continue;
      throw std::runtime_error("cannot open " + path.string());
    }
    std::set<Triple> in_split;
    std::string line;
    int64_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string_view> fields;
      std::string_view rest(line);
      for (size_t tab; (tab = rest.find('\t')) != std::string_view::npos;) {
        fields.push_back(rest.substr(0, tab));
        rest.remove_prefix(tab + 1);
      }
      fields.push_back(rest);
      if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
        throw ParseError(path.string(), line_no,
                         "expected subject<TAB>relation<TAB>object, got '" + line + "'");
      }
      const int32_t known = entities.size();
      const EntityId s = entities.Intern(fields[0]);
      const RelationId r = relations.Intern(fields[1]);
      const EntityId o = entities.Intern(fields[2]);
      if (split != Split::kTrain) report.entities_outside_train += entities.size() - known;
      const Triple t{s, r, o};
      if (!in_split.insert(t).second) {
        ++report.duplicates_dropped;
        continue;
      }
      triples.push_back(t);
      splits.push_back(split);
      ++report.triples_per_split[static_cast<int>(split)];
    }
    if (split == Split::kTrain && triples.empty()) {
      throw std::runtime_error("empty training split in " + path.string());
    }
  }
  const int32_t num_entities = entities.size();
  MultiRelGraph graph(num_entities, relations.Release(), std::move(triples), std::move(splits),
                      entities.Release());
  return {std::move(graph), report};
}

void WriteTriples(const MultiRelGraph& graph, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (Split split : kAllSplits) {
    auto out = OpenForWrite(dir / kSplitFiles[static_cast<int>(split)]);
    for (size_t i = 0; i < graph.triples().size(); ++i) {
      if (graph.splits()[i] != split) continue;
      const Triple& t = graph.triples()[i];
      out << graph.EntityName(t.subject) << '\t' << graph.relation_names()[t.relation] << '\t'
          << graph.EntityName(t.object) << '\n';
    }
  }
}

void DumpIdMaps(const MultiRelGraph& graph, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto ents = OpenForWrite(dir / "entities.tsv");
  for (EntityId e = 0; e < graph.num_entities(); ++e) ents << e << '\t' << graph.EntityName(e) << '\n';
  auto rels = OpenForWrite(dir / "relations.tsv");
  for (RelationId r = 0; r < graph.num_relations(); ++r) {
    rels << r << '\t' << graph.relation_names()[r] << '\n';
  }
}

}  // namespace compgcn
