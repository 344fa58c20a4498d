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

#ifndef COMPGCN_GRAPH_IO_H_
#define COMPGCN_GRAPH_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "compgcn/graph.h"

namespace compgcn {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, int64_t line, const std::string& what);

  const std::string& file() const { return file_; }
  int64_t line() const { return line_; }

 private:
  std::string file_;
  int64_t line_;
};

struct LoadReport {
  std::array<int64_t, 3> triples_per_split{};
  // Entities first seen in valid or test. They are kept and receive
  // embeddings but have no train edges besides their self loop.
  int64_t entities_outside_train = 0;
  // Repeated lines within one split file, dropped after the first.
  int64_t duplicates_dropped = 0;
};

struct LoadedGraph {
  MultiRelGraph graph;
  LoadReport report;
};

struct LoadOptions {
  // When false, a missing valid.txt or test.txt is read as an empty split.
  bool require_all_splits = true;
};

// Reads train.txt, valid.txt and test.txt (subject<TAB>relation<TAB>object,
// LF or CRLF) from `dir`. Ids are assigned by first appearance scanning
// train, then valid, then test, subject before object within a line.
LoadedGraph LoadTriples(const std::filesystem::path& dir, const LoadOptions& options = {});

// Writes the three split files back in the same layout, using entity and
// relation names when present.
void WriteTriples(const MultiRelGraph& graph, const std::filesystem::path& dir);

// Writes entities.tsv and relations.tsv as id<TAB>name.
void DumpIdMaps(const MultiRelGraph& graph, const std::filesystem::path& dir);

}  // namespace compgcn

#endif  // COMPGCN_GRAPH_IO_H_
