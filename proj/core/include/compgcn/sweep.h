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


#ifndef COMPGCN_SWEEP_H_
#define COMPGCN_SWEEP_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "compgcn/config.h"
#include "compgcn/graph.h"

namespace compgcn {

struct SweepRow {
  // "relations": pruned to the top-m relations, B=fixed_bases against full
  // relation embeddings on the same pruned graph.
  // "bases": full graph, B bases against full relation embeddings.
  std::string study;
  int32_t m = 0;
  int64_t bases = 0;
  double mrr = 0.0;
  double reference_mrr = 0.0;
  double relative = 0.0;
};

struct SweepOptions {
  std::vector<int32_t> m_values;
  std::vector<int64_t> basis_values;
  int64_t fixed_bases = 5;
};

// Each run reports test MRR when the graph has a test split, otherwise the
// best validation MRR.
std::vector<SweepRow> ScalabilitySweep(const RunConfig& base, const MultiRelGraph& graph,
                                       const SweepOptions& options);

// study,m,bases,mrr,reference_mrr,relative
std::string SweepCsv(const std::vector<SweepRow>& rows);
void WriteSweepCsv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

}  // namespace compgcn

#endif  // COMPGCN_SWEEP_H_
