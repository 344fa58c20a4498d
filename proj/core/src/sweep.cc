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


#include "compgcn/sweep.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "compgcn/link_prediction.h"

namespace compgcn {
namespace {

double RunMrr(RunConfig config, const MultiRelGraph& graph, std::optional<int64_t> bases) {
  config.model.num_bases = bases;
  const LinkPredictionResult result = TrainLinkPrediction(config, graph);
  if (result.test) return result.test->overall.mrr;
  if (result.best_valid) return result.best_valid->overall.mrr;
  throw std::runtime_error("sweep needs a valid or test split to report MRR");
}

double Ratio(double a, double b) { return b > 0.0 ? a / b : 0.0; }

}  // namespace

std::vector<SweepRow> ScalabilitySweep(const RunConfig& base, const MultiRelGraph& graph,
                                       const SweepOptions& options) {
  std::vector<SweepRow> rows;
  for (int32_t m : options.m_values) {
    const MultiRelGraph pruned = PruneTopRelations(graph, m);
    const double full = RunMrr(base, pruned, std::nullopt);
    const double basis = RunMrr(base, pruned, options.fixed_bases);
    rows.push_back({"relations", m, options.fixed_bases, basis, full, Ratio(basis, full)});
  }
  if (!options.basis_values.empty()) {
    const double full = RunMrr(base, graph, std::nullopt);
    for (int64_t b : options.basis_values) {
      const double mrr = RunMrr(base, graph, b);
      rows.push_back({"bases", graph.num_relations(), b, mrr, full, Ratio(mrr, full)});
    }
  }
  return rows;
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::string out = "study,m,bases,mrr,reference_mrr,relative\n";
  char buf[256];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%lld,%.17g,%.17g,%.17g\n", r.study.c_str(), r.m,
                  static_cast<long long>(r.bases), r.mrr, r.reference_mrr, r.relative);
    out += buf;
  }
  return out;
}

void WriteSweepCsv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << SweepCsv(rows);
}

}  // namespace compgcn
