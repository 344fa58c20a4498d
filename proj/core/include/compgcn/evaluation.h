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

#ifndef COMPGCN_EVALUATION_H_
#define COMPGCN_EVALUATION_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "compgcn/filter_index.h"
#include "compgcn/graph.h"
#include "compgcn/model.h"
#include "compgcn/relation_category.h"
#include "compgcn/scoring.h"

namespace compgcn {

// kTail ranks the object of (s, r, ?); kHead ranks the subject of (?, r, o),
// scored as the inverse query (o, r^-1, ?).
enum class QuerySide : uint8_t { kHead, kTail };

// Rank of `gold` among itself and every entity outside `known_true` (sorted
// ascending, must contain gold). Ties with gold count half, rounded up:
//   1 + #{score > gold} + ceil(#{score == gold, c != gold} / 2).
int64_t FilteredRank(std::span<const double> scores, EntityId gold,
                     std::span<const EntityId> known_true);
// The same rule with every entity competing.
int64_t RawRank(std::span<const double> scores, EntityId gold);

struct RankRecord {
  QuerySide side = QuerySide::kTail;
  RelationId relation = 0;  // base relation id
  EntityId gold = 0;
  int64_t rank = 1;
};

struct Metrics {
  int64_t count = 0;
  double mrr = 0.0;
  double mr = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
};

struct CategoryReport {
  Metrics head;
  Metrics tail;
};

struct EvalReport {
  Metrics overall;
  Metrics head;
  Metrics tail;
  // Present only when categories were supplied.
  std::map<RelationCategory, CategoryReport> by_category;
};

// Zero-count Metrics for an empty span.
Metrics Summarize(std::span<const RankRecord> records);

// Throws on empty input. `categories`, when non-empty, is indexed by base
// relation id and adds the per-category head/tail breakdown.
EvalReport ComputeMetrics(std::span<const RankRecord> records,
                          std::span<const RelationCategoryInfo> categories = {});

struct Evaluation {
  EvalReport report;
  std::vector<RankRecord> records;
};

// Filtered head and tail ranking of every triple in `split`, with the
// encoder in eval mode.
Evaluation EvaluateModel(CompGcnModel& model, const AugmentedGraph& graph,
                         const MultiRelGraph& data, Split split, const FilterIndex& filter,
                         const ScoreOptions& score,
                         std::span<const RelationCategoryInfo> categories = {});

nlohmann::json MetricsToJson(const Metrics& m);
nlohmann::json ReportToJson(const EvalReport& report);
// Aligned text table: one row per scope (overall, head, tail, then each
// category's head and tail) with MRR, MR, H@10, H@3, H@1 columns.
std::string FormatReportTable(const EvalReport& report);

}  // namespace compgcn

#endif  // COMPGCN_EVALUATION_H_
