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

#include "compgcn/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

namespace compgcn {
namespace {

void CheckGold(std::span<const double> scores, EntityId gold) {
  if (gold < 0 || static_cast<size_t>(gold) >= scores.size()) {
    throw std::out_of_range("gold entity " + std::to_string(gold) + " outside [0, " +
                            std::to_string(scores.size()) + ")");
  }
}

int64_t TieAdjustedRank(int64_t greater, int64_t equal) { return 1 + greater + (equal + 1) / 2; }

std::string FormatRow(const std::string& scope, const Metrics& m) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-12s %8lld %8.4f %10.2f %8.4f %8.4f %8.4f\n", scope.c_str(),
                static_cast<long long>(m.count), m.mrr, m.mr, m.hits10, m.hits3, m.hits1);
  return buf;
}

}  // namespace

int64_t FilteredRank(std::span<const double> scores, EntityId gold,
                     std::span<const EntityId> known_true) {
  CheckGold(scores, gold);
  if (!std::binary_search(known_true.begin(), known_true.end(), gold)) {
    throw std::invalid_argument("gold entity " + std::to_string(gold) +
                                " is missing from its known-true set");
  }
  const double target = scores[gold];
  int64_t greater = 0, equal = 0;
  auto filtered = known_true.begin();
  for (size_t c = 0; c < scores.size(); ++c) {
    while (filtered != known_true.end() && *filtered < static_cast<EntityId>(c)) ++filtered;
    if (filtered != known_true.end() && *filtered == static_cast<EntityId>(c)) continue;
    if (scores[c] > target) {
      ++greater;
    } else if (scores[c] == target) {
      ++equal;
    }
  }
  return TieAdjustedRank(greater, equal);
}

int64_t RawRank(std::span<const double> scores, EntityId gold) {
  CheckGold(scores, gold);
  const double target = scores[gold];
  int64_t greater = 0, equal = 0;
  for (size_t c = 0; c < scores.size(); ++c) {
    if (static_cast<EntityId>(c) == gold) continue;
    if (scores[c] > target) {
      ++greater;
    } else if (scores[c] == target) {
      ++equal;
    }
  }
  return TieAdjustedRank(greater, equal);
}

Metrics Summarize(std::span<const RankRecord> records) {
  Metrics m;
  m.count = static_cast<int64_t>(records.size());
  if (records.empty()) return m;
  for (const RankRecord& r : records) {
    if (r.rank < 1) throw std::invalid_argument("rank must be >= 1");
    const auto rank = static_cast<double>(r.rank);
    m.mrr += 1.0 / rank;
    m.mr += rank;
    m.hits1 += r.rank <= 1 ? 1.0 : 0.0;
    m.hits3 += r.rank <= 3 ? 1.0 : 0.0;
    m.hits10 += r.rank <= 10 ? 1.0 : 0.0;
  }
  const auto n = static_cast<double>(records.size());
  m.mrr /= n;
  m.mr /= n;
  m.hits1 /= n;
  m.hits3 /= n;
  m.hits10 /= n;
  return m;
}

EvalReport ComputeMetrics(std::span<const RankRecord> records,
                          std::span<const RelationCategoryInfo> categories) {
  if (records.empty()) throw std::invalid_argument("no rank records to summarize");
  EvalReport report;
  report.overall = Summarize(records);
  std::vector<RankRecord> head, tail;
  for (const RankRecord& r : records) (r.side == QuerySide::kHead ? head : tail).push_back(r);
  report.head = Summarize(head);
  report.tail = Summarize(tail);
  if (categories.empty()) return report;

  std::map<RelationCategory, std::vector<RankRecord>> cat_head, cat_tail;
  for (const RankRecord& r : records) {
    if (r.relation < 0 || static_cast<size_t>(r.relation) >= categories.size()) {
      throw std::out_of_range("record relation " + std::to_string(r.relation) +
                              " has no category");
    }
    const RelationCategory c = categories[r.relation].category;
    (r.side == QuerySide::kHead ? cat_head : cat_tail)[c].push_back(r);
  }
  for (RelationCategory c : kAllCategories) {
    if (!cat_head.count(c) && !cat_tail.count(c)) continue;
    report.by_category[c] = {Summarize(cat_head[c]), Summarize(cat_tail[c])};
  }
  return report;
}

Evaluation EvaluateModel(CompGcnModel& model, const AugmentedGraph& graph,
                         const MultiRelGraph& data, Split split, const FilterIndex& filter,
                         const ScoreOptions& score,
                         std::span<const RelationCategoryInfo> categories) {
  Tape tape;
  const Encoding enc = model.Encode(tape, graph, /*training=*/false, nullptr);
  const Tensor& nodes = enc.nodes.value();
  const Tensor& relations = enc.relations.value();
  const int32_t num_rel = data.num_relations();

  Evaluation out;
  for (size_t i = 0; i < data.triples().size(); ++i) {
    if (data.splits()[i] != split) continue;
    const Triple& t = data.triples()[i];
    const auto tail_scores =
        ScoreAllObjects(score, nodes.row(t.subject), relations.row(t.relation), nodes);
    out.records.push_back({QuerySide::kTail, t.relation, t.object,
                           FilteredRank(tail_scores, t.object, filter.Objects(t.subject, t.relation))});
    const auto head_scores =
        ScoreAllObjects(score, nodes.row(t.object), relations.row(t.relation + num_rel), nodes);
    out.records.push_back({QuerySide::kHead, t.relation, t.subject,
                           FilteredRank(head_scores, t.subject, filter.Subjects(t.object, t.relation))});
  }
  if (!out.records.empty()) out.report = ComputeMetrics(out.records, categories);
  return out;
}

nlohmann::json MetricsToJson(const Metrics& m) {
  return {{"count", m.count}, {"mrr", m.mrr},     {"mr", m.mr},
          {"hits@1", m.hits1}, {"hits@3", m.hits3}, {"hits@10", m.hits10}};
}

nlohmann::json ReportToJson(const EvalReport& report) {
  nlohmann::json j = {{"overall", MetricsToJson(report.overall)},
                      {"head", MetricsToJson(report.head)},
                      {"tail", MetricsToJson(report.tail)}};
  if (!report.by_category.empty()) {
    nlohmann::json cats = nlohmann::json::object();
    for (const auto& [c, r] : report.by_category) {
      cats[std::string(CategoryName(c))] = {{"head", MetricsToJson(r.head)},
                                            {"tail", MetricsToJson(r.tail)}};
    }
    j["by_category"] = std::move(cats);
  }
  return j;
}

std::string FormatReportTable(const EvalReport& report) {
  std::ostringstream out;
  char header[160];
  std::snprintf(header, sizeof(header), "%-12s %8s %8s %10s %8s %8s %8s\n", "Scope", "Count",
                "MRR", "MR", "H@10", "H@3", "H@1");
  out << header;
  out << FormatRow("overall", report.overall);
  out << FormatRow("head", report.head);
  out << FormatRow("tail", report.tail);
  for (const auto& [c, r] : report.by_category) {
    const std::string name(CategoryName(c));
    out << FormatRow(name + " head", r.head);
    out << FormatRow(name + " tail", r.tail);
  }
  return out.str();
}

}  // namespace compgcn
