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


#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "compgcn/evaluation.h"
#include "compgcn/filter_index.h"
#include "compgcn/relation_category.h"
#include "support/test_support.h"

namespace compgcn {
namespace {

struct RankCase {
  std::vector<double> scores;
  EntityId gold;
  std::vector<EntityId> known;
};

// Integer-valued scores from a small range so ties are common.
RankCase RandomCase(Rng& rng) {
  RankCase c;
  const int n = 1 + static_cast<int>(UniformIndex(rng, 12));
  for (int i = 0; i < n; ++i) c.scores.push_back(static_cast<double>(UniformIndex(rng, 4)));
  c.gold = static_cast<EntityId>(UniformIndex(rng, n));
  for (EntityId e = 0; e < n; ++e) {
    if (e == c.gold || UniformUnit(rng) < 0.3) c.known.push_back(e);
  }
  return c;
}

TEST(FilteredRankTest, HandExamples) {
  const std::vector<double> scores = {3, 2, 1};
  const std::vector<EntityId> gold_only = {2};
  EXPECT_EQ(FilteredRank(scores, 2, gold_only), 3);
  const std::vector<EntityId> top = {0};
  EXPECT_EQ(FilteredRank(scores, 0, top), 1);
  const std::vector<EntityId> filtered = {0, 2};
  EXPECT_EQ(FilteredRank(scores, 2, filtered), 2);
  const std::vector<double> tied = {1, 1, 1, 1};
  const std::vector<EntityId> g0 = {0};
  EXPECT_EQ(FilteredRank(tied, 0, g0), 1 + 2);
  EXPECT_THROW(FilteredRank(scores, 3, gold_only), std::out_of_range);
  EXPECT_THROW(FilteredRank(scores, 1, gold_only), std::invalid_argument);
}

TEST(FilteredRankTest, MatchesSortOracleAndNeverExceedsRaw) {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const RankCase c = RandomCase(rng);
    const int64_t rank = FilteredRank(c.scores, c.gold, c.known);
    ASSERT_EQ(rank, testing::SortedRankOracle(c.scores, c.gold, c.known)) << "case " << i;
    ASSERT_LE(rank, RawRank(c.scores, c.gold));
    ASSERT_GE(rank, 1);
    ASSERT_LE(rank, static_cast<int64_t>(c.scores.size() - c.known.size() + 1));
  }
}

TEST(FilteredRankTest, InvariantUnderIncreasingTransform) {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const RankCase c = RandomCase(rng);
    std::vector<double> moved;
    for (double s : c.scores) moved.push_back(std::exp(0.5 * s) - 3.0);
    EXPECT_EQ(FilteredRank(moved, c.gold, c.known), FilteredRank(c.scores, c.gold, c.known));
  }
}

std::vector<RankRecord> Records(const std::vector<int64_t>& ranks) {
  std::vector<RankRecord> out;
  for (size_t i = 0; i < ranks.size(); ++i) {
    out.push_back({i % 2 ? QuerySide::kHead : QuerySide::kTail, 0, 0, ranks[i]});
  }
  return out;
}

TEST(MetricsTest, HandArithmetic) {
  const Metrics m = Summarize(Records({1, 2, 4}));
  EXPECT_NEAR(m.mrr, 0.5833333333333334, 1e-9);
  EXPECT_NEAR(m.mr, 7.0 / 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(m.hits1, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.hits3, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.hits10, 1.0);
  const Metrics ones = Summarize(Records({1, 1, 1, 1}));
  EXPECT_EQ(ones.mrr, 1.0);
  EXPECT_EQ(ones.mr, 1.0);
  EXPECT_EQ(ones.hits1, 1.0);
  EXPECT_THROW(ComputeMetrics({}), std::invalid_argument);
}

TEST(MetricsTest, RandomRanksRecount) {
  Rng rng(3);
  std::vector<int64_t> ranks;
  for (int i = 0; i < 100; ++i) ranks.push_back(1 + static_cast<int64_t>(UniformIndex(rng, 30)));
  const EvalReport report = ComputeMetrics(Records(ranks));
  double rr = 0, r = 0, h1 = 0, h3 = 0, h10 = 0;
  for (int64_t k : ranks) {
    rr += 1.0 / k;
    r += k;
    h1 += k <= 1;
    h3 += k <= 3;
    h10 += k <= 10;
  }
  EXPECT_NEAR(report.overall.mrr, rr / 100, 1e-12);
  EXPECT_NEAR(report.overall.mr, r / 100, 1e-12);
  EXPECT_NEAR(report.overall.hits1, h1 / 100, 1e-12);
  EXPECT_NEAR(report.overall.hits3, h3 / 100, 1e-12);
  EXPECT_NEAR(report.overall.hits10, h10 / 100, 1e-12);
  EXPECT_LE(report.overall.hits1, report.overall.hits3);
  EXPECT_LE(report.overall.hits3, report.overall.hits10);
  EXPECT_EQ(report.head.count + report.tail.count, 100);
}

// Zero-layer TransE model whose embeddings place entity i at (i, 0) and
// relation 0 at (+1, 0), so (i, r0, i+1) is scored exactly 0.
CompGcnModel ChainModel(int32_t n) {
  ModelConfig config;
  config.dims = {2};
  Rng rng(0);
  CompGcnModel model(config, n, 3, rng);
  for (int32_t i = 0; i < n; ++i) {
    model.node_embeddings().value.at(i, 0) = i;
    model.node_embeddings().value.at(i, 1) = 0;
  }
  model.relation_inputs().table->value = Tensor::Matrix({{1, 0}, {-1, 0}, {0, 0}});
  return model;
}

TEST(EvaluateModelTest, PerfectScorerReachesMrrOne) {
  std::vector<Triple> chain;
  for (int i = 0; i < 5; ++i) chain.push_back({i, 0, i + 1});
  const MultiRelGraph g(6, {"next"}, chain, std::vector<Split>(5, Split::kTrain));
  CompGcnModel model = ChainModel(6);
  const auto categories = CategorizeRelations(g);
  const Evaluation eval =
      EvaluateModel(model, Augment(g), g, Split::kTrain, BuildFilterIndex(g),
                    {.function = ScoreFunction::kTransE}, categories);
  EXPECT_EQ(eval.report.overall.mrr, 1.0);
  EXPECT_EQ(eval.report.head.count, 5);
  EXPECT_EQ(eval.report.tail.count, 5);
  int64_t by_category = 0;
  for (const auto& [cat, rep] : eval.report.by_category) by_category += rep.head.count + rep.tail.count;
  EXPECT_EQ(by_category, eval.report.overall.count);
}

TEST(EvaluateModelTest, FilterRemovesTrainCompetitor) {
  // Valid triple (0, r, 1); train triple (0, r, 2) scores higher but is a
  // known answer, so it must not count against the gold.
  const MultiRelGraph g(3, {"next"}, {{0, 0, 2}, {0, 0, 1}}, {Split::kTrain, Split::kValid});
  CompGcnModel model = ChainModel(3);
  model.node_embeddings().value = Tensor::Matrix({{0, 0}, {1.5, 0}, {1, 0}});
  const FilterIndex filter = BuildFilterIndex(g);
  const Evaluation eval = EvaluateModel(model, Augment(g), g, Split::kValid, filter,
                                        {.function = ScoreFunction::kTransE});
  ASSERT_EQ(eval.records.size(), 2u);
  for (const RankRecord& r : eval.records) {
    if (r.side == QuerySide::kTail) {
      EXPECT_EQ(r.gold, 1);
      EXPECT_EQ(r.rank, 1);
    }
  }
  Tape tape;
  const Encoding enc = model.Encode(tape, Augment(g), false, nullptr);
  const auto scores = ScoreAllObjects({.function = ScoreFunction::kTransE},
                                      enc.nodes.value().row(0), enc.relations.value().row(0),
                                      enc.nodes.value());
  EXPECT_EQ(RawRank(scores, 1), 2);
  EXPECT_EQ(FilteredRank(scores, 1, filter.Objects(0, 0)),
            testing::SortedRankOracle(scores, 1, filter.Objects(0, 0)));
}

TEST(EvaluateModelTest, UntrainedModelRanksNearMiddle) {
  Rng rng(4);
  const MultiRelGraph g = testing::RandomSplitGraph(rng, 12, 2, 40);
  const FilterIndex filter = BuildFilterIndex(g);
  const AugmentedGraph aug = Augment(g);
  double mean_rank = 0.0, expected = 0.0;
  int64_t count = 0;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    ModelConfig config;
    config.dims = {8, 8};
    Rng init(seed);
    CompGcnModel model(config, g.num_entities(), aug.num_relations(), init);
    const Evaluation eval = EvaluateModel(model, aug, g, Split::kTrain, filter, {});
    for (const RankRecord& r : eval.records) {
      mean_rank += static_cast<double>(r.rank);
      ++count;
    }
    for (const Triple& t : g.TriplesIn(Split::kTrain)) {
      const double tail_eff = g.num_entities() - filter.Objects(t.subject, t.relation).size() + 1;
      const double head_eff = g.num_entities() - filter.Subjects(t.object, t.relation).size() + 1;
      expected += (tail_eff + 1) / 2 + (head_eff + 1) / 2;
    }
  }
  mean_rank /= static_cast<double>(count);
  expected /= static_cast<double>(count);
  EXPECT_NEAR(mean_rank, expected, 0.2 * expected);
}

TEST(ReportTest, JsonAndTableLayout) {
  const EvalReport report = ComputeMetrics(Records({1, 2, 4}));
  const auto j = ReportToJson(report);
  EXPECT_NEAR(j.at("overall").at("mrr").get<double>(), 0.5833333333333334, 1e-12);
  EXPECT_TRUE(j.at("overall").contains("hits@10"));
  const std::string table = FormatReportTable(report);
  EXPECT_NE(table.find("MRR"), std::string::npos);
  EXPECT_NE(table.find("H@10"), std::string::npos);
}

}  // namespace
}  // namespace compgcn
