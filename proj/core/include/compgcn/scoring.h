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

#ifndef COMPGCN_SCORING_H_
#define COMPGCN_SCORING_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "compgcn/graph.h"
#include "compgcn/model.h"
#include "compgcn/tape.h"
#include "compgcn/tensor.h"

namespace compgcn {

enum class ScoreFunction : uint8_t { kTransE, kDistMult };

std::string_view ScoreFunctionName(ScoreFunction f);
ScoreFunction ParseScoreFunction(std::string_view name);

struct ScoreOptions {
  ScoreFunction function = ScoreFunction::kDistMult;
  // Norm of the TransE distance, 1 or 2.
  int transe_norm = 1;
};

// Higher is more plausible. TransE: -||h_s + h_r - h_o||_p.
// DistMult: sum_i h_s[i] h_r[i] h_o[i].
double Score(const ScoreOptions& options, std::span<const double> subject,
             std::span<const double> relation, std::span<const double> object);

// Score against every row of `candidates`; entry v equals Score(..., row v).
std::vector<double> ScoreAllObjects(const ScoreOptions& options, std::span<const double> subject,
                                    std::span<const double> relation, const Tensor& candidates);

// Differentiable 1-vs-all scores, one row per (subject, relation) query and
// one column per node. Relation ids index the augmented relation states.
Var ScoreQueries(const ScoreOptions& options, const Encoding& encoding,
                 std::span<const EntityId> subjects, std::span<const RelationId> relations);

// A (subject, augmented relation) training query with every train-split
// answer. Inverse queries (o, r + |R|) predict subjects.
struct TrainingQuery {
  EntityId subject = 0;
  RelationId relation = 0;
  std::vector<EntityId> answers;
};

// One query per distinct (s, r) and (o, r^-1) in the train split, ordered by
// (subject, relation).
std::vector<TrainingQuery> BuildTrainingQueries(const MultiRelGraph& graph);

// 1-N binary targets [batch x num_entities].
Tensor QueryTargets(std::span<const TrainingQuery> batch, int32_t num_entities);

// Mean label-smoothed BCE of 1-vs-all scores against multi-label targets.
Var LinkPredictionLoss(const ScoreOptions& options, const Encoding& encoding,
                       std::span<const TrainingQuery> batch, double label_smoothing);

}  // namespace compgcn

#endif  // COMPGCN_SCORING_H_
