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

#include "compgcn/scoring.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "compgcn/ops.h"

namespace compgcn {

std::string_view ScoreFunctionName(ScoreFunction f) {
  return f == ScoreFunction::kTransE ? "transe" : "distmult";
}

ScoreFunction ParseScoreFunction(std::string_view name) {
  if (name == "transe") return ScoreFunction::kTransE;
  if (name == "distmult") return ScoreFunction::kDistMult;
  throw std::invalid_argument("unknown score function '" + std::string(name) + "'");
}

double Score(const ScoreOptions& options, std::span<const double> subject,
             std::span<const double> relation, std::span<const double> object) {
  if (subject.size() != relation.size() || subject.size() != object.size()) {
    throw ShapeError("score dimension mismatch: " + std::to_string(subject.size()) + ", " +
                     std::to_string(relation.size()) + ", " + std::to_string(object.size()));
  }
  double acc = 0.0;
  if (options.function == ScoreFunction::kDistMult) {
    for (size_t i = 0; i < subject.size(); ++i) acc += subject[i] * relation[i] * object[i];
    return acc;
  }
  for (size_t i = 0; i < subject.size(); ++i) {
    const double diff = (subject[i] + relation[i]) - object[i];
    acc += options.transe_norm == 1 ? std::abs(diff) : diff * diff;
  }
  return options.transe_norm == 1 ? -acc : -std::sqrt(acc);
}

std::vector<double> ScoreAllObjects(const ScoreOptions& options, std::span<const double> subject,
                                    std::span<const double> relation, const Tensor& candidates) {
  std::vector<double> out(candidates.rows());
  for (int64_t v = 0; v < candidates.rows(); ++v) {
    out[v] = Score(options, subject, relation, candidates.row(v));
  }
  return out;
}

Var ScoreQueries(const ScoreOptions& options, const Encoding& encoding,
                 std::span<const EntityId> subjects, std::span<const RelationId> relations) {
  if (subjects.size() != relations.size()) {
    throw std::invalid_argument("query subject and relation lists differ in length");
  }
  const int64_t num_rel = encoding.relations.value().dim(0);
  for (RelationId r : relations) {
    if (r < 0 || r >= num_rel) {
      throw std::out_of_range("query relation " + std::to_string(r) + " outside [0, " +
                              std::to_string(num_rel) + ")");
    }
  }
  Var hs = GatherRows(encoding.nodes, subjects);
  Var hr = GatherRows(encoding.relations, relations);
  if (options.function == ScoreFunction::kDistMult) {
    return MatMul(Mul(hs, hr), Transpose(encoding.nodes));
  }
  return NegativeDistances(Add(hs, hr), encoding.nodes, options.transe_norm);
}

std::vector<TrainingQuery> BuildTrainingQueries(const MultiRelGraph& graph) {
  const int32_t num_rel = graph.num_relations();
  std::map<std::pair<EntityId, RelationId>, std::vector<EntityId>> answers;
  for (size_t i = 0; i < graph.triples().size(); ++i) {
    if (graph.splits()[i] != Split::kTrain) continue;
    const Triple& t = graph.triples()[i];
    answers[{t.subject, t.relation}].push_back(t.object);
    answers[{t.object, t.relation + num_rel}].push_back(t.subject);
  }
  std::vector<TrainingQuery> out;
  out.reserve(answers.size());
  for (auto& [key, list] : answers) {
    std::sort(list.begin(), list.end());
    out.push_back({key.first, key.second, std::move(list)});
  }
  return out;
}

Tensor QueryTargets(std::span<const TrainingQuery> batch, int32_t num_entities) {
  Tensor targets(Shape{static_cast<int64_t>(batch.size()), num_entities});
  for (size_t i = 0; i < batch.size(); ++i) {
    for (EntityId e : batch[i].answers) targets.at(static_cast<int64_t>(i), e) = 1.0;
  }
  return targets;
}

Var LinkPredictionLoss(const ScoreOptions& options, const Encoding& encoding,
                       std::span<const TrainingQuery> batch, double label_smoothing) {
  if (batch.empty()) throw std::invalid_argument("link prediction loss on an empty batch");
  std::vector<EntityId> subjects;
  std::vector<RelationId> relations;
  for (const TrainingQuery& q : batch) {
    subjects.push_back(q.subject);
    relations.push_back(q.relation);
  }
  Var logits = ScoreQueries(options, encoding, subjects, relations);
  const auto num_entities = static_cast<int32_t>(logits.value().dim(1));
  return BceWithLabelSmoothing(logits, QueryTargets(batch, num_entities), label_smoothing);
}

}  // namespace compgcn
