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


#include "compgcn/gradient_suite.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "compgcn/graph.h"
#include "compgcn/model.h"
#include "compgcn/ops.h"
#include "compgcn/random.h"
#include "compgcn/scoring.h"

namespace compgcn {
namespace {

Tensor RandomTensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.storage()) v = lo + (hi - lo) * UniformUnit(rng);
  return t;
}

int64_t RandomDim(Rng& rng, int64_t max) { return 1 + static_cast<int64_t>(UniformIndex(rng, max)); }

std::vector<int32_t> RandomIndex(Rng& rng, size_t n, int64_t bound) {
  std::vector<int32_t> index(n);
  for (auto& i : index) i = static_cast<int32_t>(UniformIndex(rng, bound));
  return index;
}

void Merge(GradCheckResult& into, const GradCheckResult& part, const std::string& prefix) {
  for (GradCheckEntry e : part.entries) {
    e.name = prefix + "/" + e.name;
    into.entries.push_back(std::move(e));
  }
  into.max_relative_error = std::max(into.max_relative_error, part.max_relative_error);
}

// Reduces an op output to a scalar with fixed random weights so every
// output element contributes a distinct gradient.
struct Projection {
  Tensor weights;
  Var Apply(Tape& tape, Var out) {
    if (weights.shape() != out.shape()) {
      throw ShapeError("projection shape " + ShapeToString(weights.shape()) + " vs " +
                       ShapeToString(out.shape()));
    }
    return Sum(Mul(out, tape.Constant(weights)));
  }
};

using OpFn = std::function<Var(Tape&, std::vector<Var>&)>;

GradCheckResult CheckOp(std::vector<Parameter> inputs, const OpFn& op, const Shape& out_shape,
                        Rng& rng) {
  Projection proj{RandomTensor(out_shape, rng)};
  std::vector<Parameter*> ptrs;
  for (auto& p : inputs) ptrs.push_back(&p);
  return CheckGradients(
      [&](Tape& tape) {
        std::vector<Var> vars;
        for (auto& p : inputs) vars.push_back(tape.Leaf(p));
        Var out = op(tape, vars);
        return out.value().size() == 1 && out_shape.empty() ? out : proj.Apply(tape, out);
      },
      ptrs);
}

}  // namespace

GradCheckResult RunOpGradientSuite(uint64_t seed, int trials) {
  GradCheckResult result;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(seed * 7919 + static_cast<uint64_t>(trial));
    const int64_t m = RandomDim(rng, 4), k = RandomDim(rng, 5), n = RandomDim(rng, 4);
    const std::string tag = "#" + std::to_string(trial);
    auto run = [&](const std::string& name, std::vector<Parameter> inputs, const OpFn& op,
                   const Shape& out_shape) {
      Merge(result, CheckOp(std::move(inputs), op, out_shape, rng), name + tag);
    };

    run("matmul", {{"a", RandomTensor({m, k}, rng)}, {"b", RandomTensor({k, n}, rng)}},
        [](Tape&, auto& v) { return MatMul(v[0], v[1]); }, {m, n});
    run("transpose", {{"a", RandomTensor({m, k}, rng)}},
        [](Tape&, auto& v) { return Transpose(v[0]); }, {k, m});
    for (auto [name, op] : {std::pair{"add", ElementwiseOp::kAdd},
                            std::pair{"sub", ElementwiseOp::kSub},
                            std::pair{"mul", ElementwiseOp::kMul}}) {
      const ElementwiseOp kind = op;
      run(name, {{"a", RandomTensor({m, k}, rng)}, {"b", RandomTensor({m, k}, rng)}},
          [kind](Tape&, auto& v) { return Elementwise(kind, v[0], v[1]); }, {m, k});
      run(std::string(name) + "_scalar",
          {{"a", RandomTensor({m, k}, rng)}, {"b", RandomTensor({1}, rng)}},
          [kind](Tape&, auto& v) { return Elementwise(kind, v[0], v[1]); }, {m, k});
    }
    run("corr", {{"a", RandomTensor({k}, rng)}, {"b", RandomTensor({k}, rng)}},
        [](Tape&, auto& v) { return CircularCorrelation(v[0], v[1]); }, {k});
    run("corr_rows", {{"a", RandomTensor({m, k}, rng)}, {"b", RandomTensor({m, k}, rng)}},
        [](Tape&, auto& v) { return CircularCorrelation(v[0], v[1]); }, {m, k});
    for (Activation act : {Activation::kIdentity, Activation::kTanh, Activation::kRelu}) {
      Tensor x = RandomTensor({m, k}, rng);
      // Keep relu inputs away from the kink.
      for (double& v : x.storage()) {
        if (std::abs(v) < 0.05) v += v < 0 ? -0.1 : 0.1;
      }
      run(std::string(ActivationName(act)), {{"x", x}},
          [act](Tape&, auto& v) { return Activate(act, v[0]); }, {m, k});
    }
    {
      const uint64_t mask_seed = rng();
      run("dropout", {{"x", RandomTensor({m, k}, rng)}},
          [mask_seed](Tape&, auto& v) {
            Rng mask(mask_seed);
            return Dropout(v[0], 0.3, mask, /*training=*/true);
          },
          {m, k});
    }
    run("sum", {{"x", RandomTensor({m, k}, rng)}}, [](Tape&, auto& v) { return Sum(v[0]); }, {});
    {
      const auto index = RandomIndex(rng, static_cast<size_t>(n + 1), m);
      run("gather", {{"x", RandomTensor({m, k}, rng)}},
          [index](Tape&, auto& v) { return GatherRows(v[0], index); },
          {static_cast<int64_t>(index.size()), k});
      run("scatter", {{"x", RandomTensor({static_cast<int64_t>(index.size()), k}, rng)}},
          [index, m](Tape&, auto& v) { return ScatterAddRows(v[0], index, m); }, {m, k});
      run("gather_vec", {{"x", RandomTensor({m}, rng)}},
          [index](Tape&, auto& v) { return GatherRows(v[0], index); },
          {static_cast<int64_t>(index.size())});
    }
    run("scale_rows", {{"x", RandomTensor({m, k}, rng)}, {"s", RandomTensor({m}, rng)}},
        [](Tape&, auto& v) { return ScaleRows(v[0], v[1]); }, {m, k});
    {
      std::vector<int32_t> segment(static_cast<size_t>(m + n));
      for (size_t i = 0; i < segment.size(); ++i) {
        segment[i] = i < static_cast<size_t>(n) ? static_cast<int32_t>(i)
                                                 : static_cast<int32_t>(UniformIndex(rng, n));
      }
      Shuffle(segment.begin(), segment.end(), rng);
      run("segment_mean", {{"x", RandomTensor({m + n, k}, rng)}},
          [segment, n](Tape&, auto& v) { return SegmentMean(v[0], segment, n); }, {n, k});
    }
    for (int p : {1, 2}) {
      run("distance_l" + std::to_string(p),
          {{"q", RandomTensor({m, k}, rng)}, {"c", RandomTensor({n, k}, rng)}},
          [p](Tape&, auto& v) { return NegativeDistances(v[0], v[1], p); }, {m, n});
    }
    {
      Tensor targets({m, k});
      for (double& y : targets.storage()) y = UniformUnit(rng) < 0.3 ? 1.0 : 0.0;
      run("bce", {{"logits", RandomTensor({m, k}, rng, -3.0, 3.0)}},
          [targets](Tape&, auto& v) { return BceWithLabelSmoothing(v[0], targets, 0.1); }, {});
      const auto labels = RandomIndex(rng, static_cast<size_t>(m), k);
      run("softmax_xent", {{"logits", RandomTensor({m, k}, rng, -3.0, 3.0)}},
          [labels](Tape&, auto& v) { return SoftmaxCrossEntropy(v[0], labels); }, {});
    }
  }
  return result;
}

GradCheckResult RunModelGradientSuite(uint64_t seed) {
  constexpr int32_t kEntities = 6;
  constexpr int32_t kRelations = 3;
  Rng rng(seed);
  std::set<Triple> triples;
  while (triples.size() < 12) {
    triples.insert({static_cast<EntityId>(UniformIndex(rng, kEntities)),
                    static_cast<RelationId>(UniformIndex(rng, kRelations)),
                    static_cast<EntityId>(UniformIndex(rng, kEntities))});
  }
  std::vector<Triple> list(triples.begin(), triples.end());
  const MultiRelGraph graph(kEntities, {"r0", "r1", "r2"}, list,
                            std::vector<Split>(list.size(), Split::kTrain));
  const AugmentedGraph aug = Augment(graph);
  const auto queries = BuildTrainingQueries(graph);

  GradCheckResult result;
  for (Composition op : {Composition::kSub, Composition::kMult, Composition::kCorr}) {
    ModelConfig config;
    config.dims = {4, 5, 3};
    config.composition = op;
    config.dropout = 0.2;
    Rng init(rng());
    CompGcnModel model(config, kEntities, aug.num_relations(), init);
    const uint64_t dropout_seed = rng();
    auto params = model.parameters();
    const GradCheckResult part = CheckGradients(
        [&](Tape& tape) {
          Rng dropout(dropout_seed);
          const Encoding enc = model.Encode(tape, aug, /*training=*/true, &dropout);
          return LinkPredictionLoss(ScoreOptions{}, enc, queries, 0.1);
        },
        params);
    Merge(result, part, "model_" + std::string(CompositionName(op)));
  }
  return result;
}

GradCheckResult RunGradientSuite(uint64_t seed, int trials) {
  GradCheckResult result = RunOpGradientSuite(seed, trials);
  const GradCheckResult model = RunModelGradientSuite(seed);
  result.entries.insert(result.entries.end(), model.entries.begin(), model.entries.end());
  result.max_relative_error = std::max(result.max_relative_error, model.max_relative_error);
  return result;
}

}  // namespace compgcn
