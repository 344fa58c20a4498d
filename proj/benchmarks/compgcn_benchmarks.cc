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


#include <benchmark/benchmark.h>

#include <set>
#include <string>
#include <vector>

#include "compgcn/evaluation.h"
#include "compgcn/graph.h"
#include "compgcn/model.h"
#include "compgcn/ops.h"
#include "compgcn/optim.h"
#include "compgcn/random.h"

namespace compgcn {
namespace {

Tensor Uniform(Shape shape, Rng& rng) {
  Tensor t(shape);
  for (double& x : t.data()) x = 2.0 * UniformUnit(rng) - 1.0;
  return t;
}

MultiRelGraph RandomGraph(int32_t entities, int32_t relations, int64_t edges, Rng& rng) {
  std::set<Triple> unique;
  while (static_cast<int64_t>(unique.size()) < edges) {
    unique.insert({static_cast<EntityId>(UniformIndex(rng, entities)),
                       static_cast<RelationId>(UniformIndex(rng, relations)),
                     static_cast<EntityId>(UniformIndex(rng, entities))});
  }
  std::vector<Triple> triples(unique.begin(), unique.end());
  std::vector<std::string> names;
  for (int32_t r = 0; r < relations; ++r) names.push_back("r" + std::to_string(r));
  return MultiRelGraph(entities, names, triples, std::vector<Split>(triples.size(), Split::kTrain));
}

void BM_CircularCorrelation(benchmark::State& state) {
  Rng rng(1);
  const int64_t d = state.range(0);
  const Tensor a = Uniform({d}, rng), b = Uniform({d}, rng);
  std::vector<double> out(d);
  for (auto _ : state) {
    CircularCorrelate(a.data(), b.data(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(d);
}
BENCHMARK(BM_CircularCorrelation)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_LayerForwardBackward(benchmark::State& state) {
  Rng rng(2);
  const auto op = static_cast<Composition>(state.range(0));
  const MultiRelGraph g = RandomGraph(2000, 20, 20000, rng);
  const AugmentedGraph aug = Augment(g);
  const int64_t d = 64;
  Parameter h("h", Uniform({g.num_entities(), d}, rng));
  Parameter z("z", Uniform({aug.num_relations(), d}, rng));
  LayerParams params =
      LayerParams::Create("l", d, d, WeightSharing::kDirection, false, aug.num_relations(), rng);
  const LayerOptions options{.composition = op};
  for (auto _ : state) {
    Tape tape;
    const LayerOutput out =
        LayerForward(tape, aug, tape.Leaf(h), tape.Leaf(z), params, options, false, nullptr);
    tape.Backward(Sum(out.nodes));
  }
  state.SetLabel(std::string(CompositionName(op)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(aug.edges().size()));
}
BENCHMARK(BM_LayerForwardBackward)
    ->Arg(static_cast<int>(Composition::kSub))
    ->Arg(static_cast<int>(Composition::kMult))
    ->Arg(static_cast<int>(Composition::kCorr))
    ->Unit(benchmark::kMillisecond);

void BM_FilteredRank(benchmark::State& state) {
  Rng rng(3);
  const int64_t n = state.range(0);
  std::vector<double> scores(n);
  for (double& s : scores) s = UniformUnit(rng);
  std::vector<EntityId> known;
  for (EntityId e = 0; e < n; e += 50) known.push_back(e);
  for (auto _ : state) benchmark::DoNotOptimize(FilteredRank(scores, 0, known));
  state.SetComplexityN(n);
}
BENCHMARK(BM_FilteredRank)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

}  // namespace
}  // namespace compgcn

BENCHMARK_MAIN();
