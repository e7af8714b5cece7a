// Copyright 2026 The PPBA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "ppba/attack.hpp"
#include "ppba/confusion.hpp"
#include "ppba/dct.hpp"
#include "ppba/sensing.hpp"
#include "ppba/toy_victim.hpp"
#include "support/toy_suite.hpp"

namespace {

using namespace ppba;

void BM_Dct2Forward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dct2Plan plan(n, n);
  const auto x = testing::random_vector(n * n, 1);
  std::vector<double> out(n * n);
  for (auto _ : state) {
    plan.forward(x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Dct2Forward)->Arg(32)->Arg(224)->Unit(benchmark::kMicrosecond);

// One query of the walk costs one adjoint; the benchmark shape is ImageNet's.
void BM_ApplyAdjoint(benchmark::State& state) {
  const TensorShape shape{3, 224, 224};
  const auto m = static_cast<std::size_t>(state.range(0));
  const SensingOperator op(shape, m);
  const auto z = testing::random_vector(m, 2);
  for (auto _ : state) {
    Tensor t = op.apply_adjoint(z);
    benchmark::DoNotOptimize(t.values().data());
  }
}
BENCHMARK(BM_ApplyAdjoint)->Arg(1500)->Arg(15000)->Unit(benchmark::kMicrosecond);

void BM_ApplyForward(benchmark::State& state) {
  const TensorShape shape{3, 224, 224};
  const SensingOperator op(shape, 1500);
  const auto w = testing::random_tensor(shape, 3);
  for (auto _ : state) {
    auto z = op.apply_forward(w);
    benchmark::DoNotOptimize(z.data());
  }
}
BENCHMARK(BM_ApplyForward)->Unit(benchmark::kMicrosecond);

void BM_SampleStep(benchmark::State& state) {
  const ConfusionTables tables(static_cast<std::size_t>(state.range(0)));
  Rng rng(4);
  for (auto _ : state) {
    auto step = sample_step(tables, 0.01, rng);
    benchmark::DoNotOptimize(step.directions.data());
  }
}
BENCHMARK(BM_SampleStep)->Arg(384)->Arg(1500);

void BM_PpbaAttackToySuite(benchmark::State& state) {
  ToyVictim victim(testing::suite_victim());
  const auto images = testing::suite_images(8);
  AttackConfig config;
  const SensingOperator op(testing::kSuiteShape, config.resolved_m(testing::kSuiteShape));
  std::size_t queries = 0;
  std::size_t i = 0;
  for (auto _ : state) {
    config.seed = i;
    const auto r = ppba_attack(victim, images[i++ % images.size()], op, config);
    queries += r.queries_used;
  }
  state.counters["queries_per_attack"] =
      benchmark::Counter(static_cast<double>(queries) / state.iterations());
  state.counters["queries"] = benchmark::Counter(static_cast<double>(queries),
                                                 benchmark::Counter::kIsRate);
}
BENCHMARK(BM_PpbaAttackToySuite)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
