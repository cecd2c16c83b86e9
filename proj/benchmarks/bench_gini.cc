// Copyright 2026 The testprio Authors.
//
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

#include <random>

#include "testprio/gini.h"

namespace {

testprio::ProbabilityMatrix RandomProbabilities(std::size_t n, std::size_t classes) {
  std::mt19937_64 gen(1);
  std::exponential_distribution<float> ex(1.0f);
  std::vector<float> v(n * classes);
  for (std::size_t i = 0; i < n; ++i) {
    float s = 0.0f;
    for (std::size_t j = 0; j < classes; ++j) s += v[i * classes + j] = ex(gen);
    for (std::size_t j = 0; j < classes; ++j) v[i * classes + j] /= s;
  }
  return testprio::ProbabilityMatrix::FromMatrix(testprio::Matrix(n, classes, std::move(v)));
}

void BM_GiniScores(benchmark::State& state) {
  const auto probs = RandomProbabilities(static_cast<std::size_t>(state.range(0)),
                                         static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(testprio::GiniScores(probs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GiniScores)->Args({10000, 10})->Args({10000, 100})->Args({100000, 10});

void BM_PrioritizeByGini(benchmark::State& state) {
  const auto probs = RandomProbabilities(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(testprio::PrioritizeByGini(probs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PrioritizeByGini)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
