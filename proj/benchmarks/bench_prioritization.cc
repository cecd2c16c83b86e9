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

#include <algorithm>
#include <random>

#include "testprio/prioritization.h"

namespace {

// n tests over a universe of m entities, about `per_test` ids each.
std::vector<testprio::CoverageSignature> Sparse(std::size_t n, std::uint32_t m,
                                                std::size_t per_test) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<std::uint32_t> id(0, m - 1);
  std::vector<testprio::CoverageSignature> sigs(n);
  for (auto& s : sigs) {
    s.universe_size = m;
    s.ids.resize(per_test);
    for (auto& x : s.ids) x = id(gen);
    std::sort(s.ids.begin(), s.ids.end());
    s.ids.erase(std::unique(s.ids.begin(), s.ids.end()), s.ids.end());
  }
  return sigs;
}

void BM_CoverageAdditional(benchmark::State& state) {
  const auto sigs = Sparse(static_cast<std::size_t>(state.range(0)),
                           static_cast<std::uint32_t>(state.range(1)),
                           static_cast<std::size_t>(state.range(2)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(testprio::CoverageAdditional(sigs));
  }
}
BENCHMARK(BM_CoverageAdditional)
    ->Args({1000, 10000, 100})
    ->Args({10000, 100000, 1000})
    ->Unit(benchmark::kMillisecond);

void BM_CoverageTotal(benchmark::State& state) {
  const auto sigs = Sparse(static_cast<std::size_t>(state.range(0)), 100000, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(testprio::CoverageTotal(sigs));
  }
}
BENCHMARK(BM_CoverageTotal)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
