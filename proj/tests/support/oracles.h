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

// Test-only reference implementations. Nothing here shares code with the
// library paths they check.

#ifndef TESTPRIO_TESTS_ORACLES_H_
#define TESTPRIO_TESTS_ORACLES_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "testprio/coverage.h"

namespace testprio::testing {

// Textbook greedy: every round rescans every unpicked test against a
// std::vector<bool> of covered entities, O(m n^2). Ties go to the lower index.
// Once no test adds coverage the rest follow by descending cardinality, then
// index. Returns the order and the number of greedy picks.
inline std::pair<std::vector<std::uint32_t>, std::size_t> NaiveGreedy(
    const std::vector<CoverageSignature>& sigs) {
  const std::size_t n = sigs.size();
  const std::size_t u = n ? sigs[0].universe_size : 0;
  std::vector<bool> covered(u, false);
  std::vector<bool> picked(n, false);
  std::vector<std::uint32_t> order;
  while (order.size() < n) {
    long best = -1;
    std::size_t best_gain = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (picked[t]) continue;
      std::size_t gain = 0;
      for (auto id : sigs[t].ids) gain += covered[id] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<long>(t);
      }
    }
    if (best < 0) break;
    picked[best] = true;
    order.push_back(static_cast<std::uint32_t>(best));
    for (auto id : sigs[best].ids) covered[id] = true;
  }
  const std::size_t saturation = order.size();
  std::vector<std::uint32_t> rest;
  for (std::uint32_t t = 0; t < n; ++t) {
    if (!picked[t]) rest.push_back(t);
  }
  std::stable_sort(rest.begin(), rest.end(), [&](std::uint32_t a, std::uint32_t b) {
    return sigs[a].ids.size() > sigs[b].ids.size();
  });
  order.insert(order.end(), rest.begin(), rest.end());
  return {order, saturation};
}

// Random signatures with each entity included independently with
// probability `density`.
inline std::vector<CoverageSignature> RandomSignatures(std::mt19937_64& gen, std::size_t n,
                                                       std::uint32_t universe,
                                                       double density) {
  std::bernoulli_distribution coin(density);
  std::vector<CoverageSignature> sigs(n);
  for (auto& s : sigs) {
    s.universe_size = universe;
    for (std::uint32_t e = 0; e < universe; ++e) {
      if (coin(gen)) s.ids.push_back(e);
    }
  }
  return sigs;
}

// The statement-coverage example: tests A..D over statements 1..8, stored as
// entity ids 0..7.
inline std::vector<CoverageSignature> StatementCoverageExample() {
  return {{8, {0, 1, 2, 5, 6, 7}},  // A
          {8, {0, 1, 2, 6, 7}},     // B
          {8, {0, 1, 2, 3}},        // C
          {8, {4, 5, 6, 7}}};       // D
}

// APFD straight from the rank formula, in long double.
inline long double ApfdByFormula(const std::vector<std::uint32_t>& order,
                                 const std::vector<bool>& wrong) {
  long double n = order.size(), k = 0, sum = 0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (wrong[order[r]]) {
      k += 1;
      sum += r + 1;
    }
  }
  return 1.0L - sum / (k * n) + 1.0L / (2.0L * n);
}

inline std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::path(TESTPRIO_TEST_TMPDIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testprio::testing

#endif  // TESTPRIO_TESTS_ORACLES_H_
