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

#include "testprio/gini.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "parallel.h"
#include "testprio/error.h"

namespace testprio {
namespace {

template <typename T>
double CenteredGini(std::span<const T> p) {
  const std::size_t n = p.size();
  if (n == 0) return 0.0;
  const double center = 1.0 / static_cast<double>(n);
  double linear = 0.0;
  double squares = 0.0;
  for (const T v : p) {
    const double d = static_cast<double>(v) - center;
    linear += d;
    squares += d * d;
  }
  const double xi = (1.0 - center) - 2.0 * center * linear - squares;
  return std::clamp(xi, 0.0, 1.0 - center);
}

}  // namespace

double GiniImpurity(std::span<const double> p) { return CenteredGini(p); }
double GiniImpurity(std::span<const float> p) { return CenteredGini(p); }

std::vector<double> GiniScores(const ProbabilityMatrix& probs, unsigned threads) {
  std::vector<double> scores(probs.n_tests());
  internal::ParallelRows(scores.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) scores[i] = GiniImpurity(probs.row(i));
  });
  return scores;
}

Permutation OrderByScoreDescending(std::span<const double> scores) {
  std::vector<std::uint32_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return scores[a] > scores[b];
  });
  return Permutation(std::move(order));
}

PrioritizationOutcome PrioritizeByGini(const ProbabilityMatrix& probs,
                                       unsigned threads) {
  const auto scores = GiniScores(probs, threads);
  return {OrderByScoreDescending(scores), probs.n_tests(), "gini"};
}

void SaveScores(std::span<const double> scores, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << "test_index,score\n";
  std::array<char, 48> buf{};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::snprintf(buf.data(), buf.size(), "%zu,%.9g\n", i, scores[i]);
    out << buf.data();
  }
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace testprio
