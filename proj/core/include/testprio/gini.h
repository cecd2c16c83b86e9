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

#ifndef TESTPRIO_GINI_H_
#define TESTPRIO_GINI_H_

#include <filesystem>
#include <span>
#include <vector>

#include "testprio/data_model.h"
#include "testprio/prioritization.h"

namespace testprio {

// Gini impurity 1 - sum_i p_i^2 of one probability vector, accumulated in
// double precision.
//
// Evaluated in the centered form
//   (1 - 1/N) - sum_i (p_i - 1/N)^2 - (2/N) sum_i (p_i - 1/N)
// which is algebraically identical for any vector, is exact for the uniform
// vector and loses less precision near the maximum than the direct sum of
// squares. The result is clamped to [0, 1 - 1/N].
double GiniImpurity(std::span<const double> p);
double GiniImpurity(std::span<const float> p);

// One impurity score per test. Rows are scored in parallel when
// `threads` > 1; the result does not depend on the thread count.
std::vector<double> GiniScores(const ProbabilityMatrix& probs,
                               unsigned threads = 1);

// Orders tests by non-increasing impurity, ties toward the lower index.
Permutation OrderByScoreDescending(std::span<const double> scores);

PrioritizationOutcome PrioritizeByGini(const ProbabilityMatrix& probs,
                                       unsigned threads = 1);

// "test_index,score" with a header line, 9 significant digits.
void SaveScores(std::span<const double> scores,
                const std::filesystem::path& path);

}  // namespace testprio

#endif  // TESTPRIO_GINI_H_
