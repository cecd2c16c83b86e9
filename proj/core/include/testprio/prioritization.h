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

#ifndef TESTPRIO_PRIORITIZATION_H_
#define TESTPRIO_PRIORITIZATION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "testprio/coverage.h"
#include "testprio/data_model.h"

namespace testprio {

struct PrioritizationOutcome {
  Permutation order;
  // Prefix length after which no remaining test adds coverage. CAM sets it
  // when its marginal gains reach zero; every other method reports n.
  std::size_t saturation_index = 0;
  std::string method_tag;
};

// Coverage-total: non-increasing |covered|. Ties go to the lower test index,
// or, when `tie_seed` is set, to the lower rank in a seeded shuffle of the
// tests.
PrioritizationOutcome CoverageTotal(
    std::span<const CoverageSignature> signatures,
    std::optional<std::uint64_t> tie_seed = std::nullopt);

// Coverage-additional: repeatedly picks the test with the largest number of
// not-yet-covered entities (same tie rule as CoverageTotal). Once every
// remaining test has zero marginal gain the rest are appended in
// CoverageTotal order and saturation_index records the switch point.
//
// Lazy greedy over word-packed signatures: stale gains stay in a max-heap as
// upper bounds and are only recomputed when they reach the top, which is
// exact because a test's marginal gain never grows as coverage grows.
PrioritizationOutcome CoverageAdditional(
    std::span<const CoverageSignature> signatures,
    std::optional<std::uint64_t> tie_seed = std::nullopt);

// Uniform shuffle of [0, n) from Rng(seed). Throws kInvalidArgument for n == 0.
PrioritizationOutcome RandomPrioritization(std::size_t n, std::uint64_t seed);

// Writes the permutation CSV at `csv_path` and a JSON sidecar
// {"method": ..., "saturation_index": ..., "n_tests": ...} next to it with
// the extension replaced by ".json".
void SaveOutcome(const PrioritizationOutcome& outcome,
                 const std::filesystem::path& csv_path);

}  // namespace testprio

#endif  // TESTPRIO_PRIORITIZATION_H_
