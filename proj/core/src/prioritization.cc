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

#include "testprio/prioritization.h"

#include <algorithm>
#include <numeric>
#include <queue>

#include "io_util.h"
#include "json.hpp"
#include "testprio/error.h"
#include "testprio/matrix_io.h"
#include "testprio/packed_bitset.h"
#include "testprio/rng.h"

namespace testprio {
namespace {

// tie_rank[t] orders tests that are otherwise equal; lower wins.
std::vector<std::uint32_t> TieRanks(std::size_t n, std::optional<std::uint64_t> seed) {
  std::vector<std::uint32_t> rank(n);
  if (!seed) {
    std::iota(rank.begin(), rank.end(), 0u);
    return rank;
  }
  std::vector<std::uint32_t> shuffled(n);
  std::iota(shuffled.begin(), shuffled.end(), 0u);
  Rng rng(*seed);
  rng.Shuffle(shuffled);
  for (std::size_t r = 0; r < n; ++r) rank[shuffled[r]] = static_cast<std::uint32_t>(r);
  return rank;
}

void SortByCardinality(std::vector<std::uint32_t>& tests, const PackedSignatures& packed,
                       const std::vector<std::uint32_t>& tie_rank) {
  std::sort(tests.begin(), tests.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto ca = packed.cardinality(a);
    const auto cb = packed.cardinality(b);
    if (ca != cb) return ca > cb;
    return tie_rank[a] < tie_rank[b];
  });
}

void RequireNonEmpty(std::span<const CoverageSignature> signatures) {
  if (signatures.empty()) Fail(ErrorCode::kInvalidArgument, "no tests to prioritize");
  if (signatures.size() > UINT32_MAX) {
    Fail(ErrorCode::kInvalidArgument, "too many tests to prioritize");
  }
}

struct HeapEntry {
  std::uint32_t gain;
  std::uint32_t tie_rank;
  std::uint32_t test;
  std::uint32_t stamp;  // number of selections when `gain` was computed
};

// Max-heap order: larger gain first, then lower tie rank.
struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.tie_rank > b.tie_rank;
  }
};

}  // namespace

PrioritizationOutcome CoverageTotal(std::span<const CoverageSignature> signatures,
                                    std::optional<std::uint64_t> tie_seed) {
  RequireNonEmpty(signatures);
  const PackedSignatures packed(signatures);
  const auto tie_rank = TieRanks(signatures.size(), tie_seed);
  std::vector<std::uint32_t> order(signatures.size());
  std::iota(order.begin(), order.end(), 0u);
  SortByCardinality(order, packed, tie_rank);
  return {Permutation(std::move(order)), signatures.size(), "ctm"};
}

PrioritizationOutcome CoverageAdditional(std::span<const CoverageSignature> signatures,
                                         std::optional<std::uint64_t> tie_seed) {
  RequireNonEmpty(signatures);
  const PackedSignatures packed(signatures);
  const std::size_t n = packed.n_tests();
  const auto tie_rank = TieRanks(n, tie_seed);
  const std::size_t reachable = SuiteCoveredCount(signatures);

  std::vector<HeapEntry> entries;
  entries.reserve(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    entries.push_back({packed.cardinality(t), tie_rank[t], t, 0});
  }
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap(
      HeapLess{}, std::move(entries));

  DenseBitset covered(packed.universe_size());
  std::size_t covered_count = 0;
  std::vector<std::uint32_t> order;
  order.reserve(n);
  std::vector<bool> picked(n, false);

  while (!heap.empty() && covered_count < reachable) {
    HeapEntry top = heap.top();
    heap.pop();
    const auto now = static_cast<std::uint32_t>(order.size());
    if (top.stamp != now) {
      top.gain = packed.MarginalGain(top.test, covered);
      top.stamp = now;
      heap.push(top);
      continue;
    }
    // A fresh entry on top beats every stale upper bound, so it is the
    // exact greedy choice under the same tie order.
    if (top.gain == 0) break;
    packed.AddTo(top.test, covered);
    covered_count += top.gain;
    order.push_back(top.test);
    picked[top.test] = true;
  }
  const std::size_t saturation = order.size();

  std::vector<std::uint32_t> rest;
  rest.reserve(n - saturation);
  for (std::uint32_t t = 0; t < n; ++t) {
    if (!picked[t]) rest.push_back(t);
  }
  SortByCardinality(rest, packed, tie_rank);
  order.insert(order.end(), rest.begin(), rest.end());
  return {Permutation(std::move(order)), saturation, "cam"};
}

PrioritizationOutcome RandomPrioritization(std::size_t n, std::uint64_t seed) {
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "random prioritization of zero tests");
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  rng.Shuffle(order);
  return {Permutation(std::move(order)), n, "random"};
}

void SaveOutcome(const PrioritizationOutcome& outcome,
                 const std::filesystem::path& csv_path) {
  SavePermutation(outcome.order, csv_path);
  nlohmann::ordered_json sidecar;
  sidecar["method"] = outcome.method_tag;
  sidecar["saturation_index"] = outcome.saturation_index;
  sidecar["n_tests"] = outcome.order.size();
  auto json_path = csv_path;
  json_path.replace_extension(".json");
  internal::WriteFile(json_path, sidecar.dump(2) + "\n");
}

}  // namespace testprio
