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

#include <gtest/gtest.h>

#include <fstream>
#include "json.hpp"
#include <numeric>
#include <random>

#include "oracles.h"
#include "testprio/error.h"
#include "testprio/evaluation.h"
#include "testprio/matrix_io.h"

namespace testprio {
namespace {

using Order = std::vector<std::uint32_t>;

TEST(CoverageTotalTest, StatementExample) {
  const auto sigs = testing::StatementCoverageExample();
  const auto out = CoverageTotal(sigs);
  EXPECT_EQ(out.order.order(), (Order{0, 1, 2, 3}));
  EXPECT_EQ(out.saturation_index, 4u);
  EXPECT_EQ(out.method_tag, "ctm");
}

TEST(CoverageAdditionalTest, StatementExample) {
  // After A, C and D each add one statement; the lowest index wins.
  const auto sigs = testing::StatementCoverageExample();
  const auto out = CoverageAdditional(sigs);
  EXPECT_EQ(out.order.order(), (Order{0, 2, 3, 1}));
  EXPECT_EQ(out.saturation_index, 3u);
  EXPECT_EQ(out.method_tag, "cam");
}

TEST(CoverageAdditionalTest, TieSeedReordersTies) {
  const auto sigs = testing::StatementCoverageExample();
  bool saw_acdb = false, saw_adcb = false;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto out = CoverageAdditional(sigs, seed);
    EXPECT_EQ(out.order[0], 0u);  // A is the unique largest
    EXPECT_EQ(out.order[3], 1u);  // B never adds anything after A
    EXPECT_EQ(out.saturation_index, 3u);
    saw_acdb |= out.order.order() == Order{0, 2, 3, 1};
    saw_adcb |= out.order.order() == Order{0, 3, 2, 1};
    EXPECT_EQ(out.order, CoverageAdditional(sigs, seed).order);
  }
  EXPECT_TRUE(saw_acdb);
  EXPECT_TRUE(saw_adcb);
}

TEST(CoverageAdditionalTest, MatchesNaiveGreedy) {
  std::mt19937_64 gen(11);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 1 + gen() % 200;
    const std::uint32_t u = 1 + gen() % 50;
    const double density = 0.02 + 0.3 * double(gen() % 1000) / 1000.0;
    const auto sigs = testing::RandomSignatures(gen, n, u, density);
    const auto [want, sat] = testing::NaiveGreedy(sigs);
    const auto got = CoverageAdditional(sigs);
    ASSERT_EQ(got.order.order(), want) << "instance " << inst;
    ASSERT_EQ(got.saturation_index, sat) << "instance " << inst;
  }
}

TEST(CoverageAdditionalTest, LargerRandomInstance) {
  std::mt19937_64 gen(12);
  const auto sigs = testing::RandomSignatures(gen, 200, 50, 0.1);
  EXPECT_EQ(CoverageAdditional(sigs).order.order(), testing::NaiveGreedy(sigs).first);
}

TEST(CoverageAdditionalTest, WideUniverseAcrossWordBoundaries) {
  std::mt19937_64 gen(13);
  const auto sigs = testing::RandomSignatures(gen, 150, 1000, 0.01);
  const auto [want, sat] = testing::NaiveGreedy(sigs);
  const auto got = CoverageAdditional(sigs);
  EXPECT_EQ(got.order.order(), want);
  EXPECT_EQ(got.saturation_index, sat);
}

TEST(CoverageAdditionalTest, PrefixReachesSuiteCoverageAtSaturation) {
  std::mt19937_64 gen(14);
  const auto sigs = testing::RandomSignatures(gen, 120, 80, 0.05);
  const auto out = CoverageAdditional(sigs);
  const std::size_t total = SuiteCoveredCount(sigs);
  std::vector<CoverageSignature> prefix;
  for (std::size_t r = 0; r < out.order.size(); ++r) {
    prefix.push_back(sigs[out.order[r]]);
    const std::size_t c = SuiteCoveredCount(prefix);
    if (r + 1 < out.saturation_index) EXPECT_LT(c, total);
    if (r + 1 >= out.saturation_index) EXPECT_EQ(c, total);
  }
  EXPECT_EQ(TestsToMaxCoverage(sigs, out.order), out.saturation_index);
}

TEST(CoverageAdditionalTest, FirstPickIsFirstCtmPick) {
  std::mt19937_64 gen(15);
  for (int inst = 0; inst < 50; ++inst) {
    const auto sigs = testing::RandomSignatures(gen, 60, 40, 0.1);
    EXPECT_EQ(CoverageAdditional(sigs).order[0], CoverageTotal(sigs).order[0]);
  }
}

TEST(CoverageTotalTest, DependsOnlyOnCardinality) {
  std::mt19937_64 gen(16);
  auto sigs = testing::RandomSignatures(gen, 80, 30, 0.2);
  const auto before = CoverageTotal(sigs).order;
  // Replace each set by a different set of the same size.
  for (auto& s : sigs) {
    const std::size_t c = s.ids.size();
    s.ids.resize(c);
    std::iota(s.ids.begin(), s.ids.end(), 30 - static_cast<std::uint32_t>(c));
  }
  EXPECT_EQ(CoverageTotal(sigs).order, before);
  for (std::size_t r = 1; r < before.size(); ++r) {
    EXPECT_GE(sigs[before[r - 1]].ids.size(), sigs[before[r]].ids.size());
  }
}

TEST(CoverageAdditionalTest, DegenerateSuites) {
  // Identical tests: one pick saturates, the rest keep index order.
  const std::vector<CoverageSignature> same(5, CoverageSignature{4, {1, 3}});
  auto out = CoverageAdditional(same);
  EXPECT_EQ(out.order.order(), (Order{0, 1, 2, 3, 4}));
  EXPECT_EQ(out.saturation_index, 1u);

  const std::vector<CoverageSignature> single = {{3, {0}}};
  EXPECT_EQ(CoverageAdditional(single).saturation_index, 1u);

  const std::vector<CoverageSignature> disjoint = {{6, {0}}, {6, {1, 2, 3}}, {6, {4, 5}}};
  out = CoverageAdditional(disjoint);
  EXPECT_EQ(out.order.order(), (Order{1, 2, 0}));
  EXPECT_EQ(out.saturation_index, 3u);

  const std::vector<CoverageSignature> empty(3, CoverageSignature{5, {}});
  out = CoverageAdditional(empty);
  EXPECT_EQ(out.order.order(), (Order{0, 1, 2}));
  EXPECT_EQ(out.saturation_index, 0u);

  EXPECT_THROW(CoverageAdditional(std::vector<CoverageSignature>{}), Error);
  const std::vector<CoverageSignature> mixed = {{3, {0}}, {4, {0}}};
  EXPECT_THROW(CoverageAdditional(mixed), Error);
}

TEST(RandomPrioritizationTest, DeterministicPerSeed) {
  const auto a = RandomPrioritization(1000, 3);
  EXPECT_EQ(a.order, RandomPrioritization(1000, 3).order);
  EXPECT_NE(a.order, RandomPrioritization(1000, 4).order);
  EXPECT_EQ(a.method_tag, "random");
  EXPECT_EQ(a.saturation_index, 1000u);
  EXPECT_THROW(RandomPrioritization(0, 1), Error);
}

TEST(RandomPrioritizationTest, MeanApfdIsOneHalf) {
  const std::size_t n = 10000;
  MisclassificationMask mask{std::vector<bool>(n, false), 0};
  std::mt19937_64 gen(17);
  for (std::size_t i = 0; i < n; ++i) {
    if (gen() % 10 == 0) {
      mask.flags[i] = true;
      ++mask.k;
    }
  }
  double sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    sum += Apfd(RandomPrioritization(n, seed).order, mask);
  }
  EXPECT_NEAR(sum / 100.0, 0.5, 0.02);
}

TEST(SaveOutcomeTest, CsvAndSidecar) {
  const auto dir = testing::TempDir("outcome");
  const auto out = CoverageAdditional(testing::StatementCoverageExample());
  SaveOutcome(out, dir / "cam.csv");
  EXPECT_EQ(LoadPermutation(dir / "cam.csv"), out.order);
  std::ifstream in(dir / "cam.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "rank,test_index");
  EXPECT_EQ(first, "1,0");
  const auto side = nlohmann::json::parse(std::ifstream(dir / "cam.json"));
  EXPECT_EQ(side.at("method"), "cam");
  EXPECT_EQ(side.at("saturation_index"), 3);
  EXPECT_EQ(side.at("n_tests"), 4);
}

}  // namespace
}  // namespace testprio
