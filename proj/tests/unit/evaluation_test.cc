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

#include "testprio/evaluation.h"

#include <gtest/gtest.h>

#include <fstream>
#include "json.hpp"
#include <random>
#include <sstream>

#include "oracles.h"
#include "testprio/error.h"

namespace testprio {
namespace {

MisclassificationMask Mask(std::vector<bool> flags) {
  std::size_t k = 0;
  for (bool f : flags) k += f;
  return {std::move(flags), k};
}

MisclassificationMask RandomMask(std::mt19937_64& gen, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<bool> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = coin(gen);
  if (std::none_of(f.begin(), f.end(), [](bool b) { return b; })) f[gen() % n] = true;
  return Mask(std::move(f));
}

Permutation RandomPerm(std::mt19937_64& gen, std::size_t n) {
  std::vector<std::uint32_t> o(n);
  std::iota(o.begin(), o.end(), 0u);
  std::shuffle(o.begin(), o.end(), gen);
  return Permutation(std::move(o));
}

TEST(ApfdTest, WorkedExamples) {
  const auto mask = Mask({true, false, false, false});
  EXPECT_DOUBLE_EQ(Apfd(Permutation::Identity(4), mask), 0.875);
  // Two of four wrong, found at ranks 1 and 2.
  EXPECT_DOUBLE_EQ(Apfd(Permutation::Identity(4), Mask({true, true, false, false})), 0.75);
  // ... and at ranks 3 and 4.
  EXPECT_DOUBLE_EQ(Apfd(Permutation({2, 3, 0, 1}), Mask({true, true, false, false})), 0.25);
}

TEST(ApfdTest, NoMisclassificationIsAnError) {
  try {
    Apfd(Permutation::Identity(3), Mask({false, false, false}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEvaluation);
  }
  EXPECT_THROW(CurveArea(ComputeDetectionCurve(Permutation::Identity(2), Mask({false, false}))),
               Error);
}

TEST(ApfdTest, SizeMismatch) {
  EXPECT_THROW(Apfd(Permutation::Identity(3), Mask({true, false})), Error);
}

TEST(ApfdTest, AllWrongIsOneHalf) {
  std::mt19937_64 gen(1);
  for (std::size_t n : {1u, 2u, 7u, 100u}) {
    EXPECT_EQ(Apfd(RandomPerm(gen, n), Mask(std::vector<bool>(n, true))), 0.5);
  }
}

TEST(ApfdTest, MatchesFormulaAndReversal) {
  std::mt19937_64 gen(2);
  for (int inst = 0; inst < 500; ++inst) {
    const std::size_t n = 1 + gen() % 300;
    const auto mask = RandomMask(gen, n, 0.2);
    const auto perm = RandomPerm(gen, n);
    const double a = Apfd(perm, mask);
    EXPECT_NEAR(a, double(testing::ApfdByFormula(perm.order(), mask.flags)), 1e-12);
    EXPECT_NEAR(a + Apfd(perm.Reversed(), mask), 1.0, 1e-12);
    EXPECT_GT(a, 0.0);
    EXPECT_LT(a, 1.0);
    EXPECT_NEAR(CurveArea(ComputeDetectionCurve(perm, mask)), a, 1e-9);
  }
}

TEST(ApfdTest, PromotingAMisclassifiedTestNeverHurts) {
  std::mt19937_64 gen(3);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + gen() % 50;
    const auto mask = RandomMask(gen, n, 0.3);
    auto order = RandomPerm(gen, n).order();
    const double before = Apfd(Permutation(order), mask);
    // Move a misclassified test from rank r to an earlier rank q.
    std::size_t r = gen() % n;
    while (!mask.flags[order[r]]) r = gen() % n;
    const std::size_t q = r == 0 ? 0 : gen() % r;
    const auto t = order[r];
    order.erase(order.begin() + r);
    order.insert(order.begin() + q, t);
    EXPECT_GE(Apfd(Permutation(order), mask), before - 1e-15);
  }
}

TEST(DetectionCurveTest, Points) {
  const auto curve = ComputeDetectionCurve(Permutation({1, 0, 2}), Mask({true, false, true}));
  const DetectionCurve want = {{0, 0}, {1, 0}, {2, 1}, {3, 2}};
  EXPECT_EQ(curve, want);
}

TEST(TestsToMaxCoverageTest, Cases) {
  const auto sigs = testing::StatementCoverageExample();
  EXPECT_EQ(TestsToMaxCoverage(sigs, Permutation({0, 3, 2, 1})), 3u);
  EXPECT_EQ(TestsToMaxCoverage(sigs, Permutation({0, 2, 3, 1})), 3u);
  EXPECT_EQ(TestsToMaxCoverage(sigs, Permutation({1, 0, 2, 3})), 4u);
  const std::vector<CoverageSignature> empty(3, CoverageSignature{4, {}});
  EXPECT_EQ(TestsToMaxCoverage(empty, Permutation::Identity(3)), 0u);
  const std::vector<CoverageSignature> same(3, CoverageSignature{4, {2}});
  EXPECT_EQ(TestsToMaxCoverage(same, Permutation({2, 0, 1})), 1u);
}

TEST(ReportTest, WritesJsonAndCurves) {
  const auto dir = testing::TempDir("report");
  const auto mask = Mask({true, false, true, false});
  std::vector<MethodReport> reports;
  PrioritizationOutcome gini{Permutation({0, 2, 1, 3}), 4, "gini"};
  PrioritizationOutcome cam{Permutation({1, 0, 3, 2}), 2, "cam"};
  reports.push_back(EvaluateOutcome(gini, mask, 0.25));
  reports.push_back(EvaluateOutcome(cam, mask, 0.5));
  reports[1].name = "cam-NAC:0.75";
  WriteReport(reports, dir / "report.json");

  const auto j = nlohmann::json::parse(std::ifstream(dir / "report.json"));
  ASSERT_EQ(j.at("methods").size(), 2u);
  EXPECT_EQ(j["methods"][0]["name"], "gini");
  EXPECT_DOUBLE_EQ(j["methods"][0]["apfd"].get<double>(), 0.75);
  EXPECT_EQ(j["methods"][1]["saturation_index"], 2);
  EXPECT_DOUBLE_EQ(j["methods"][1]["wall_time_s"].get<double>(), 0.5);
  const std::string curve = j["methods"][1]["curve_csv"];
  EXPECT_EQ(curve.rfind("curves/", 0), 0u);
  std::ifstream in(dir / curve);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "prefix_length,found\n0,0\n1,0\n2,1\n3,1\n4,2\n");

  EXPECT_THROW(WriteReport(std::vector<MethodReport>{}, dir / "r2.json"), Error);
  reports[1].name = "gini";
  EXPECT_THROW(WriteReport(reports, dir / "r3.json"), Error);
}

TEST(ReportTest, SanitizeMethodName) {
  EXPECT_EQ(SanitizeMethodName("gini"), "gini");
  const auto s = SanitizeMethodName("cam-NAC:0.75");
  EXPECT_EQ(s.find(':'), std::string::npos);
  EXPECT_EQ(s.find('/'), std::string::npos);
}

}  // namespace
}  // namespace testprio
