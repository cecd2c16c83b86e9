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

#include "testprio/rng.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace testprio {
namespace {

TEST(RngTest, RawStreamIsStandardMt19937_64) {
  // The standard pins the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.NextU64();
  EXPECT_EQ(v, 9981545732273789042ull);
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.Normal();
    EXPECT_EQ(x, b.Normal());
    differs |= x != c.Normal();
  }
  EXPECT_TRUE(differs);
}

TEST(RngTest, Uniform01Range) {
  Rng rng(1);
  double lo = 1, hi = 0, sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.Uniform01();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(RngTest, NormalMoments) {
  Rng rng(9);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.Normal();
    ASSERT_TRUE(std::isfinite(z));
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(RngTest, UniformIndexBoundsAndBalance) {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto j = rng.UniformIndex(7);
    ASSERT_LT(j, 7u);
    ++counts[j];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_EQ(rng.UniformIndex(1), 0u);
  const std::uint64_t big = (1ull << 63) + 12345;
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.UniformIndex(big), big);
}

TEST(RngTest, ShuffleIsAPermutation) {
  Rng rng(77);
  std::vector<int> v(1000);
  std::iota(v.begin(), v.end(), 0);
  rng.Shuffle(v);
  EXPECT_FALSE(std::is_sorted(v.begin(), v.end()));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(RngTest, ShuffleFirstPositionIsUniform) {
  std::vector<int> first(4, 0);
  for (std::uint64_t seed = 0; seed < 8000; ++seed) {
    Rng rng(seed);
    std::vector<int> v = {0, 1, 2, 3};
    rng.Shuffle(v);
    ++first[v[0]];
  }
  for (int c : first) EXPECT_NEAR(c, 2000, 200);
}

}  // namespace
}  // namespace testprio
