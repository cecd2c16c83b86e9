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

#ifndef TESTPRIO_RNG_H_
#define TESTPRIO_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace testprio {

// Portable seeded generator. The raw stream is std::mt19937_64, whose output
// sequence is fixed by the C++ standard. The derived draws below do not use
// the <random> distributions (their algorithms are implementation-defined),
// so every value is reproducible across standard libraries:
//
//   Uniform01()       (NextU64() >> 11) * 2^-53, in [0, 1)
//   Normal()          Box-Muller on two Uniform01() draws u1, u2:
//                     sqrt(-2 ln(1 - u1)) * cos(2 pi u2); no cached pair
//   UniformIndex(n)   Lemire's multiply-shift with rejection, unbiased
//   Shuffle(v)        Fisher-Yates from the back, j = UniformIndex(i + 1)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  double Uniform01();
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }
  std::uint64_t UniformIndex(std::uint64_t n);

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(UniformIndex(i));
      std::swap(values[i - 1], values[j]);
    }
  }
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    Shuffle(std::span<T>(values));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace testprio

#endif  // TESTPRIO_RNG_H_
