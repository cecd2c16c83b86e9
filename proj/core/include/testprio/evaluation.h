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

#ifndef TESTPRIO_EVALUATION_H_
#define TESTPRIO_EVALUATION_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "testprio/coverage.h"
#include "testprio/data_model.h"
#include "testprio/prioritization.h"

namespace testprio {

struct CurvePoint {
  std::size_t prioritized = 0;  // tests examined so far
  std::size_t found = 0;        // misclassified tests among them

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// n + 1 points, j = 0..n.
using DetectionCurve = std::vector<CurvePoint>;

// APFD = 1 - (sum_i o_i) / (k n) + 1 / (2 n), o_i the 1-based rank of the
// i-th misclassified test. Throws kEvaluation when k == 0.
double Apfd(const Permutation& perm, const MisclassificationMask& mask);

DetectionCurve ComputeDetectionCurve(const Permutation& perm,
                                     const MisclassificationMask& mask);

// Trapezoidal area under the curve with x scaled by 1/n and y by 1/k. Equals
// Apfd() for the same inputs. Throws kEvaluation when k == 0.
double CurveArea(const DetectionCurve& curve);

// Shortest prefix of `perm` whose union coverage equals the whole suite's.
std::size_t TestsToMaxCoverage(std::span<const CoverageSignature> signatures,
                               const Permutation& perm);

struct MethodReport {
  std::string name;
  double apfd = 0.0;
  DetectionCurve curve;
  std::size_t saturation_index = 0;
  double wall_time_s = 0.0;
};

MethodReport EvaluateOutcome(const PrioritizationOutcome& outcome,
                             const MisclassificationMask& mask,
                             double wall_time_s);

// Writes {"methods":[{"name", "apfd", "saturation_index", "wall_time_s",
// "curve_csv"}]} to `json_path` and one "prefix_length,found" CSV per method
// under <json_path parent>/curves/. curve_csv is relative to the JSON file.
// Throws kInvalidArgument for an empty list.
void WriteReport(std::span<const MethodReport> reports,
                 const std::filesystem::path& json_path);

// File-name-safe form of a method name.
std::string SanitizeMethodName(std::string_view name);

}  // namespace testprio

#endif  // TESTPRIO_EVALUATION_H_
