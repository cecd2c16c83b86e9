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

#include <set>
#include <string>

#include "io_util.h"
#include "json.hpp"
#include "testprio/error.h"
#include "testprio/packed_bitset.h"

namespace testprio {
namespace {

void CheckSizes(const Permutation& perm, const MisclassificationMask& mask) {
  if (perm.size() != mask.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "permutation covers " + std::to_string(perm.size()) + " tests but mask has " +
             std::to_string(mask.size()));
  }
}

}  // namespace

double Apfd(const Permutation& perm, const MisclassificationMask& mask) {
  CheckSizes(perm, mask);
  if (mask.k == 0) {
    Fail(ErrorCode::kEvaluation, "APFD is undefined when no test is misclassified");
  }
  std::uint64_t rank_sum = 0;
  for (std::size_t r = 0; r < perm.size(); ++r) {
    if (mask.flags[perm[r]]) rank_sum += r + 1;
  }
  // Over a common denominator: (2kn - 2S + k) / (2kn). Both are exact
  // integers, so the result is a single rounding (k == n gives exactly 0.5).
  const std::uint64_t kn = static_cast<std::uint64_t>(mask.k) * perm.size();
  const std::uint64_t num = 2 * kn - 2 * rank_sum + mask.k;
  return static_cast<double>(num) / static_cast<double>(2 * kn);
}

DetectionCurve ComputeDetectionCurve(const Permutation& perm,
                                     const MisclassificationMask& mask) {
  CheckSizes(perm, mask);
  DetectionCurve curve;
  curve.reserve(perm.size() + 1);
  curve.push_back({0, 0});
  std::size_t found = 0;
  for (std::size_t r = 0; r < perm.size(); ++r) {
    if (mask.flags[perm[r]]) ++found;
    curve.push_back({r + 1, found});
  }
  return curve;
}

double CurveArea(const DetectionCurve& curve) {
  if (curve.size() < 2) Fail(ErrorCode::kEvaluation, "curve has no tests");
  const std::size_t n = curve.back().prioritized;
  const std::size_t k = curve.back().found;
  if (k == 0) Fail(ErrorCode::kEvaluation, "curve area is undefined when k = 0");
  // Twice the trapezoid sum, kept in integers.
  std::uint64_t doubled = 0;
  for (std::size_t j = 1; j < curve.size(); ++j) {
    doubled += curve[j - 1].found + curve[j].found;
  }
  return static_cast<double>(doubled) /
         (2.0 * static_cast<double>(k) * static_cast<double>(n));
}

std::size_t TestsToMaxCoverage(std::span<const CoverageSignature> signatures,
                               const Permutation& perm) {
  if (perm.size() != signatures.size()) {
    Fail(ErrorCode::kInvalidArgument, "permutation and signature counts differ");
  }
  const std::size_t target = SuiteCoveredCount(signatures);
  if (target == 0) return 0;
  DenseBitset covered(CommonUniverse(signatures));
  std::size_t count = 0;
  for (std::size_t r = 0; r < perm.size(); ++r) {
    for (std::uint32_t id : signatures[perm[r]].ids) {
      if (!covered.test(id)) {
        covered.set(id);
        ++count;
      }
    }
    if (count == target) return r + 1;
  }
  return perm.size();
}

MethodReport EvaluateOutcome(const PrioritizationOutcome& outcome,
                             const MisclassificationMask& mask, double wall_time_s) {
  return {outcome.method_tag, Apfd(outcome.order, mask),
          ComputeDetectionCurve(outcome.order, mask), outcome.saturation_index,
          wall_time_s};
}

std::string SanitizeMethodName(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out.push_back(keep ? c : '_');
  }
  return out;
}

void WriteReport(std::span<const MethodReport> reports,
                 const std::filesystem::path& json_path) {
  if (reports.empty()) Fail(ErrorCode::kInvalidArgument, "report has no methods");
  const auto base = json_path.parent_path();
  const std::filesystem::path curve_dir = "curves";
  std::error_code ec;
  std::filesystem::create_directories(base / curve_dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + (base / curve_dir).string());

  std::set<std::string> used;
  nlohmann::ordered_json doc;
  auto& methods = doc["methods"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    const std::string file = SanitizeMethodName(r.name) + ".csv";
    if (!used.insert(file).second) {
      Fail(ErrorCode::kInvalidArgument, "duplicate method name '" + r.name + "'");
    }
    std::string csv = "prefix_length,found\n";
    for (const auto& p : r.curve) {
      csv += std::to_string(p.prioritized);
      csv.push_back(',');
      csv += std::to_string(p.found);
      csv.push_back('\n');
    }
    internal::WriteFile(base / curve_dir / file, csv);
    methods.push_back({{"name", r.name},
                       {"apfd", r.apfd},
                       {"saturation_index", r.saturation_index},
                       {"wall_time_s", r.wall_time_s},
                       {"curve_csv", (curve_dir / file).generic_string()}});
  }
  internal::WriteFile(json_path, doc.dump(2) + "\n");
}

}  // namespace testprio
