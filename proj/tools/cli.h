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

#ifndef TESTPRIO_TOOLS_CLI_H_
#define TESTPRIO_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "testprio/coverage.h"
#include "testprio/data_model.h"
#include "testprio/evaluation.h"
#include "testprio/matrix_io.h"

namespace testprio::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 1;
inline constexpr int kExitFileError = 2;
inline constexpr int kExitEvaluationError = 3;

// Everything a subcommand may read. Populated from an optional JSON config
// file (same key names, underscores instead of dashes) and then from flags,
// which take precedence.
struct RunConfig {
  std::string subcommand;
  std::string probs;
  std::string labels;
  std::string trace;
  std::string profile;
  std::string signatures;
  std::string perm;
  std::string out;
  std::string out_dir = "testprio_out";
  std::string curve;
  std::string method = "gini";
  std::vector<std::string> methods = {"gini", "ctm", "cam", "random"};
  std::vector<std::string> criteria;  // empty: default grid
  std::string criterion;
  std::uint64_t seed = 7;
  std::optional<std::uint64_t> tie_seed;
  std::size_t random_repeats = 1;
  std::size_t n = 0;
  std::size_t n_tests = 5000;
  std::size_t n_train = 5000;
  std::vector<std::size_t> dims = {16, 32, 32, 10};
  double noise = 0.05;
  unsigned threads = 1;
  bool timing_strict = false;
};

struct CompareInputs {
  ProbabilityMatrix probs;
  LabelVector labels;
  std::optional<ActivationTrace> trace;
  std::optional<ProfileDocument> profile;
};

struct CompareOptions {
  std::vector<std::string> methods = {"gini", "ctm", "cam", "random"};
  std::vector<CriterionConfig> criteria = DefaultCriteriaGrid();
  std::uint64_t seed = 7;
  std::size_t random_repeats = 1;
  std::optional<std::uint64_t> tie_seed;
  unsigned threads = 1;
  // Run methods one at a time so their wall times are not contended.
  bool timing_strict = false;
};

// Runs every requested method and evaluates it against the labels. Report
// order: gini, then ctm/cam per criterion in criteria order, then random.
// Coverage methods' wall time includes computing their signatures from the
// trace; gini's includes scoring. Loading files is never timed.
std::vector<MethodReport> RunComparison(const CompareInputs& inputs,
                                        const CompareOptions& options);

// Entry point behind main(); args excludes the program name.
int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace testprio::cli

#endif  // TESTPRIO_TOOLS_CLI_H_
