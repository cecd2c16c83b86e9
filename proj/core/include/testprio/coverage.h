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

#ifndef TESTPRIO_COVERAGE_H_
#define TESTPRIO_COVERAGE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "testprio/data_model.h"

namespace testprio {

enum class CriterionKind {
  kNac,   // neuron activation coverage: value > threshold
  kKmnc,  // k-multisection coverage of [low, high]
  kNbc,   // neuron boundary coverage, both tails beyond k sigma
  kSnac,  // strong activation coverage, upper tail only
  kTknc,  // top-k neurons per layer
};

struct CriterionConfig {
  CriterionKind kind = CriterionKind::kNac;
  // Threshold for NAC, sigma multiple for NBC/SNAC, section count for KMNC,
  // rank for TKNC.
  double param = 0.0;

  // Throws kInvalidArgument when the parameter is out of range for the kind.
  void Validate() const;

  // Integer parameter of KMNC / TKNC.
  std::uint32_t count_param() const { return static_cast<std::uint32_t>(param); }

  // "NAC:0.75", "KMNC:1000", ...
  std::string ToString() const;

  friend bool operator==(const CriterionConfig&, const CriterionConfig&) = default;
};

// Parses "KIND:PARAM" (kind case-insensitive) and validates it.
CriterionConfig ParseCriterion(std::string_view text);

std::string_view CriterionName(CriterionKind kind);

// The parameter grid used by default for comparisons.
std::vector<CriterionConfig> DefaultCriteriaGrid();

// Sorted, duplicate-free entity ids covered by one test, all < universe_size.
//
// Entity layouts, for neuron i:
//   NAC, SNAC, TKNC  i
//   KMNC(k)          i * k + section
//   NBC              2 i (lower boundary), 2 i + 1 (upper boundary)
struct CoverageSignature {
  std::uint32_t universe_size = 0;
  std::vector<std::uint32_t> ids;

  double rate() const {
    return universe_size == 0 ? 0.0
                              : static_cast<double>(ids.size()) / universe_size;
  }

  friend bool operator==(const CoverageSignature&,
                         const CoverageSignature&) = default;
};

// Number of coverage entities: m for NAC/SNAC/TKNC, k*m for KMNC, 2m for NBC.
// Throws kInvalidArgument if it does not fit in 32 bits or m == 0.
std::uint32_t EntityUniverse(const CriterionConfig& cfg, std::size_t n_neurons);

CoverageSignature ComputeSignature(const CriterionConfig& cfg,
                                   std::span<const float> activations,
                                   const NeuronProfile& profile,
                                   const LayerMap& layers);

// Signatures of every trace row; computed in parallel when threads > 1.
std::vector<CoverageSignature> ComputeSignatures(const CriterionConfig& cfg,
                                                 const ActivationTrace& trace,
                                                 const NeuronProfile& profile,
                                                 const LayerMap& layers,
                                                 unsigned threads = 1);

// Throws kInvalidArgument unless every signature has the same universe.
// Returns that universe (0 for an empty list).
std::uint32_t CommonUniverse(std::span<const CoverageSignature> signatures);

// |union of covered sets| / universe; 0 for an empty list.
double SuiteCoverageRate(std::span<const CoverageSignature> signatures);

// |union of covered sets|.
std::size_t SuiteCoveredCount(std::span<const CoverageSignature> signatures);

}  // namespace testprio

#endif  // TESTPRIO_COVERAGE_H_
