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

#include "testprio/coverage.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "parallel.h"
#include "testprio/error.h"
#include "testprio/packed_bitset.h"

namespace testprio {
namespace {

bool IsPositiveInteger(double v) {
  return std::isfinite(v) && v >= 1.0 && v == std::floor(v) && v <= UINT32_MAX;
}

void TopKPerLayer(std::uint32_t k, std::span<const float> activations,
                  const LayerMap& layers, std::vector<std::uint32_t>& out) {
  std::vector<float> values;
  for (const auto& layer : layers.layers()) {
    if (layer.size() <= k) {
      out.insert(out.end(), layer.begin(), layer.end());
      continue;
    }
    values.clear();
    for (std::uint32_t idx : layer) values.push_back(activations[idx]);
    std::nth_element(values.begin(), values.begin() + (k - 1), values.end(),
                     std::greater<float>());
    const float kth = values[k - 1];
    for (std::uint32_t idx : layer) {
      if (activations[idx] >= kth) out.push_back(idx);
    }
  }
  std::sort(out.begin(), out.end());
}

}  // namespace

std::string_view CriterionName(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::kNac: return "NAC";
    case CriterionKind::kKmnc: return "KMNC";
    case CriterionKind::kNbc: return "NBC";
    case CriterionKind::kSnac: return "SNAC";
    case CriterionKind::kTknc: return "TKNC";
  }
  return "?";
}

void CriterionConfig::Validate() const {
  const std::string name = ToString();
  switch (kind) {
    case CriterionKind::kNac:
      if (!std::isfinite(param)) {
        Fail(ErrorCode::kInvalidArgument, name + ": threshold must be finite");
      }
      break;
    case CriterionKind::kKmnc:
    case CriterionKind::kTknc:
      if (!IsPositiveInteger(param)) {
        Fail(ErrorCode::kInvalidArgument, name + ": parameter must be an integer >= 1");
      }
      break;
    case CriterionKind::kNbc:
    case CriterionKind::kSnac:
      if (!std::isfinite(param) || param < 0.0) {
        Fail(ErrorCode::kInvalidArgument, name + ": parameter must be >= 0");
      }
      break;
  }
}

std::string CriterionConfig::ToString() const {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%s:%g",
                std::string(CriterionName(kind)).c_str(), param);
  return buf.data();
}

CriterionConfig ParseCriterion(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    Fail(ErrorCode::kInvalidArgument,
         "criterion '" + std::string(text) + "' is not of the form KIND:PARAM");
  }
  std::string kind_name(text.substr(0, colon));
  for (char& c : kind_name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  CriterionConfig cfg;
  if (kind_name == "NAC") {
    cfg.kind = CriterionKind::kNac;
  } else if (kind_name == "KMNC") {
    cfg.kind = CriterionKind::kKmnc;
  } else if (kind_name == "NBC") {
    cfg.kind = CriterionKind::kNbc;
  } else if (kind_name == "SNAC") {
    cfg.kind = CriterionKind::kSnac;
  } else if (kind_name == "TKNC") {
    cfg.kind = CriterionKind::kTknc;
  } else {
    Fail(ErrorCode::kInvalidArgument, "unknown criterion '" + kind_name + "'");
  }
  const std::string_view value = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), cfg.param);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "criterion '" + std::string(text) + "' has a malformed parameter");
  }
  cfg.Validate();
  return cfg;
}

std::vector<CriterionConfig> DefaultCriteriaGrid() {
  using K = CriterionKind;
  return {{K::kNac, 0.0},  {K::kNac, 0.75},  {K::kKmnc, 1000}, {K::kKmnc, 10000},
          {K::kNbc, 0.0},  {K::kNbc, 0.5},   {K::kNbc, 1.0},   {K::kSnac, 0.0},
          {K::kSnac, 0.5}, {K::kSnac, 1.0},  {K::kTknc, 1},    {K::kTknc, 2},
          {K::kTknc, 3}};
}

std::uint32_t EntityUniverse(const CriterionConfig& cfg, std::size_t n_neurons) {
  cfg.Validate();
  if (n_neurons == 0) Fail(ErrorCode::kInvalidArgument, "no neurons to cover");
  std::uint64_t u = n_neurons;
  switch (cfg.kind) {
    case CriterionKind::kKmnc: u *= cfg.count_param(); break;
    case CriterionKind::kNbc: u *= 2; break;
    default: break;
  }
  if (u > UINT32_MAX) {
    Fail(ErrorCode::kInvalidArgument,
         cfg.ToString() + ": universe of " + std::to_string(u) + " entities exceeds 2^32-1");
  }
  return static_cast<std::uint32_t>(u);
}

CoverageSignature ComputeSignature(const CriterionConfig& cfg,
                                   std::span<const float> activations,
                                   const NeuronProfile& profile,
                                   const LayerMap& layers) {
  const std::size_t m = activations.size();
  if (profile.size() != m || layers.n_neurons() != m) {
    Fail(ErrorCode::kInvalidArgument,
         "activation row has " + std::to_string(m) + " neurons but profile has " +
             std::to_string(profile.size()) + " and layer map " +
             std::to_string(layers.n_neurons()));
  }
  CoverageSignature sig;
  sig.universe_size = EntityUniverse(cfg, m);
  auto& ids = sig.ids;
  const double k = cfg.param;

  switch (cfg.kind) {
    case CriterionKind::kNac:
      for (std::size_t i = 0; i < m; ++i) {
        if (activations[i] > k) ids.push_back(static_cast<std::uint32_t>(i));
      }
      break;
    case CriterionKind::kKmnc: {
      const std::uint32_t sections = cfg.count_param();
      for (std::size_t i = 0; i < m; ++i) {
        const double v = activations[i];
        const auto& n = profile[i];
        if (v < n.low || v > n.high) continue;
        std::uint32_t s = 0;
        if (n.high > n.low) {
          const double pos = std::floor((v - n.low) / (n.high - n.low) * sections);
          s = static_cast<std::uint32_t>(std::min<double>(pos, sections - 1));
        }
        ids.push_back(static_cast<std::uint32_t>(i) * sections + s);
      }
      break;
    }
    case CriterionKind::kNbc:
      for (std::size_t i = 0; i < m; ++i) {
        const double v = activations[i];
        const auto& n = profile[i];
        const auto id = static_cast<std::uint32_t>(2 * i);
        if (v <= n.low - k * n.std) ids.push_back(id);
        if (v >= n.high + k * n.std) ids.push_back(id + 1);
      }
      break;
    case CriterionKind::kSnac:
      for (std::size_t i = 0; i < m; ++i) {
        const auto& n = profile[i];
        if (activations[i] >= n.high + k * n.std) {
          ids.push_back(static_cast<std::uint32_t>(i));
        }
      }
      break;
    case CriterionKind::kTknc:
      TopKPerLayer(cfg.count_param(), activations, layers, ids);
      break;
  }
  return sig;
}

std::vector<CoverageSignature> ComputeSignatures(const CriterionConfig& cfg,
                                                 const ActivationTrace& trace,
                                                 const NeuronProfile& profile,
                                                 const LayerMap& layers,
                                                 unsigned threads) {
  cfg.Validate();
  std::vector<CoverageSignature> out(trace.n_tests());
  internal::ParallelRows(out.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      out[t] = ComputeSignature(cfg, trace.row(t), profile, layers);
    }
  });
  return out;
}

std::uint32_t CommonUniverse(std::span<const CoverageSignature> signatures) {
  if (signatures.empty()) return 0;
  const std::uint32_t u = signatures.front().universe_size;
  for (std::size_t t = 0; t < signatures.size(); ++t) {
    const auto& sig = signatures[t];
    if (sig.universe_size != u) {
      Fail(ErrorCode::kInvalidArgument,
           "signature " + std::to_string(t) + " has universe " +
               std::to_string(sig.universe_size) + ", expected " + std::to_string(u));
    }
    for (std::size_t j = 0; j < sig.ids.size(); ++j) {
      if (sig.ids[j] >= u || (j > 0 && sig.ids[j] <= sig.ids[j - 1])) {
        Fail(ErrorCode::kInvalidArgument,
             "signature " + std::to_string(t) +
                 " ids must be strictly increasing and below the universe size");
      }
    }
  }
  return u;
}

std::size_t SuiteCoveredCount(std::span<const CoverageSignature> signatures) {
  const std::uint32_t u = CommonUniverse(signatures);
  DenseBitset covered(u);
  for (const auto& sig : signatures) {
    for (std::uint32_t id : sig.ids) covered.set(id);
  }
  return covered.count();
}

double SuiteCoverageRate(std::span<const CoverageSignature> signatures) {
  if (signatures.empty()) return 0.0;
  const std::uint32_t u = CommonUniverse(signatures);
  if (u == 0) return 0.0;
  return static_cast<double>(SuiteCoveredCount(signatures)) / u;
}

PackedSignatures::PackedSignatures(std::span<const CoverageSignature> signatures)
    : universe_(CommonUniverse(signatures)) {
  offsets_.reserve(signatures.size() + 1);
  offsets_.push_back(0);
  cardinality_.reserve(signatures.size());
  for (const auto& sig : signatures) {
    std::uint32_t count = 0;
    std::uint64_t prev_word = UINT64_MAX;
    for (std::uint32_t id : sig.ids) {
      const std::uint32_t w = id >> 6;
      const std::uint64_t bit = std::uint64_t{1} << (id & 63);
      if (w != prev_word) {
        word_index_.push_back(w);
        masks_.push_back(0);
        prev_word = w;
      }
      if (!(masks_.back() & bit)) ++count;
      masks_.back() |= bit;
    }
    offsets_.push_back(word_index_.size());
    cardinality_.push_back(count);
  }
}

}  // namespace testprio
