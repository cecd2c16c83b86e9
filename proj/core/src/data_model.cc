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

#include "testprio/data_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "testprio/error.h"

namespace testprio {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0f) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<float> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    Fail(ErrorCode::kFormat,
         "matrix has " + std::to_string(values_.size()) + " values, expected " +
             std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ProbabilityMatrix ProbabilityMatrix::FromMatrix(Matrix m) {
  if (m.cols() < 2) {
    Fail(ErrorCode::kFormat, "probability matrix needs at least 2 classes, got " +
                                 std::to_string(m.cols()));
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    double sum = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const float v = row[j];
      if (!std::isfinite(v)) {
        Fail(ErrorCode::kFormat, "non-finite probability at row " +
                                     std::to_string(i) + ", column " +
                                     std::to_string(j));
      }
      if (v < 0.0f || v > 1.0f) {
        Fail(ErrorCode::kFormat, "probability outside [0, 1] at row " +
                                     std::to_string(i) + ", column " +
                                     std::to_string(j));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      Fail(ErrorCode::kFormat, "probability row " + std::to_string(i) +
                                   " sums to " + std::to_string(sum));
    }
    if (sum != 1.0) {
      for (float& v : row) {
        v = static_cast<float>(std::min(1.0, static_cast<double>(v) / sum));
      }
    }
  }
  return ProbabilityMatrix(std::move(m));
}

ActivationTrace ActivationTrace::FromMatrix(Matrix m) {
  const auto& values = m.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      Fail(ErrorCode::kFormat, "non-finite activation at row " +
                                   std::to_string(k / m.cols()) + ", column " +
                                   std::to_string(k % m.cols()));
    }
  }
  return ActivationTrace(std::move(m));
}

LayerMap::LayerMap(std::vector<std::vector<std::uint32_t>> layers)
    : layers_(std::move(layers)) {
  std::size_t total = 0;
  for (const auto& layer : layers_) {
    if (layer.empty()) Fail(ErrorCode::kFormat, "layer map contains an empty layer");
    total += layer.size();
  }
  std::vector<bool> seen(total, false);
  for (const auto& layer : layers_) {
    for (std::uint32_t idx : layer) {
      if (idx >= total || seen[idx]) {
        Fail(ErrorCode::kFormat,
             "layer map is not a partition of [0, " + std::to_string(total) +
                 "): bad or repeated index " + std::to_string(idx));
      }
      seen[idx] = true;
    }
  }
  n_neurons_ = total;
}

LayerMap LayerMap::FromSizes(std::span<const std::size_t> sizes) {
  std::vector<std::vector<std::uint32_t>> layers;
  std::uint32_t next = 0;
  for (std::size_t size : sizes) {
    std::vector<std::uint32_t> layer(size);
    std::iota(layer.begin(), layer.end(), next);
    next += static_cast<std::uint32_t>(size);
    layers.push_back(std::move(layer));
  }
  return LayerMap(std::move(layers));
}

NeuronProfile::NeuronProfile(std::vector<NeuronStats> neurons)
    : neurons_(std::move(neurons)) {
  for (std::size_t i = 0; i < neurons_.size(); ++i) {
    const auto& n = neurons_[i];
    if (!std::isfinite(n.low) || !std::isfinite(n.high) ||
        !std::isfinite(n.std) || n.low > n.high || n.std < 0.0) {
      Fail(ErrorCode::kFormat, "invalid neuron profile entry " + std::to_string(i));
    }
  }
}

Permutation::Permutation(std::vector<std::uint32_t> order)
    : order_(std::move(order)) {
  std::vector<bool> seen(order_.size(), false);
  for (std::uint32_t t : order_) {
    if (t >= order_.size() || seen[t]) {
      Fail(ErrorCode::kInvalidArgument,
           "not a permutation of [0, " + std::to_string(order_.size()) +
               "): bad or repeated index " + std::to_string(t));
    }
    seen[t] = true;
  }
}

Permutation Permutation::Identity(std::size_t n) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  return Permutation(std::move(order));
}

Permutation Permutation::Reversed() const {
  Permutation rev;
  rev.order_.assign(order_.rbegin(), order_.rend());
  return rev;
}

std::size_t Argmax(std::span<const float> row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = j;
  }
  return best;
}

MisclassificationMask ComputeMisclassificationMask(
    const ProbabilityMatrix& probs, std::span<const std::int32_t> labels) {
  if (labels.size() != probs.n_tests()) {
    Fail(ErrorCode::kInvalidArgument,
         "label count " + std::to_string(labels.size()) +
             " does not match test count " + std::to_string(probs.n_tests()));
  }
  MisclassificationMask mask;
  mask.flags.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto label = labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= probs.n_classes()) {
      Fail(ErrorCode::kInvalidArgument, "label " + std::to_string(label) +
                                            " at test " + std::to_string(i) +
                                            " is out of range");
    }
    const bool wrong = Argmax(probs.row(i)) != static_cast<std::size_t>(label);
    mask.flags[i] = wrong;
    mask.k += wrong ? 1 : 0;
  }
  return mask;
}

NeuronProfile ProfileNeurons(const ActivationTrace& training_trace) {
  const std::size_t n = training_trace.n_tests();
  const std::size_t m = training_trace.n_neurons();
  if (n == 0 || m == 0) {
    Fail(ErrorCode::kInvalidArgument, "cannot profile an empty training trace");
  }
  std::vector<NeuronStats> stats(m);
  std::vector<double> sum(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    stats[j].low = stats[j].high = training_trace.row(0)[j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto row = training_trace.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double v = row[j];
      stats[j].low = std::min(stats[j].low, v);
      stats[j].high = std::max(stats[j].high, v);
      sum[j] += v;
    }
  }
  // Two-pass variance around the mean.
  std::vector<double> sq(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = training_trace.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double d = row[j] - sum[j] / static_cast<double>(n);
      sq[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    stats[j].std = std::sqrt(sq[j] / static_cast<double>(n));
  }
  return NeuronProfile(std::move(stats));
}

}  // namespace testprio
