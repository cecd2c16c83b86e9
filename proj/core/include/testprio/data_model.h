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

#ifndef TESTPRIO_DATA_MODEL_H_
#define TESTPRIO_DATA_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace testprio {

// Dense row-major matrix of binary32 values. Rows are tests.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<float> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return values_.empty(); }

  std::span<const float> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<float> row(std::size_t i) {
    return {values_.data() + i * cols_, cols_};
  }
  float at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  float& at(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

  const std::vector<float>& values() const { return values_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> values_;
};

// Absolute tolerance on |row sum - 1| accepted (and renormalized) on load.
inline constexpr double kRowSumTolerance = 1e-3;

// Softmax outputs, one row per test. Every entry lies in [0, 1], every row
// sums to 1 within kRowSumTolerance, and there are at least two classes.
class ProbabilityMatrix {
 public:
  ProbabilityMatrix() = default;

  // Validates `m`; rows whose sum is off by at most kRowSumTolerance are
  // divided by their sum, larger deviations throw ErrorCode::kFormat naming
  // the offending row.
  static ProbabilityMatrix FromMatrix(Matrix m);

  std::size_t n_tests() const { return m_.rows(); }
  std::size_t n_classes() const { return m_.cols(); }
  std::span<const float> row(std::size_t i) const { return m_.row(i); }
  const Matrix& matrix() const { return m_; }

 private:
  explicit ProbabilityMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

// Raw neuron outputs, one row per test, one column per neuron.
class ActivationTrace {
 public:
  ActivationTrace() = default;

  // Rejects non-finite entries.
  static ActivationTrace FromMatrix(Matrix m);

  std::size_t n_tests() const { return m_.rows(); }
  std::size_t n_neurons() const { return m_.cols(); }
  std::span<const float> row(std::size_t i) const { return m_.row(i); }
  const Matrix& matrix() const { return m_; }

 private:
  explicit ActivationTrace(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

// Partition of the neuron indices [0, n_neurons) into layers.
class LayerMap {
 public:
  LayerMap() = default;

  // Throws kFormat unless `layers` is a partition of [0, n) into non-empty
  // parts, where n is the total number of indices.
  explicit LayerMap(std::vector<std::vector<std::uint32_t>> layers);

  // Contiguous layers of the given sizes, in order.
  static LayerMap FromSizes(std::span<const std::size_t> sizes);

  std::size_t n_layers() const { return layers_.size(); }
  std::size_t n_neurons() const { return n_neurons_; }
  const std::vector<std::uint32_t>& layer(std::size_t i) const {
    return layers_[i];
  }
  const std::vector<std::vector<std::uint32_t>>& layers() const {
    return layers_;
  }

  friend bool operator==(const LayerMap&, const LayerMap&) = default;

 private:
  std::vector<std::vector<std::uint32_t>> layers_;
  std::size_t n_neurons_ = 0;
};

struct NeuronStats {
  double low = 0.0;
  double high = 0.0;
  double std = 0.0;

  friend bool operator==(const NeuronStats&, const NeuronStats&) = default;
};

// Training-time statistics per neuron: low <= high, std >= 0.
class NeuronProfile {
 public:
  NeuronProfile() = default;
  explicit NeuronProfile(std::vector<NeuronStats> neurons);

  std::size_t size() const { return neurons_.size(); }
  const NeuronStats& operator[](std::size_t i) const { return neurons_[i]; }
  const std::vector<NeuronStats>& neurons() const { return neurons_; }

  friend bool operator==(const NeuronProfile&, const NeuronProfile&) = default;

 private:
  std::vector<NeuronStats> neurons_;
};

using LabelVector = std::vector<std::int32_t>;

struct MisclassificationMask {
  std::vector<bool> flags;
  std::size_t k = 0;

  std::size_t size() const { return flags.size(); }
};

// A bijection on [0, n): order[r] is the test placed at rank r.
class Permutation {
 public:
  Permutation() = default;

  // Throws kInvalidArgument if `order` is not a bijection on [0, size).
  explicit Permutation(std::vector<std::uint32_t> order);

  static Permutation Identity(std::size_t n);

  std::size_t size() const { return order_.size(); }
  std::uint32_t operator[](std::size_t rank) const { return order_[rank]; }
  const std::vector<std::uint32_t>& order() const { return order_; }

  Permutation Reversed() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> order_;
};

// Index of the largest entry; ties go to the lowest index.
std::size_t Argmax(std::span<const float> row);

// flags[i] is true iff Argmax(probs.row(i)) != labels[i].
MisclassificationMask ComputeMisclassificationMask(
    const ProbabilityMatrix& probs, std::span<const std::int32_t> labels);

// Per-column min, max and population standard deviation.
NeuronProfile ProfileNeurons(const ActivationTrace& training_trace);

}  // namespace testprio

#endif  // TESTPRIO_DATA_MODEL_H_
