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

#ifndef TESTPRIO_MLP_H_
#define TESTPRIO_MLP_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "testprio/data_model.h"

namespace testprio {

enum class Activation { kRelu, kIdentity };

struct DenseLayer {
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  std::vector<double> weights;  // d_out x d_in, row-major
  std::vector<double> bias;     // d_out
  Activation activation = Activation::kRelu;

  double weight(std::size_t out, std::size_t in) const {
    return weights[out * d_in + in];
  }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Feed-forward stack of dense layers followed by an implicit softmax.
class MlpModel {
 public:
  MlpModel() = default;

  // Throws kFormat if the layer dimensions do not chain, a parameter is not
  // finite, or there are no layers. The last layer must have >= 2 outputs.
  explicit MlpModel(std::vector<DenseLayer> layers);

  std::size_t input_dim() const { return layers_.front().d_in; }
  std::size_t n_classes() const { return layers_.back().d_out; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  // Output sizes of every layer, i.e. the traced layer widths.
  std::vector<std::size_t> layer_sizes() const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;

 private:
  std::vector<DenseLayer> layers_;
};

// {"layers":[{"weights":[[...]],"bias":[...],"activation":"relu"|"identity"}]}
MlpModel LoadModel(const std::filesystem::path& path);
void SaveModel(const MlpModel& model, const std::filesystem::path& path);
MlpModel ParseModelJson(std::string_view text);

struct ForwardResult {
  ProbabilityMatrix probabilities;
  // Post-activation outputs of every layer, layer-major, ending with the
  // softmax outputs of the last layer.
  ActivationTrace trace;
  LayerMap layers;
};

// Runs every row of `batch` through the model. Computation is in double
// precision; softmax subtracts the row max. Rows are processed in parallel
// when threads > 1 with identical results.
ForwardResult Forward(const MlpModel& model, const Matrix& batch,
                      unsigned threads = 1);

struct SynthConfig {
  std::uint64_t seed = 7;
  std::size_t n_tests = 5000;
  std::size_t n_train = 5000;
  // Input width followed by every layer's output width.
  std::vector<std::size_t> dims = {16, 32, 32, 10};
  double noise_scale = 0.05;
};

// Teacher/subject pair plus data drawn from Rng(seed), in this order:
//   1. teacher parameters, layer by layer, weights row-major then bias:
//      weight ~ N(0, sqrt(2 / d_in)), bias ~ N(0, 0.1)
//   2. one N(0, 1) draw per teacher parameter, same order, scaled by
//      noise_scale and added to give the subject
//   3. test inputs, row-major, N(0, 1)
//   4. training inputs, row-major, N(0, 1)
// Hidden layers use relu, the last layer identity (then softmax). Labels are
// the teacher's argmax on the test inputs.
struct SynthExperiment {
  MlpModel teacher;
  MlpModel subject;
  Matrix inputs;
  Matrix train_inputs;
  LabelVector labels;
  double noise_scale = 0.0;
};

SynthExperiment MakeSynthExperiment(const SynthConfig& config);

// The subject model's outputs on the test inputs plus the neuron profile
// recorded from its training-input trace.
struct SubjectTraces {
  ProbabilityMatrix probabilities;
  ActivationTrace trace;
  ActivationTrace train_trace;
  LayerMap layers;
  NeuronProfile profile;
};

SubjectTraces TraceSubject(const SynthExperiment& experiment, unsigned threads = 1);

}  // namespace testprio

#endif  // TESTPRIO_MLP_H_
