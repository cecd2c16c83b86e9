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

#include "testprio/mlp.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "io_util.h"
#include "json.hpp"
#include "parallel.h"
#include "testprio/error.h"
#include "testprio/rng.h"

namespace testprio {
namespace {

std::string_view ActivationName(Activation a) {
  return a == Activation::kRelu ? "relu" : "identity";
}

Activation ParseActivation(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "identity") return Activation::kIdentity;
  Fail(ErrorCode::kFormat, "unknown activation '" + name + "'");
}

}  // namespace

MlpModel::MlpModel(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) Fail(ErrorCode::kFormat, "model has no layers");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    const std::string where = "layer " + std::to_string(l);
    if (layer.d_in == 0 || layer.d_out == 0) Fail(ErrorCode::kFormat, where + " is empty");
    if (layer.weights.size() != layer.d_in * layer.d_out ||
        layer.bias.size() != layer.d_out) {
      Fail(ErrorCode::kFormat, where + " parameter sizes do not match its shape");
    }
    if (l > 0 && layers_[l - 1].d_out != layer.d_in) {
      Fail(ErrorCode::kFormat, where + " expects " + std::to_string(layer.d_in) +
                                   " inputs but the previous layer has " +
                                   std::to_string(layers_[l - 1].d_out) + " outputs");
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(layer.weights.begin(), layer.weights.end(), finite) ||
        !std::all_of(layer.bias.begin(), layer.bias.end(), finite)) {
      Fail(ErrorCode::kFormat, where + " has a non-finite parameter");
    }
  }
  if (n_classes() < 2) Fail(ErrorCode::kFormat, "model must output at least 2 classes");
}

std::vector<std::size_t> MlpModel::layer_sizes() const {
  std::vector<std::size_t> sizes;
  for (const auto& layer : layers_) sizes.push_back(layer.d_out);
  return sizes;
}

MlpModel ParseModelJson(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    std::vector<DenseLayer> layers;
    for (const auto& jl : doc.at("layers")) {
      DenseLayer layer;
      const auto& rows = jl.at("weights");
      layer.d_out = rows.size();
      layer.d_in = layer.d_out > 0 ? rows.at(0).size() : 0;
      for (const auto& row : rows) {
        if (row.size() != layer.d_in) {
          Fail(ErrorCode::kFormat, "ragged weight matrix in layer " +
                                       std::to_string(layers.size()));
        }
        for (const auto& w : row) layer.weights.push_back(w.get<double>());
      }
      layer.bias = jl.at("bias").get<std::vector<double>>();
      layer.activation = ParseActivation(jl.at("activation").get<std::string>());
      layers.push_back(std::move(layer));
    }
    return MlpModel(std::move(layers));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("model JSON: ") + e.what());
  }
}

MlpModel LoadModel(const std::filesystem::path& path) {
  const std::string text = internal::ReadFile(path);
  try {
    return ParseModelJson(text);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

void SaveModel(const MlpModel& model, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  auto& layers = doc["layers"] = nlohmann::ordered_json::array();
  for (const auto& layer : model.layers()) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t o = 0; o < layer.d_out; ++o) {
      rows.push_back(std::vector<double>(layer.weights.begin() + o * layer.d_in,
                                         layer.weights.begin() + (o + 1) * layer.d_in));
    }
    layers.push_back({{"weights", rows},
                      {"bias", layer.bias},
                      {"activation", ActivationName(layer.activation)}});
  }
  internal::WriteFile(path, doc.dump() + "\n");
}

ForwardResult Forward(const MlpModel& model, const Matrix& batch, unsigned threads) {
  if (batch.cols() != model.input_dim()) {
    Fail(ErrorCode::kInvalidArgument,
         "batch has " + std::to_string(batch.cols()) + " columns, model expects " +
             std::to_string(model.input_dim()));
  }
  const auto sizes = model.layer_sizes();
  std::size_t width = 0;
  for (auto s : sizes) width += s;
  const std::size_t n = batch.rows();
  const std::size_t classes = model.n_classes();
  Matrix probs(n, classes);
  Matrix trace(n, width);

  internal::ParallelRows(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t t = begin; t < end; ++t) {
      auto in = batch.row(t);
      x.assign(in.begin(), in.end());
      auto out = trace.row(t);
      std::size_t col = 0;
      const auto& layers = model.layers();
      for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        y.assign(layer.bias.begin(), layer.bias.end());
        for (std::size_t o = 0; o < layer.d_out; ++o) {
          const double* w = layer.weights.data() + o * layer.d_in;
          double acc = y[o];
          for (std::size_t i = 0; i < layer.d_in; ++i) acc += w[i] * x[i];
          y[o] = layer.activation == Activation::kRelu ? std::max(acc, 0.0) : acc;
        }
        if (l + 1 == layers.size()) {
          const double top = *std::max_element(y.begin(), y.end());
          double sum = 0.0;
          for (double& v : y) {
            v = std::exp(v - top);
            sum += v;
          }
          for (double& v : y) v /= sum;
          for (std::size_t c = 0; c < classes; ++c) {
            probs.at(t, c) = static_cast<float>(y[c]);
          }
        }
        for (double v : y) out[col++] = static_cast<float>(v);
        std::swap(x, y);
      }
    }
  });

  return {ProbabilityMatrix::FromMatrix(std::move(probs)),
          ActivationTrace::FromMatrix(std::move(trace)), LayerMap::FromSizes(sizes)};
}

SynthExperiment MakeSynthExperiment(const SynthConfig& config) {
  const auto& dims = config.dims;
  if (dims.size() < 2 || std::any_of(dims.begin(), dims.end(),
                                     [](std::size_t d) { return d == 0; })) {
    Fail(ErrorCode::kInvalidArgument,
         "synthetic model needs an input width and at least one non-empty layer");
  }
  if (dims.back() < 2) Fail(ErrorCode::kInvalidArgument, "need at least 2 classes");
  if (config.n_tests == 0 || config.n_train == 0) {
    Fail(ErrorCode::kInvalidArgument, "n_tests and n_train must be >= 1");
  }
  if (!std::isfinite(config.noise_scale) || config.noise_scale < 0.0) {
    Fail(ErrorCode::kInvalidArgument, "noise_scale must be finite and >= 0");
  }

  Rng rng(config.seed);
  std::vector<DenseLayer> teacher_layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer layer;
    layer.d_in = dims[l];
    layer.d_out = dims[l + 1];
    layer.activation = l + 2 == dims.size() ? Activation::kIdentity : Activation::kRelu;
    const double scale = std::sqrt(2.0 / static_cast<double>(layer.d_in));
    layer.weights.resize(layer.d_in * layer.d_out);
    for (double& w : layer.weights) w = rng.Normal(0.0, scale);
    layer.bias.resize(layer.d_out);
    for (double& b : layer.bias) b = rng.Normal(0.0, 0.1);
    teacher_layers.push_back(std::move(layer));
  }
  std::vector<DenseLayer> subject_layers = teacher_layers;
  for (auto& layer : subject_layers) {
    for (double& w : layer.weights) w += config.noise_scale * rng.Normal();
    for (double& b : layer.bias) b += config.noise_scale * rng.Normal();
  }

  const auto draw_inputs = [&](std::size_t rows) {
    Matrix m(rows, dims.front());
    for (std::size_t i = 0; i < rows; ++i) {
      for (float& v : m.row(i)) v = static_cast<float>(rng.Normal());
    }
    return m;
  };

  SynthExperiment exp;
  exp.teacher = MlpModel(std::move(teacher_layers));
  exp.subject = MlpModel(std::move(subject_layers));
  exp.inputs = draw_inputs(config.n_tests);
  exp.train_inputs = draw_inputs(config.n_train);
  exp.noise_scale = config.noise_scale;

  const auto teacher_out = Forward(exp.teacher, exp.inputs);
  exp.labels.resize(config.n_tests);
  for (std::size_t t = 0; t < config.n_tests; ++t) {
    exp.labels[t] = static_cast<std::int32_t>(Argmax(teacher_out.probabilities.row(t)));
  }
  return exp;
}

SubjectTraces TraceSubject(const SynthExperiment& experiment, unsigned threads) {
  auto test = Forward(experiment.subject, experiment.inputs, threads);
  auto train = Forward(experiment.subject, experiment.train_inputs, threads);
  NeuronProfile profile = ProfileNeurons(train.trace);
  return {std::move(test.probabilities), std::move(test.trace), std::move(train.trace),
          std::move(test.layers), std::move(profile)};
}

}  // namespace testprio
