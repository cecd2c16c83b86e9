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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.h"
#include "testprio/error.h"

namespace testprio {
namespace {

DenseLayer Layer(std::size_t d_in, std::size_t d_out, Activation act, double w = 0.0) {
  return {d_in, d_out, std::vector<double>(d_in * d_out, w), std::vector<double>(d_out, 0.0),
          act};
}

TEST(MlpModelTest, ShapeValidation) {
  EXPECT_NO_THROW(MlpModel({Layer(3, 4, Activation::kRelu), Layer(4, 2, Activation::kIdentity)}));
  EXPECT_THROW(MlpModel({Layer(3, 4, Activation::kRelu), Layer(5, 2, Activation::kIdentity)}),
               Error);
  EXPECT_THROW(MlpModel({Layer(3, 1, Activation::kIdentity)}), Error);
  EXPECT_THROW(MlpModel(std::vector<DenseLayer>{}), Error);
  auto bad = Layer(2, 2, Activation::kIdentity);
  bad.weights[1] = std::nan("");
  EXPECT_THROW(MlpModel({bad}), Error);
}

TEST(MlpModelTest, JsonRoundTrip) {
  const auto dir = testing::TempDir("mlp_json");
  SynthConfig cfg;
  cfg.n_tests = 3;
  cfg.n_train = 3;
  const auto exp = MakeSynthExperiment(cfg);
  SaveModel(exp.subject, dir / "m.json");
  EXPECT_EQ(LoadModel(dir / "m.json"), exp.subject);
  EXPECT_EQ(exp.subject.layer_sizes(), (std::vector<std::size_t>{32, 32, 10}));
}

TEST(MlpModelTest, JsonErrors) {
  EXPECT_THROW(ParseModelJson("{\"layers\":[{\"weights\":[[1,2],[3]],\"bias\":[0,0],"
                              "\"activation\":\"identity\"}]}"),
               Error);
  EXPECT_THROW(ParseModelJson("{\"layers\":[{\"weights\":[[1,2],[3,4]],\"bias\":[0,0]}]}"),
               Error);
  EXPECT_THROW(ParseModelJson("{\"layers\":[{\"weights\":[[1,2],[3,4]],\"bias\":[0,0],"
                              "\"activation\":\"tanh\"}]}"),
               Error);
  EXPECT_THROW(ParseModelJson("not json"), Error);
  const auto m = ParseModelJson("{\"layers\":[{\"weights\":[[1,2],[3,4]],\"bias\":[0.5,0],"
                                "\"activation\":\"identity\"}]}");
  EXPECT_EQ(m.layers()[0].weight(1, 0), 3.0);
  EXPECT_EQ(m.layers()[0].bias[0], 0.5);
}

TEST(ForwardTest, ZeroLogitsGiveUniform) {
  const MlpModel m({Layer(3, 2, Activation::kIdentity)});
  const auto r = Forward(m, Matrix(1, 3, {1.0f, -2.0f, 3.0f}));
  EXPECT_FLOAT_EQ(r.probabilities.row(0)[0], 0.5f);
  EXPECT_FLOAT_EQ(r.probabilities.row(0)[1], 0.5f);
}

TEST(ForwardTest, IdentityWeights) {
  auto l = Layer(2, 2, Activation::kIdentity);
  l.weights = {1, 0, 0, 1};
  const auto r = Forward(MlpModel({l}), Matrix(1, 2, {2.0f, 0.0f}));
  EXPECT_NEAR(r.probabilities.row(0)[0], 0.880797, 1e-6);
  EXPECT_NEAR(r.probabilities.row(0)[1], 0.119203, 1e-6);
}

TEST(ForwardTest, ReluClampsAndTraceIsPostActivation) {
  auto hidden = Layer(2, 2, Activation::kRelu);
  hidden.weights = {1, 0, 0, 1};
  auto out = Layer(2, 2, Activation::kIdentity);
  out.weights = {1, 0, 0, 1};
  const auto r = Forward(MlpModel({hidden, out}), Matrix(1, 2, {-3.0f, 1.5f}));
  ASSERT_EQ(r.trace.n_neurons(), 4u);
  EXPECT_EQ(r.trace.row(0)[0], 0.0f);
  EXPECT_EQ(r.trace.row(0)[1], 1.5f);
  EXPECT_NEAR(r.trace.row(0)[2] + r.trace.row(0)[3], 1.0, 1e-6);
  EXPECT_EQ(r.trace.row(0)[2], r.probabilities.row(0)[0]);
  EXPECT_EQ(r.layers.n_layers(), 2u);
  EXPECT_EQ(r.layers.layer(1), (std::vector<std::uint32_t>{2, 3}));
}

TEST(ForwardTest, LargeLogitsStayFinite) {
  auto l = Layer(1, 3, Activation::kIdentity);
  l.weights = {1000, 0, -1000};
  const auto r = Forward(MlpModel({l}), Matrix(1, 1, {5.0f}));
  EXPECT_FLOAT_EQ(r.probabilities.row(0)[0], 1.0f);
  EXPECT_EQ(r.probabilities.row(0)[2], 0.0f);
}

TEST(ForwardTest, InputWidthMismatch) {
  EXPECT_THROW(Forward(MlpModel({Layer(3, 2, Activation::kIdentity)}), Matrix(1, 2)), Error);
}

SynthConfig Small(std::uint64_t seed = 7) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_tests = 400;
  cfg.n_train = 300;
  return cfg;
}

TEST(ForwardTest, RowsSumToOneAndBatchEquivariance) {
  const auto exp = MakeSynthExperiment(Small());
  const auto full = Forward(exp.subject, exp.inputs);
  for (std::size_t i = 0; i < full.probabilities.n_tests(); ++i) {
    const auto row = full.probabilities.row(i);
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-6);
  }
  EXPECT_EQ(full.trace.n_neurons(), 74u);
  // Running a reversed batch gives the reversed rows bit-for-bit.
  const std::size_t n = exp.inputs.rows(), d = exp.inputs.cols();
  Matrix rev(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(exp.inputs.row(n - 1 - i).begin(), d, rev.row(i).begin());
  }
  const auto back = Forward(exp.subject, rev, 4);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = full.trace.row(i), b = back.trace.row(n - 1 - i);
    ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST(SynthTest, DeterministicPerSeed) {
  const auto a = MakeSynthExperiment(Small(3));
  const auto b = MakeSynthExperiment(Small(3));
  EXPECT_EQ(a.subject, b.subject);
  EXPECT_EQ(a.inputs, b.inputs);
  EXPECT_EQ(a.labels, b.labels);
  const auto c = MakeSynthExperiment(Small(4));
  EXPECT_NE(a.inputs, c.inputs);
  EXPECT_EQ(TraceSubject(a).trace.matrix(), TraceSubject(b, 3).trace.matrix());
}

TEST(SynthTest, ZeroNoiseMeansNoMistakes) {
  auto cfg = Small();
  cfg.noise_scale = 0.0;
  const auto exp = MakeSynthExperiment(cfg);
  EXPECT_EQ(exp.teacher, exp.subject);
  const auto t = TraceSubject(exp);
  EXPECT_EQ(ComputeMisclassificationMask(t.probabilities, exp.labels).k, 0u);
}

TEST(SynthTest, ProfileComesFromTrainingTrace) {
  const auto exp = MakeSynthExperiment(Small());
  const auto t = TraceSubject(exp);
  EXPECT_EQ(t.train_trace.n_tests(), 300u);
  EXPECT_EQ(t.profile, ProfileNeurons(t.train_trace));
  EXPECT_EQ(t.layers, LayerMap::FromSizes(std::vector<std::size_t>{32, 32, 10}));
}

TEST(SynthTest, DefaultExperimentGolden) {
  const auto exp = MakeSynthExperiment(SynthConfig{});
  const auto t = TraceSubject(exp, 4);
  const auto mask = ComputeMisclassificationMask(t.probabilities, exp.labels);
  ASSERT_EQ(mask.size(), 5000u);
  const double frac = double(mask.k) / 5000.0;
  EXPECT_GT(frac, 0.01);
  EXPECT_LT(frac, 0.40);
  EXPECT_EQ(mask.k, 1217u);
}

}  // namespace
}  // namespace testprio
