// Copyright 2026 The CompGCN-cpp Authors.
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


#include <cmath>
#include <fstream>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "compgcn/checkpoint.h"
#include "compgcn/gradcheck.h"
#include "compgcn/gradient_suite.h"
#include "compgcn/ops.h"
#include "compgcn/optim.h"
#include "compgcn/random.h"
#include "compgcn/tape.h"
#include "compgcn/tensor.h"
#include "support/test_support.h"

namespace compgcn {
namespace {

using testing::RandomTensor;
using testing::ReferenceCorrelation;

TEST(TensorTest, ShapeAndAccess) {
  Tensor t = Tensor::Matrix({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(t.rows(), 2);
  EXPECT_EQ(t.cols(), 3);
  EXPECT_EQ(t.at(1, 2), 6);
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), ShapeError);
  EXPECT_THROW(t.Reshaped({4}), ShapeError);
  EXPECT_EQ(t.Reshaped({3, 2}).at(2, 1), 6);
}

TEST(MatMulTest, IdentityAndHandExample) {
  Tape tape;
  Rng rng(1);
  Tensor x = RandomTensor({3, 4}, rng);
  EXPECT_EQ(MatMul(tape.Constant(Tensor::Identity(3)), tape.Constant(x)).value(), x);
  Var y = MatMul(tape.Constant(Tensor::Matrix({{1, 2}, {3, 4}})),
                 tape.Constant(Tensor::Matrix({{1}, {1}})));
  EXPECT_EQ(y.value(), Tensor::Matrix({{3}, {7}}));
}

TEST(MatMulTest, MismatchNamesBothShapes) {
  Tape tape;
  try {
    MatMul(tape.Constant(Tensor({2, 3})), tape.Constant(Tensor({4, 5})));
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("[2, 3]"), std::string::npos) << what;
    EXPECT_NE(what.find("[4, 5]"), std::string::npos) << what;
  }
}

TEST(MatMulTest, GradientMatchesFiniteDifferences) {
  Rng rng(2);
  Parameter a("a", RandomTensor({4, 5}, rng));
  Parameter b("b", RandomTensor({5, 3}, rng));
  Tensor w = RandomTensor({4, 3}, rng);
  Parameter* params[] = {&a, &b};
  const auto result = CheckGradients(
      [&](Tape& t) { return Sum(MatMul(t.Leaf(a), t.Leaf(b)) * t.Constant(w)); }, params);
  EXPECT_LT(result.max_relative_error, 1e-6);
}

TEST(ElementwiseTest, Identities) {
  Tape tape;
  Rng rng(3);
  Var a = tape.Constant(RandomTensor({3, 2}, rng));
  EXPECT_EQ((a - a).value(), Tensor({3, 2}));
  EXPECT_EQ((a * tape.Constant(Tensor({3, 2}, 1.0))).value(), a.value());
  EXPECT_THROW(a + tape.Constant(Tensor({2, 3})), ShapeError);
}

TEST(ElementwiseTest, GradientsIncludingScalarOperand) {
  Rng rng(4);
  for (ElementwiseOp op : {ElementwiseOp::kAdd, ElementwiseOp::kSub, ElementwiseOp::kMul}) {
    Parameter a("a", RandomTensor({3, 4}, rng));
    Parameter b("b", RandomTensor({3, 4}, rng));
    Parameter s("s", RandomTensor({1}, rng));
    Tensor w = RandomTensor({3, 4}, rng);
    Parameter* params[] = {&a, &b, &s};
    const auto result = CheckGradients(
        [&](Tape& t) {
          Var x = Elementwise(op, t.Leaf(a), t.Leaf(b));
          return Sum(Elementwise(op, x, t.Leaf(s)) * t.Constant(w));
        },
        params);
    EXPECT_LT(result.max_relative_error, 1e-6);
  }
}

TEST(CircularCorrelationTest, HandExample) {
  Tape tape;
  Var out = CircularCorrelation(tape.Constant(Tensor::Vector({1, 2})),
                                tape.Constant(Tensor::Vector({3, 4})));
  EXPECT_EQ(out.value(), Tensor::Vector({11, 10}));
}

TEST(CircularCorrelationTest, UnitVectorSelectsOther) {
  Rng rng(5);
  for (int64_t d = 1; d <= 16; ++d) {
    Tensor e0({d});
    e0[0] = 1.0;
    Tensor b = RandomTensor({d}, rng);
    Tape tape;
    EXPECT_EQ(CircularCorrelation(tape.Constant(e0), tape.Constant(b)).value(), b);
  }
}

TEST(CircularCorrelationTest, MatchesDefinitionExactly) {
  Rng rng(6);
  for (int64_t d = 1; d <= 64; ++d) {
    Tensor a = RandomTensor({d}, rng), b = RandomTensor({d}, rng);
    std::vector<double> out(d);
    CircularCorrelate(a.data(), b.data(), out);
    EXPECT_EQ(out, ReferenceCorrelation(a.data(), b.data())) << "d=" << d;
  }
}

TEST(CircularCorrelationTest, RowwiseGradient) {
  Rng rng(7);
  Parameter a("a", RandomTensor({3, 16}, rng));
  Parameter b("b", RandomTensor({3, 16}, rng));
  Tensor w = RandomTensor({3, 16}, rng);
  Parameter* params[] = {&a, &b};
  const auto result = CheckGradients(
      [&](Tape& t) { return Sum(CircularCorrelation(t.Leaf(a), t.Leaf(b)) * t.Constant(w)); },
      params);
  EXPECT_LT(result.max_relative_error, 1e-6);
}

TEST(ActivationTest, Values) {
  Tape tape;
  EXPECT_EQ(Activate(Activation::kTanh, tape.Constant(Tensor::Scalar(0))).value().item(), 0.0);
  EXPECT_EQ(Activate(Activation::kRelu, tape.Constant(Tensor::Scalar(-1))).value().item(), 0.0);
  EXPECT_EQ(Activate(Activation::kIdentity, tape.Constant(Tensor::Scalar(-1))).value().item(), -1);
  EXPECT_EQ(ParseActivation("tanh"), Activation::kTanh);
  EXPECT_THROW(ParseActivation("gelu"), std::invalid_argument);
}

TEST(DropoutTest, IdentityCases) {
  Rng rng(8);
  Tape tape;
  Var x = tape.Constant(RandomTensor({10, 10}, rng));
  EXPECT_EQ(Dropout(x, 0.0, rng, true).value(), x.value());
  EXPECT_EQ(Dropout(x, 0.7, rng, false).value(), x.value());
  EXPECT_THROW(Dropout(x, 1.0, rng, true), std::invalid_argument);
  EXPECT_THROW(Dropout(x, -0.1, rng, true), std::invalid_argument);
}

TEST(DropoutTest, SurvivorFractionAndScale) {
  Rng rng(9);
  Tape tape;
  Var x = tape.Constant(Tensor({100000}, 1.0));
  const Tensor y = Dropout(x, 0.5, rng, true).value();
  int64_t survivors = 0;
  for (double v : y.data()) {
    if (v != 0.0) {
      ++survivors;
      EXPECT_EQ(v, 2.0);
    }
  }
  EXPECT_NEAR(static_cast<double>(survivors) / 100000.0, 0.5, 0.01);
}

TEST(BceTest, HandValues) {
  Tape tape;
  Var loss = BceWithLabelSmoothing(tape.Constant(Tensor::Vector({0})), Tensor::Vector({1}), 0.0);
  EXPECT_NEAR(loss.value().item(), std::log(2.0), 1e-15);

  Tensor onehot({10});
  onehot[3] = 1.0;
  const Tensor smoothed = SmoothLabels(onehot, 0.1);
  EXPECT_NEAR(smoothed[3], 0.91, 1e-15);
  EXPECT_NEAR(smoothed[0], 0.01, 1e-15);
}

TEST(BceTest, MatchesNaiveFormulaAndIsStable) {
  Rng rng(10);
  Tensor logits = RandomTensor({4, 6}, rng, -5, 5);
  Tensor targets({4, 6});
  for (double& y : targets.storage()) y = UniformUnit(rng) < 0.4 ? 1 : 0;
  const Tensor y = SmoothLabels(targets, 0.1);
  double naive = 0.0;
  for (int64_t i = 0; i < logits.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-logits[i]));
    naive -= y[i] * std::log(p) + (1 - y[i]) * std::log(1 - p);
  }
  naive /= static_cast<double>(logits.size());
  Tape tape;
  EXPECT_NEAR(BceWithLabelSmoothing(tape.Constant(logits), targets, 0.1).value().item(), naive,
              1e-12);

  Var huge = tape.Constant(Tensor::Vector({1000, -1000}));
  EXPECT_TRUE(std::isfinite(
      BceWithLabelSmoothing(huge, Tensor::Vector({0, 1}), 0.0).value().item()));
  Var bad = tape.Constant(Tensor::Vector({NAN, 0}));
  EXPECT_THROW(BceWithLabelSmoothing(bad, Tensor::Vector({0, 1}), 0.0), NumericError);
}

TEST(BceTest, Gradient) {
  Rng rng(11);
  Parameter logits("logits", RandomTensor({3, 5}, rng, -2, 2));
  Tensor targets({3, 5});
  for (double& y : targets.storage()) y = UniformUnit(rng) < 0.4 ? 1 : 0;
  Parameter* params[] = {&logits};
  const auto result = CheckGradients(
      [&](Tape& t) { return BceWithLabelSmoothing(t.Leaf(logits), targets, 0.1); }, params);
  EXPECT_LT(result.max_relative_error, 1e-5);
}

TEST(SoftmaxCrossEntropyTest, ValuesAndGradient) {
  Tape tape;
  const std::vector<int32_t> labels = {2, 0};
  EXPECT_NEAR(SoftmaxCrossEntropy(tape.Constant(Tensor({2, 5})), labels).value().item(),
              std::log(5.0), 1e-15);
  Tensor confident({2, 5});
  confident.at(0, 2) = 800;
  confident.at(1, 0) = 800;
  EXPECT_NEAR(SoftmaxCrossEntropy(tape.Constant(confident), labels).value().item(), 0.0, 1e-12);

  Rng rng(12);
  Parameter logits("logits", RandomTensor({2, 5}, rng, -2, 2));
  Parameter* params[] = {&logits};
  const auto result = CheckGradients(
      [&](Tape& t) { return SoftmaxCrossEntropy(t.Leaf(logits), labels); }, params);
  EXPECT_LT(result.max_relative_error, 1e-5);
}

TEST(TapeTest, SimpleGradients) {
  Rng rng(13);
  Parameter x("x", RandomTensor({4}, rng));
  {
    Tape tape;
    tape.Backward(Sum(tape.Leaf(x)));
    EXPECT_EQ(x.grad, Tensor({4}, 1.0));
  }
  x.ZeroGrad();
  {
    Tape tape;
    Var v = tape.Leaf(x);
    tape.Backward(Sum(v * v));
    for (int64_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(x.grad[i], 2 * x.value[i]);
  }
}

TEST(TapeTest, BackwardTwiceDoublesGradients) {
  Rng rng(14);
  Parameter x("x", RandomTensor({3}, rng));
  Tape tape;
  Var v = tape.Leaf(x);
  Var loss = Sum(v * v);
  tape.Backward(loss);
  const Tensor once = x.grad;
  tape.Backward(loss);
  for (int64_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(x.grad[i], 2 * once[i]);
}

TEST(TapeTest, NonScalarLossRejected) {
  Tape tape;
  Var v = tape.Constant(Tensor({2}));
  EXPECT_THROW(tape.Backward(v), ShapeError);
}

TEST(GradientSuiteTest, AllOpsWithinTolerance) {
  const GradCheckResult result = RunOpGradientSuite(/*seed=*/3, /*trials=*/5);
  for (const auto& e : result.entries) EXPECT_LT(e.relative_error, 1e-4) << e.name;
}

TEST(AdamTest, ZeroGradientKeepsParameters) {
  Parameter w("w", Tensor::Vector({1, -2}));
  Adam adam({&w}, {.lr = 0.1});
  adam.Step();
  EXPECT_EQ(w.value, Tensor::Vector({1, -2}));
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  Parameter w("w", Tensor::Vector({1, -2}));
  w.grad = Tensor::Vector({3, -0.5});
  Adam adam({&w}, {.lr = 0.01});
  adam.Step();
  EXPECT_NEAR(w.value[0], 1 - 0.01, 1e-9);
  EXPECT_NEAR(w.value[1], -2 + 0.01, 1e-9);
  EXPECT_NEAR(adam.first_moment(0)[0], 0.3, 1e-15);
}

TEST(AdamTest, MinimizesQuadratic) {
  Parameter w("w", Tensor::Vector({1, 1}));
  Adam adam({&w}, {.lr = 0.1});
  for (int step = 0; step < 200; ++step) {
    Tape tape;
    Var v = tape.Leaf(w);
    tape.Backward(Sum(v * v));
    adam.Step();
    adam.ZeroGrad();
  }
  EXPECT_LT(std::hypot(w.value[0], w.value[1]), 1e-2);
}

TEST(AdamTest, SkipsFrozenParameters) {
  Parameter w("w", Tensor::Vector({1}), /*trainable=*/false);
  w.grad = Tensor::Vector({1});
  Adam adam({&w}, {.lr = 0.1});
  adam.Step();
  EXPECT_EQ(w.value[0], 1.0);
}

TEST(XavierTest, BoundsDeterminismAndVariance) {
  Rng a(15), b(15);
  const Tensor x = XavierUniform({100, 100}, a);
  EXPECT_EQ(x, XavierUniform({100, 100}, b));
  const double bound = std::sqrt(6.0 / 200.0);
  for (double v : x.data()) EXPECT_LE(std::abs(v), bound);

  Rng c(16);
  const Tensor big = XavierUniform({200, 500}, c);
  double mean = std::accumulate(big.data().begin(), big.data().end(), 0.0) / big.size();
  double var = 0.0;
  for (double v : big.data()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(big.size());
  EXPECT_NEAR(var, 2.0 / 700.0, 0.1 * 2.0 / 700.0);
  EXPECT_THROW(XavierUniform({3}, c), ShapeError);
}

TEST(CheckpointTest, RoundTripIsExact) {
  Rng rng(17);
  Parameter a("a", RandomTensor({3, 4}, rng)), b("b", RandomTensor({5}, rng));
  const Parameter* params[] = {&a, &b};
  const auto path = testing::TempDir("ckpt") / "x.ckpt";
  SaveCheckpoint(path, params, {{"note", "hi"}});
  const CheckpointData data = LoadCheckpoint(path);
  EXPECT_EQ(data.metadata.at("note"), "hi");
  EXPECT_EQ(data.arrays.at("a"), a.value);
  EXPECT_EQ(data.arrays.at("b"), b.value);

  Parameter a2("a", Tensor({3, 4})), b2("b", Tensor({5}));
  Parameter* restore[] = {&a2, &b2};
  RestoreParameters(data, restore);
  EXPECT_EQ(a2.value, a.value);
  Parameter wrong("a", Tensor({4, 3}));
  Parameter* bad[] = {&wrong};
  EXPECT_THROW(RestoreParameters(data, bad), CheckpointError);
}

TEST(CheckpointTest, RejectsCorruptFiles) {
  const auto dir = testing::TempDir("ckpt_bad");
  {
    std::ofstream out(dir / "bad.ckpt", std::ios::binary);
    out << "NOTACKPT";
  }
  EXPECT_THROW(LoadCheckpoint(dir / "bad.ckpt"), CheckpointError);
  EXPECT_THROW(LoadCheckpoint(dir / "missing.ckpt"), CheckpointError);
}

TEST(RandomTest, UniformIndexInRangeAndDeterministic) {
  Rng a(18), b(18);
  for (int i = 0; i < 1000; ++i) {
    const uint64_t x = UniformIndex(a, 7);
    EXPECT_LT(x, 7u);
    EXPECT_EQ(x, UniformIndex(b, 7));
  }
}

}  // namespace
}  // namespace compgcn
