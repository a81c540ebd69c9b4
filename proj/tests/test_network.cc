/*
 * Copyright 2026 The SBSR Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sbsr/errors.h"
#include "sbsr/network.h"
#include "support/generators.h"
#include "support/oracles.h"

namespace sbsr {
namespace {

using testing_support::random_tensor;

TEST(Network, IntermediateShapesFollowArchitecture) {
  std::mt19937_64 rng(1);
  const auto params = NetworkParams<float>::initialized(3);
  ForwardTrace<float> trace;
  const Tensor out = net_forward(params, random_tensor<float>({1, 100, 100}, rng, 0, 1), &trace);
  EXPECT_TRUE(trace.valid);
  EXPECT_EQ(trace.activated[0].shape(), (Shape{32, 88, 88}));
  EXPECT_EQ(trace.pooled[0].shape(), (Shape{32, 22, 22}));
  EXPECT_EQ(trace.pooled[1].shape(), (Shape{64, 8, 8}));
  EXPECT_EQ(trace.pooled[2].shape(), (Shape{256, 3, 3}));
  EXPECT_EQ(out.shape(), (Shape{64}));
}

TEST(Network, ParameterCount) {
  const std::size_t expected = (32 * 169 + 32) + (64 * 32 * 49 + 64) +
                               (256 * 64 * 9 + 256) + (64 * 2304 + 64);
  EXPECT_EQ(NetworkParams<float>::zeros().parameter_count(), expected);
}

TEST(Network, GlorotInitializationBoundsAndZeroBias) {
  const auto p = NetworkParams<double>::initialized(5);
  const double fans[4][2] = {{169, 32 * 169}, {32 * 49, 64 * 49}, {64 * 9, 256 * 9}, {2304, 64}};
  for (std::size_t i = 0; i < 3; ++i) {
    const double a = std::sqrt(6.0 / (fans[i][0] + fans[i][1]));
    double max_abs = 0;
    for (double w : p.conv[i].kernels.data()) max_abs = std::max(max_abs, std::abs(w));
    EXPECT_LE(max_abs, a);
    EXPECT_GT(max_abs, 0.9 * a);  // the range is actually used
    for (double b : p.conv[i].bias.data()) EXPECT_EQ(b, 0.0);
  }
  const double a = std::sqrt(6.0 / (fans[3][0] + fans[3][1]));
  for (double w : p.linear.weights.data()) EXPECT_LE(std::abs(w), a);
}

TEST(Network, InitializationIsSeeded) {
  EXPECT_EQ(NetworkParams<float>::initialized(9), NetworkParams<float>::initialized(9));
  EXPECT_FALSE(NetworkParams<float>::initialized(9) == NetworkParams<float>::initialized(10));
}

TEST(Network, RejectsBadInputs) {
  const auto p = NetworkParams<float>::zeros();
  EXPECT_THROW(net_forward(p, Tensor({1, 99, 100})), std::invalid_argument);
  EXPECT_THROW(net_forward(p, Tensor({1, 100, 100}, 1.5f)), std::invalid_argument);
}

TEST(Network, BackwardNeedsATrace) {
  const auto p = NetworkParams<float>::zeros();
  auto g = NetworkParams<float>::zeros();
  const std::vector<float> up(64, 1.0f);
  EXPECT_THROW(net_backward<float>(p, ForwardTrace<float>{}, up, g), std::logic_error);
}

TEST(Network, SinglePrecisionTracksDoubleMirror) {
  std::mt19937_64 rng(2);
  const auto pf = NetworkParams<float>::initialized(4);
  const auto pd = pf.cast<double>();
  const Tensor img = random_tensor<float>({1, 100, 100}, rng, 0, 1);
  const Tensor f = net_forward(pf, img);
  const TensorD d = net_forward(pd, img.cast<double>());
  for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(f[i], d[i], 1e-4 * (1 + std::abs(d[i])));
}

// Central differences through the whole network in double precision.
TEST(Network, FiniteDifferencesEndToEnd) {
  std::mt19937_64 rng(3);
  auto params = NetworkParams<double>::initialized(6);
  // Nonzero biases so every parameter kind is exercised away from zero.
  for (auto& st : params.conv) st.bias = random_tensor<double>(st.bias.shape(), rng, 0, 0.05);
  TensorD img = random_tensor<double>({1, 100, 100}, rng, 0.05, 0.95);
  const std::vector<double> up = testing_support::random_vector(64, rng);

  ForwardTrace<double> trace;
  net_forward(params, img, &trace);
  auto grads = NetworkParams<double>::zeros();
  TensorD img_grad;
  net_backward<double>(params, trace, up, grads, &img_grad);

  const auto f = [&] {
    const TensorD out = net_forward(params, img);
    double s = 0;
    for (std::size_t i = 0; i < 64; ++i) s += out[i] * up[i];
    return s;
  };
  std::vector<std::pair<TensorD*, TensorD*>> tensors;
  for (std::size_t i = 0; i < 3; ++i) {
    tensors.push_back({&params.conv[i].kernels, &grads.conv[i].kernels});
    tensors.push_back({&params.conv[i].bias, &grads.conv[i].bias});
  }
  tensors.push_back({&params.linear.weights, &grads.linear.weights});
  tensors.push_back({&params.linear.bias, &grads.linear.bias});
  tensors.push_back({&img, &img_grad});

  int checked = 0;
  for (auto [value, grad] : tensors) {
    std::uniform_int_distribution<std::size_t> pick(0, value->size() - 1);
    for (int k = 0; k < 8; ++k) {
      const std::size_t i = pick(rng);
      const double numeric = oracle::central_difference(f, (*value)[i], 1e-6);
      // Coordinates with no path to the output have zero gradient both ways.
      if (std::abs(numeric) < 1e-9 && std::abs((*grad)[i]) < 1e-9) continue;
      EXPECT_LT(oracle::relative_error((*grad)[i], numeric), 1e-4)
          << "tensor size " << value->size() << " index " << i;
      ++checked;
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(Sgd, StepsAgainstGradient) {
  auto p = NetworkParams<float>::initialized(1);
  const auto before = p;
  auto g = NetworkParams<float>::zeros();
  g.linear.bias[3] = 2.0f;
  sgd_step(p, g, 0.25f);
  EXPECT_FLOAT_EQ(p.linear.bias[3], before.linear.bias[3] - 0.5f);
  EXPECT_EQ(p.conv[0].kernels, before.conv[0].kernels);
}

TEST(Sgd, RejectsNonFiniteGradientWithoutTouchingParams) {
  auto p = NetworkParams<float>::initialized(1);
  const auto before = p;
  auto g = NetworkParams<float>::zeros();
  g.conv[1].kernels[7] = std::nanf("");
  EXPECT_THROW(sgd_step(p, g, 0.1f), NonFiniteError);
  EXPECT_EQ(p, before);
  EXPECT_THROW(sgd_step(p, NetworkParams<float>::zeros(), 0.0f), std::invalid_argument);
}

}  // namespace
}  // namespace sbsr
