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

#include <random>

#include "sbsr/loss.h"
#include "support/generators.h"
#include "support/oracles.h"

namespace sbsr {
namespace {

using testing_support::random_vector;

TEST(Contrastive, ConstantsFromMarginParameters) {
  EXPECT_DOUBLE_EQ(LossConstants::kAlpha, 5.0);
  EXPECT_DOUBLE_EQ(LossConstants::kBeta, 10.0);
  EXPECT_DOUBLE_EQ(LossConstants::kGamma, -0.277);
}

TEST(Contrastive, Identities) {
  const std::vector<double> f{0.3, -1.2, 4.0};
  EXPECT_NEAR(contrastive_loss<double>(f, f, PairLabel::kSimilar).loss, 0.0, 1e-12);
  EXPECT_NEAR(contrastive_loss<double>(f, f, PairLabel::kDissimilar).loss, 10.0, 1e-12);
  const std::vector<double> g{1.3, -1.2, 5.0};  // D = 2
  const auto r = contrastive_loss<double>(f, g, PairLabel::kSimilar);
  EXPECT_NEAR(r.distance, 2.0, 1e-12);
  EXPECT_NEAR(r.loss, 20.0, 1e-12);
}

TEST(Contrastive, MatchesDefinitionOnRandomPairs) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_vector(64, rng), b = random_vector(64, rng);
    for (int y : {0, 1}) {
      const auto r = contrastive_loss<double>(a, b, static_cast<PairLabel>(y));
      EXPECT_NEAR(r.loss, oracle::contrastive(a, b, y), 1e-10 * (1 + r.loss));
    }
  }
}

TEST(Contrastive, FiniteDifferences) {
  std::mt19937_64 rng(22);
  for (int y : {0, 1}) {
    auto a = random_vector(64, rng), b = random_vector(64, rng);
    const auto r = contrastive_loss<double>(a, b, static_cast<PairLabel>(y));
    const auto f = [&] { return oracle::contrastive(a, b, y); };
    for (std::size_t i = 0; i < 64; ++i) {
      EXPECT_LT(oracle::relative_error(r.grad_a[i], oracle::central_difference(f, a[i], 1e-6)), 1e-6);
      EXPECT_LT(oracle::relative_error(r.grad_b[i], oracle::central_difference(f, b[i], 1e-6)), 1e-6);
    }
  }
}

TEST(Contrastive, ZeroDifferenceHasZeroSubgradient) {
  const std::vector<double> a{1.0, 2.0}, b{1.0, 3.0};
  const auto r = contrastive_loss<double>(a, b, PairLabel::kDissimilar);
  EXPECT_EQ(r.grad_a[0], 0.0);
  EXPECT_EQ(r.grad_b[0], 0.0);
  EXPECT_NE(r.grad_a[1], 0.0);
}

TEST(Contrastive, RejectsLengthMismatch) {
  const std::vector<double> a(3), b(4);
  EXPECT_THROW(contrastive_loss<double>(a, b, PairLabel::kSimilar), std::invalid_argument);
}

TEST(Combined, ThreeTermsByDefault) {
  const auto terms = loss_terms({});
  ASSERT_EQ(terms.size(), 3u);
  EXPECT_EQ(terms[0].a, Branch::kSketch1);
  EXPECT_EQ(terms[0].b, Branch::kSketch2);
  EXPECT_EQ(terms[1].a, Branch::kView1);
  EXPECT_EQ(terms[1].b, Branch::kView2);
  EXPECT_EQ(terms[2].a, Branch::kSketch1);
  EXPECT_EQ(terms[2].b, Branch::kView1);
  EXPECT_EQ(loss_terms({true}).size(), 4u);
}

TEST(Combined, AllEqualDissimilarIsThirty) {
  const std::vector<double> f(64, 0.25);
  EXPECT_NEAR(combined_loss<double>(f, f, f, f, PairLabel::kDissimilar).loss, 30.0, 1e-12);
  EXPECT_NEAR(combined_loss<double>(f, f, f, f, PairLabel::kDissimilar, {true}).loss, 40.0, 1e-12);
  EXPECT_NEAR(combined_loss<double>(f, f, f, f, PairLabel::kSimilar).loss, 0.0, 1e-12);
}

TEST(Combined, FiniteDifferencesPerBranch) {
  std::mt19937_64 rng(23);
  for (bool symmetric : {false, true}) {
    for (int y : {0, 1}) {
      std::array<std::vector<double>, 4> f;
      for (auto& v : f) v = random_vector(64, rng, -0.3, 0.3);
      const auto r = combined_loss<double>(f[0], f[1], f[2], f[3], static_cast<PairLabel>(y),
                                           {symmetric});
      const auto total = [&] {
        double s = oracle::contrastive(f[0], f[1], y) + oracle::contrastive(f[2], f[3], y) +
                   oracle::contrastive(f[0], f[2], y);
        if (symmetric) s += oracle::contrastive(f[1], f[3], y);
        return s;
      };
      EXPECT_NEAR(r.loss, total(), 1e-10 * (1 + r.loss));
      for (std::size_t branch = 0; branch < 4; ++branch) {
        for (std::size_t i = 0; i < 64; i += 3) {
          EXPECT_LT(oracle::relative_error(r.grads[branch][i],
                                           oracle::central_difference(total, f[branch][i], 1e-6)),
                    1e-6);
        }
      }
    }
  }
}

}  // namespace
}  // namespace sbsr
