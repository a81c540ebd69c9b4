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
#include "sbsr/pca.h"

namespace sbsr {
namespace {

TEST(Pca, RecoversDominantAxis) {
  // Points spread along feature axis 3, a little along axis 7.
  FeatureIndex index;
  std::mt19937_64 rng(1);
  std::normal_distribution<float> n(0.0f, 1.0f);
  for (int i = 0; i < 200; ++i) {
    Feature f{};
    f[3] = 10.0f * n(rng);
    f[7] = 2.0f * n(rng);
    f[11] = 0.1f * n(rng);
    index.entries.push_back({"e" + std::to_string(i), "c", Domain::kSketch, {}, f});
  }
  const Projection2d p = pca_2d(index);
  ASSERT_EQ(p.points.size(), 200u);
  EXPECT_GT(p.eigenvalues[0], p.eigenvalues[1]);
  EXPECT_NEAR(p.eigenvalues[0] / 100.0, 1.0, 0.25);
  EXPECT_NEAR(p.eigenvalues[1] / 4.0, 1.0, 0.25);
  // x follows feature 3 with a positive sign.
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    const double f = index.entries[i].feature[3];
    sxy += p.points[i].x * f;
    sxx += p.points[i].x * p.points[i].x;
    syy += f * f;
  }
  EXPECT_GT(sxy / std::sqrt(sxx * syy), 0.99);
}

TEST(Pca, ProjectionIsCenteredAndCarriesLabels) {
  FeatureIndex index;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<float> u(-1, 1);
  for (int i = 0; i < 30; ++i) {
    Feature f;
    for (float& v : f) v = u(rng);
    index.entries.push_back({"e" + std::to_string(i), i % 2 ? "a" : "b",
                             i % 3 ? Domain::kView : Domain::kSketch,
                             i % 3 ? std::optional<std::string>("m") : std::nullopt, f});
  }
  const Projection2d p = pca_2d(index);
  double sx = 0, sy = 0, var_x = 0;
  for (const auto& pt : p.points) {
    sx += pt.x;
    sy += pt.y;
    var_x += pt.x * pt.x;
  }
  EXPECT_NEAR(sx, 0.0, 1e-6);
  EXPECT_NEAR(sy, 0.0, 1e-6);
  EXPECT_NEAR(var_x / 30.0, p.eigenvalues[0], 1e-6);
  EXPECT_EQ(p.points[1].class_label, "a");
  EXPECT_EQ(p.points[1].domain, Domain::kView);
  EXPECT_EQ(p.points[3].id, "e3");
}

TEST(Pca, NeedsThreePoints) {
  FeatureIndex index;
  index.entries.resize(2);
  EXPECT_THROW(pca_2d(index), InputError);
}

}  // namespace
}  // namespace sbsr
