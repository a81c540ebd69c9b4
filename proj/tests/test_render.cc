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

#include <algorithm>

#include "sbsr/primitives.h"
#include "sbsr/render.h"
#include "support/oracles.h"

namespace sbsr {
namespace {

std::vector<float> pixels(const GrayImage& img) { return img.pixels; }

TEST(Viewpoints, DeterministicInSeed) {
  const ViewPairConfig a = pick_viewpoints(42), b = pick_viewpoints(42);
  EXPECT_EQ(a.v1.azimuth_deg, b.v1.azimuth_deg);
  EXPECT_EQ(a.v2.elevation_deg, b.v2.elevation_deg);
  EXPECT_NE(pick_viewpoints(43).v1.azimuth_deg, a.v1.azimuth_deg);
}

TEST(Viewpoints, AlwaysUprightAndSeparated) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const ViewPairConfig c = pick_viewpoints(seed);
    ASSERT_TRUE(c.v1.in_upright_band());
    ASSERT_TRUE(c.v2.in_upright_band());
    ASSERT_GT(angular_separation_deg(c.v1, c.v2), kMinSeparationDeg);
  }
}

TEST(Viewpoints, SeparationMatchesSphericalGeometry) {
  EXPECT_NEAR(angular_separation_deg({0, 30}, {90, 30}), 75.5225, 1e-3);
  EXPECT_NEAR(angular_separation_deg({10, 20}, {10, 20}), 0.0, 1e-6);
  EXPECT_NEAR(angular_separation_deg({0, 0}, {180, 0}), 180.0, 1e-6);
  const Eigen::Vector3d d = Viewpoint{90, 0}.direction();
  EXPECT_NEAR(d.x(), 1.0, 1e-12);
}

TEST(Projection, AxisPointLandsAtCenterAndDepthOrders) {
  const Viewpoint view{30, 20};
  Mesh m;
  m.vertices = {0.4 * view.direction(), -0.4 * view.direction(),
                Eigen::Vector3d(0.5, 0.5, 0.5)};
  const auto pv = project(m, view, 100);
  EXPECT_NEAR(pv[0].x, 50.0, 1e-9);
  EXPECT_NEAR(pv[0].y, 50.0, 1e-9);
  EXPECT_LT(pv[0].depth, pv[1].depth);
  for (const auto& p : pv) {
    EXPECT_GE(p.x, 5.0 - 1e-9);
    EXPECT_LE(p.x, 95.0 + 1e-9);
  }
}

TEST(Projection, UpIsUpOnCanvas) {
  Mesh m;
  m.vertices = {{0, 0.5, 0}, {0, -0.5, 0}};
  const auto pv = project(m, {0, 20}, 100);
  EXPECT_LT(pv[0].y, pv[1].y);
}

TEST(Render, CubeFrontViewIsASquareOutline) {
  const GrayImage img = render_lines(make_cube(), {0, 0}, 100);
  ASSERT_EQ(img.width, 100u);
  ASSERT_EQ(img.height, 100u);
  for (float v : img.pixels) EXPECT_TRUE(v == 0.0f || v == 1.0f);
  EXPECT_GE(img.ink_count(), 300u);
  EXPECT_LE(img.ink_count(), 420u);
  // No triangle diagonals: the interior stays blank.
  for (std::size_t y = 10; y < 90; ++y)
    for (std::size_t x = 10; x < 90; ++x) ASSERT_EQ(img.at(x, y), 0.0f) << x << "," << y;
}

TEST(Render, SphereOutlineIsClosed) {
  const GrayImage img = render_lines(make_icosphere(3), {25, 30}, 100);
  const auto px = pixels(img);
  EXPECT_EQ(oracle::components(px, 100, 100, 1.0f, true), 1);
  EXPECT_EQ(oracle::components(px, 100, 100, 0.0f, false), 2);
}

TEST(Render, SilhouettesIgnoreWindingOrientation) {
  Mesh m = make_torus(32, 12);
  const Viewpoint view{40, 25};
  const auto before = feature_edges(m, view);
  for (Face& f : m.faces) std::swap(f[1], f[2]);
  EXPECT_EQ(feature_edges(m, view), before);
  EXPECT_EQ(render_lines(m, view), render_lines(make_torus(32, 12), view));
}

TEST(Render, CubeCreasesAndOpenBoundary) {
  const auto edges = feature_edges(make_cube(), {30, 30});
  std::size_t creases = 0;
  for (const auto& e : edges) creases += (e.kinds & kCreaseEdge) != 0;
  EXPECT_EQ(creases, 12u);

  Mesh tri;
  tri.vertices = {{0, 0, 0}, {0.5, 0, 0}, {0, 0.5, 0}};
  tri.faces = {{0, 1, 2}};
  const auto open = feature_edges(tri, {0, 20});
  ASSERT_EQ(open.size(), 3u);
  for (const auto& e : open) EXPECT_EQ(e.kinds, kBoundaryEdge);
}

TEST(Render, HiddenEdgesAreRemoved) {
  // Seen head-on, the back square of the cube hides behind the front face;
  // from an oblique view only some back edges show. Drawing every edge
  // would give more ink than the visible set.
  const Mesh cube = make_cube();
  const Viewpoint view{30, 30};
  const GrayImage img = render_lines(cube, view);
  const auto pv = project(cube, view);
  // The vertex farthest from the camera is hidden: its pixel is blank.
  std::size_t far = 0;
  for (std::size_t i = 1; i < pv.size(); ++i)
    if (pv[i].depth > pv[far].depth) far = i;
  const auto x = static_cast<std::size_t>(pv[far].x);
  const auto y = static_cast<std::size_t>(pv[far].y);
  EXPECT_EQ(img.at(x, y), 0.0f);
  std::size_t near = 0;
  for (std::size_t i = 1; i < pv.size(); ++i)
    if (pv[i].depth < pv[near].depth) near = i;
  EXPECT_EQ(img.at(static_cast<std::size_t>(pv[near].x), static_cast<std::size_t>(pv[near].y)),
            1.0f);
}

TEST(Render, EveryPrimitiveDrawsTwoDistinctViews) {
  const ViewPairConfig views = pick_viewpoints(7);
  for (const NamedMesh& nm : toy_primitives()) {
    const GrayImage a = render_lines(nm.mesh, views.v1);
    const GrayImage b = render_lines(nm.mesh, views.v2);
    EXPECT_GT(a.ink_count(), 50u) << nm.name;
    EXPECT_GT(b.ink_count(), 50u) << nm.name;
    EXPECT_EQ(a, render_lines(nm.mesh, views.v1)) << nm.name;
    if (nm.name != "icosphere") EXPECT_NE(a, b) << nm.name;
  }
}

}  // namespace
}  // namespace sbsr
