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

// Line-drawing views of upright meshes. Two viewpoints are fixed for a
// whole dataset; each model is drawn from both with silhouette, boundary
// and crease edges (dihedral > 40 deg) under hidden-line removal. This is
// a stand-in for curvature-based suggestive contours.

#ifndef SBSR_RENDER_H_
#define SBSR_RENDER_H_

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "sbsr/image.h"
#include "sbsr/mesh.h"

namespace sbsr {

inline constexpr double kMinElevationDeg = 15.0;
inline constexpr double kMaxElevationDeg = 45.0;
inline constexpr double kMinSeparationDeg = 45.0;
inline constexpr double kCreaseAngleDeg = 40.0;
inline constexpr double kDepthEpsilon = 1e-3;

// Camera on the unit sphere; azimuth about +Y measured from +Z, elevation
// above the XZ plane.
struct Viewpoint {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;

  // Unit vector from the origin toward the camera.
  Eigen::Vector3d direction() const;
  bool in_upright_band() const;
};

double angular_separation_deg(const Viewpoint& a, const Viewpoint& b);

struct ViewPairConfig {
  Viewpoint v1;
  Viewpoint v2;
  std::uint64_t seed = 0;
};

// Rejection-samples two viewpoints in the upright band separated by more
// than 45 deg. Deterministic in `seed`.
ViewPairConfig pick_viewpoints(std::uint64_t seed);

struct ProjectedVertex {
  double x = 0.0;      // canvas columns
  double y = 0.0;      // canvas rows, growing downward
  double depth = 0.0;  // distance along the view ray; smaller is nearer
};

// Orthographic projection. The origin maps to the canvas center and the
// scale fits every vertex into the central 90% of the canvas.
std::vector<ProjectedVertex> project(const Mesh& mesh, const Viewpoint& view,
                                     std::size_t size = 100);

enum EdgeKind : std::uint8_t {
  kSilhouetteEdge = 1,
  kBoundaryEdge = 2,
  kCreaseEdge = 4,
};

struct FeatureEdge {
  std::uint32_t a = 0;  // a < b
  std::uint32_t b = 0;
  std::uint8_t kinds = 0;

  friend bool operator==(const FeatureEdge&, const FeatureEdge&) = default;
};

// Edges to be drawn from `view`, sorted by (a, b).
std::vector<FeatureEdge> feature_edges(const Mesh& mesh, const Viewpoint& view);

// Binary line drawing (ink = 1) of the visible feature edges.
GrayImage render_lines(const Mesh& mesh, const Viewpoint& view,
                       std::size_t size = 100);

}  // namespace sbsr

#endif  // SBSR_RENDER_H_
