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

#include "sbsr/render.h"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sbsr/errors.h"

namespace sbsr {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr int kMaxViewpointDraws = 10000;
constexpr double kVertexExemptionPx = 1.5;

struct CameraFrame {
  Eigen::Vector3d toward_camera;
  Eigen::Vector3d right;
  Eigen::Vector3d up;
};

CameraFrame camera_frame(const Viewpoint& view) {
  CameraFrame f;
  f.toward_camera = view.direction();
  Eigen::Vector3d right = Eigen::Vector3d::UnitY().cross(f.toward_camera);
  if (right.norm() < 1e-12) right = Eigen::Vector3d::UnitX();
  f.right = right.normalized();
  f.up = f.toward_camera.cross(f.right);
  return f;
}

// depth(x, y) = a x + b y + c over a projected triangle.
struct DepthPlane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double at(double x, double y) const { return a * x + b * y + c; }
};

}  // namespace

Eigen::Vector3d Viewpoint::direction() const {
  const double az = azimuth_deg * kDegToRad;
  const double el = elevation_deg * kDegToRad;
  return {std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az)};
}

bool Viewpoint::in_upright_band() const {
  return elevation_deg >= kMinElevationDeg && elevation_deg <= kMaxElevationDeg;
}

double angular_separation_deg(const Viewpoint& a, const Viewpoint& b) {
  const double c = std::clamp(a.direction().dot(b.direction()), -1.0, 1.0);
  return std::acos(c) / kDegToRad;
}

ViewPairConfig pick_viewpoints(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> azimuth(0.0, 360.0);
  std::uniform_real_distribution<double> elevation(kMinElevationDeg, kMaxElevationDeg);
  for (int i = 0; i < kMaxViewpointDraws; ++i) {
    ViewPairConfig cfg;
    cfg.seed = seed;
    cfg.v1 = {azimuth(rng), elevation(rng)};
    cfg.v2 = {azimuth(rng), elevation(rng)};
    if (angular_separation_deg(cfg.v1, cfg.v2) > kMinSeparationDeg) return cfg;
  }
  throw Error("pick_viewpoints: no valid pair after " +
              std::to_string(kMaxViewpointDraws) + " draws");
}

std::vector<ProjectedVertex> project(const Mesh& mesh, const Viewpoint& view,
                                     std::size_t size) {
  const CameraFrame frame = camera_frame(view);
  std::vector<ProjectedVertex> out(mesh.vertices.size());
  double radius = 0.0;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Eigen::Vector3d& p = mesh.vertices[i];
    out[i] = {p.dot(frame.right), p.dot(frame.up), -p.dot(frame.toward_camera)};
    radius = std::max({radius, std::abs(out[i].x), std::abs(out[i].y)});
  }
  const double half = static_cast<double>(size) / 2.0;
  const double scale = radius > 0.0 ? 0.9 * half / radius : 1.0;
  for (ProjectedVertex& v : out) {
    v.x = half + scale * v.x;
    v.y = half - scale * v.y;
  }
  return out;
}

std::vector<FeatureEdge> feature_edges(const Mesh& mesh, const Viewpoint& view) {
  const Eigen::Vector3d toward = view.direction();
  std::vector<Eigen::Vector3d> normals(mesh.faces.size());
  std::vector<bool> front(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    normals[f] = face_normal(mesh, mesh.faces[f]).normalized();
    front[f] = normals[f].dot(toward) > 0.0;
  }

  struct HalfEdge {
    std::uint32_t a, b, face;
  };
  std::vector<HalfEdge> half;
  half.reserve(mesh.faces.size() * 3);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t u = face[k];
      const std::uint32_t v = face[(k + 1) % 3];
      half.push_back({std::min(u, v), std::max(u, v), static_cast<std::uint32_t>(f)});
    }
  }
  std::sort(half.begin(), half.end(), [](const HalfEdge& l, const HalfEdge& r) {
    return std::tie(l.a, l.b, l.face) < std::tie(r.a, r.b, r.face);
  });

  const double crease_cos = std::cos(kCreaseAngleDeg * kDegToRad);
  std::vector<FeatureEdge> edges;
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    while (j < half.size() && half[j].a == half[i].a && half[j].b == half[i].b) ++j;
    FeatureEdge e{half[i].a, half[i].b, 0};
    const std::size_t incident = j - i;
    if (incident == 1) {
      e.kinds |= kBoundaryEdge;
    } else {
      for (std::size_t p = i; p < j; ++p) {
        for (std::size_t q = p + 1; q < j; ++q) {
          if (front[half[p].face] != front[half[q].face]) e.kinds |= kSilhouetteEdge;
          // |cos| makes the test independent of winding consistency.
          if (std::abs(normals[half[p].face].dot(normals[half[q].face])) < crease_cos) {
            e.kinds |= kCreaseEdge;
          }
        }
      }
      if (incident > 2) e.kinds |= kBoundaryEdge;
    }
    if (e.kinds != 0) edges.push_back(e);
    i = j;
  }
  return edges;
}

GrayImage render_lines(const Mesh& mesh, const Viewpoint& view, std::size_t size) {
  const std::vector<ProjectedVertex> pv = project(mesh, view, size);
  const auto n = static_cast<long>(size);

  // Faces bucketed by the canvas cells their projected bounding boxes
  // overlap; degenerate (edge-on) projections cannot hide anything.
  std::vector<std::vector<std::uint32_t>> cell_faces(size * size);
  std::vector<DepthPlane> planes(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const ProjectedVertex& p0 = pv[mesh.faces[f][0]];
    const ProjectedVertex& p1 = pv[mesh.faces[f][1]];
    const ProjectedVertex& p2 = pv[mesh.faces[f][2]];
    const double area = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    if (std::abs(area) < 1e-12) continue;
    DepthPlane& pl = planes[f];
    pl.a = ((p1.depth - p0.depth) * (p2.y - p0.y) - (p2.depth - p0.depth) * (p1.y - p0.y)) / area;
    pl.b = ((p2.depth - p0.depth) * (p1.x - p0.x) - (p1.depth - p0.depth) * (p2.x - p0.x)) / area;
    pl.c = p0.depth - pl.a * p0.x - pl.b * p0.y;
    const long x_lo = std::max(0L, static_cast<long>(std::floor(std::min({p0.x, p1.x, p2.x}))));
    const long x_hi = std::min(n - 1, static_cast<long>(std::floor(std::max({p0.x, p1.x, p2.x}))));
    const long y_lo = std::max(0L, static_cast<long>(std::floor(std::min({p0.y, p1.y, p2.y}))));
    const long y_hi = std::min(n - 1, static_cast<long>(std::floor(std::max({p0.y, p1.y, p2.y}))));
    for (long py = y_lo; py <= y_hi; ++py) {
      for (long px = x_lo; px <= x_hi; ++px) {
        cell_faces[static_cast<std::size_t>(py * n + px)].push_back(static_cast<std::uint32_t>(f));
      }
    }
  }

  // True when face f covers (x, y) in front of `depth`.
  const auto occludes = [&](std::uint32_t f, double x, double y, double depth) {
    const ProjectedVertex& p0 = pv[mesh.faces[f][0]];
    const ProjectedVertex& p1 = pv[mesh.faces[f][1]];
    const ProjectedVertex& p2 = pv[mesh.faces[f][2]];
    const double w0 = (p1.x - x) * (p2.y - y) - (p2.x - x) * (p1.y - y);
    const double w1 = (p2.x - x) * (p0.y - y) - (p0.x - x) * (p2.y - y);
    const double w2 = (p0.x - x) * (p1.y - y) - (p1.x - x) * (p0.y - y);
    const bool inside = (w0 >= 0 && w1 >= 0 && w2 >= 0) || (w0 <= 0 && w1 <= 0 && w2 <= 0);
    return inside && planes[f].at(x, y) < depth - kDepthEpsilon;
  };

  GrayImage image(size, size);
  for (const FeatureEdge& e : feature_edges(mesh, view)) {
    const ProjectedVertex& p = pv[e.a];
    const ProjectedVertex& q = pv[e.b];
    const double span = std::max(std::abs(q.x - p.x), std::abs(q.y - p.y));
    const long steps = std::max(1L, static_cast<long>(std::ceil(span)));
    for (long s = 0; s <= steps; ++s) {
      const double t = static_cast<double>(s) / static_cast<double>(steps);
      const double x = p.x + t * (q.x - p.x);
      const double y = p.y + t * (q.y - p.y);
      const long px = static_cast<long>(std::floor(x));
      const long py = static_cast<long>(std::floor(y));
      if (px < 0 || py < 0 || px >= n || py >= n) continue;
      const double depth = p.depth + t * (q.depth - p.depth);
      bool visible = true;
      const double from_a = std::hypot(x - p.x, y - p.y);
      const double from_b = std::hypot(x - q.x, y - q.y);
      for (std::uint32_t f : cell_faces[static_cast<std::size_t>(py * n + px)]) {
        // Faces containing the edge never hide it. A face sharing one vertex
        // is ignored near that vertex, where polygonal silhouettes zig-zag
        // and the depth test cannot separate the two.
        const Face& face = mesh.faces[f];
        const bool has_a = std::find(face.begin(), face.end(), e.a) != face.end();
        const bool has_b = std::find(face.begin(), face.end(), e.b) != face.end();
        if ((has_a && has_b) || (has_a && from_a < kVertexExemptionPx) ||
            (has_b && from_b < kVertexExemptionPx)) {
          continue;
        }
        if (occludes(f, x, y, depth)) {
          visible = false;
          break;
        }
      }
      if (visible) image.at(static_cast<std::size_t>(px), static_cast<std::size_t>(py)) = 1.0f;
    }
  }
  return image;
}

}  // namespace sbsr
