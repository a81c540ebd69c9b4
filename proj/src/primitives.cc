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


#include "sbsr/primitives.h"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace sbsr {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint32_t add_vertex(Mesh& m, double x, double y, double z) {
  m.vertices.emplace_back(x, y, z);
  return static_cast<std::uint32_t>(m.vertices.size() - 1);
}

Mesh finished(Mesh m) {
  normalize_to_unit_cube(m);
  return m;
}

// Lathe around +Y: ring k has `segments` vertices at (r_k, y_k); an apex
// (r = 0) collapses to one vertex. Rings are listed bottom to top.
Mesh lathe(const std::vector<std::pair<double, double>>& profile, int segments) {
  if (segments < 3) throw std::invalid_argument("lathe: need at least 3 segments");
  Mesh m;
  std::vector<std::vector<std::uint32_t>> rings;
  for (const auto& [r, y] : profile) {
    std::vector<std::uint32_t> ring;
    if (r == 0.0) {
      ring.assign(static_cast<std::size_t>(segments), add_vertex(m, 0.0, y, 0.0));
    } else {
      for (int s = 0; s < segments; ++s) {
        const double a = kTwoPi * s / segments;
        ring.push_back(add_vertex(m, r * std::cos(a), y, r * std::sin(a)));
      }
    }
    rings.push_back(std::move(ring));
  }
  const auto n = static_cast<std::size_t>(segments);
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
    const auto& lo = rings[k];
    const auto& hi = rings[k + 1];
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t t = (s + 1) % n;
      // Angle grows from +X toward +Z, so (lo_s, hi_s, lo_t) faces outward.
      if (lo[s] != lo[t]) m.faces.push_back({lo[s], hi[s], lo[t]});
      if (hi[s] != hi[t]) m.faces.push_back({lo[t], hi[s], hi[t]});
    }
  }
  return m;
}

}  // namespace

Mesh make_cube() {
  Mesh m;
  for (int i = 0; i < 8; ++i) {
    add_vertex(m, (i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, (i & 4) ? 0.5 : -0.5);
  }
  // Quads wound counter-clockwise seen from outside.
  const std::uint32_t quads[6][4] = {{0, 4, 6, 2}, {1, 3, 7, 5}, {0, 1, 5, 4},
                                     {2, 6, 7, 3}, {0, 2, 3, 1}, {4, 5, 7, 6}};
  for (const auto& q : quads) {
    m.faces.push_back({q[0], q[1], q[2]});
    m.faces.push_back({q[0], q[2], q[3]});
  }
  return finished(std::move(m));
}

Mesh make_icosphere(int subdivisions) {
  if (subdivisions < 0) throw std::invalid_argument("icosphere: negative subdivisions");
  Mesh m;
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  const double base[12][3] = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                              {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                              {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (const auto& v : base) {
    m.vertices.push_back(Eigen::Vector3d(v[0], v[1], v[2]).normalized());
  }
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
    auto mid = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      const auto id = static_cast<std::uint32_t>(m.vertices.size() - 1);
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Face> next;
    next.reserve(m.faces.size() * 4);
    for (const Face& f : m.faces) {
      const std::uint32_t ab = mid(f[0], f[1]);
      const std::uint32_t bc = mid(f[1], f[2]);
      const std::uint32_t ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  return finished(std::move(m));
}

Mesh make_cylinder(int segments) {
  return finished(lathe({{0.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {0.0, 1.0}}, segments));
}

Mesh make_cone(int segments) {
  return finished(lathe({{0.0, -1.0}, {1.0, -1.0}, {0.0, 1.0}}, segments));
}

Mesh make_torus(int major_segments, int minor_segments, double tube_ratio) {
  if (major_segments < 3 || minor_segments < 3) {
    throw std::invalid_argument("torus: need at least 3 segments per ring");
  }
  Mesh m;
  // Ring plane is XZ so the torus lies flat under the +Y up axis.
  for (int i = 0; i < major_segments; ++i) {
    const double u = kTwoPi * i / major_segments;
    for (int j = 0; j < minor_segments; ++j) {
      const double v = kTwoPi * j / minor_segments;
      const double r = 1.0 + tube_ratio * std::cos(v);
      add_vertex(m, r * std::cos(u), tube_ratio * std::sin(v), r * std::sin(u));
    }
  }
  auto id = [&](int i, int j) {
    return static_cast<std::uint32_t>((i % major_segments) * minor_segments +
                                      (j % minor_segments));
  };
  for (int i = 0; i < major_segments; ++i) {
    for (int j = 0; j < minor_segments; ++j) {
      m.faces.push_back({id(i, j), id(i, j + 1), id(i + 1, j)});
      m.faces.push_back({id(i + 1, j), id(i, j + 1), id(i + 1, j + 1)});
    }
  }
  return finished(std::move(m));
}

std::vector<NamedMesh> toy_primitives() {
  return {{"cube", make_cube()},
          {"icosphere", make_icosphere(2)},
          {"cylinder", make_cylinder(24)},
          {"cone", make_cone(24)},
          {"torus", make_torus(32, 12)}};
}

}  // namespace sbsr
