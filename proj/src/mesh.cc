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

#include "sbsr/mesh.h"

#include <Eigen/Geometry>
#include <spdlog/spdlog.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "sbsr/errors.h"

namespace sbsr {
namespace {

// Relative to the longest bounding-box side; faces below are degenerate.
constexpr double kMinRelativeArea = 1e-12;

[[noreturn]] void obj_error(const std::string& what, std::size_t line,
                            const std::string& message) {
  throw InputError(what + ":" + std::to_string(line) + ": " + message);
}

long parse_index(const std::string& token, const std::string& what,
                 std::size_t line) {
  const std::string head = token.substr(0, token.find('/'));
  long value = 0;
  auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), value);
  if (ec != std::errc() || ptr != head.data() + head.size() || value == 0) {
    obj_error(what, line, "bad face index \"" + token + "\"");
  }
  return value;
}

}  // namespace

Eigen::Vector3d face_normal(const Mesh& mesh, const Face& face) {
  const Eigen::Vector3d& a = mesh.vertices[face[0]];
  const Eigen::Vector3d& b = mesh.vertices[face[1]];
  const Eigen::Vector3d& c = mesh.vertices[face[2]];
  return (b - a).cross(c - a);
}

void normalize_to_unit_cube(Mesh& mesh) {
  if (mesh.vertices.empty()) return;
  Eigen::Vector3d lo = mesh.vertices.front();
  Eigen::Vector3d hi = lo;
  for (const auto& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Eigen::Vector3d center = (lo + hi) / 2.0;
  const double extent = (hi - lo).maxCoeff();
  const double scale = extent > 0.0 ? 1.0 / extent : 1.0;
  for (auto& v : mesh.vertices) v = (v - center) * scale;
}

Mesh parse_obj(std::istream& in, const std::string& what) {
  Mesh mesh;
  struct RawFace {
    std::vector<long> indices;
    std::size_t line;
  };
  std::vector<RawFace> raw_faces;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream ss(text);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ss >> p.x() >> p.y() >> p.z())) obj_error(what, line, "malformed vertex");
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      RawFace face{{}, line};
      std::string token;
      while (ss >> token) {
        long idx = parse_index(token, what, line);
        // Negative indices count back from the vertices seen so far.
        if (idx < 0) idx = static_cast<long>(mesh.vertices.size()) + idx + 1;
        face.indices.push_back(idx);
      }
      if (face.indices.size() < 3) obj_error(what, line, "face with fewer than 3 vertices");
      raw_faces.push_back(std::move(face));
    }
  }

  const long n = static_cast<long>(mesh.vertices.size());
  for (const RawFace& f : raw_faces) {
    for (long idx : f.indices) {
      if (idx < 1 || idx > n) {
        obj_error(what, f.line, "vertex index " + std::to_string(idx) +
                                    " out of range (" + std::to_string(n) +
                                    " vertices)");
      }
    }
    for (std::size_t k = 1; k + 1 < f.indices.size(); ++k) {
      mesh.faces.push_back({static_cast<std::uint32_t>(f.indices[0] - 1),
                            static_cast<std::uint32_t>(f.indices[k] - 1),
                            static_cast<std::uint32_t>(f.indices[k + 1] - 1)});
    }
  }
  if (mesh.faces.empty()) throw InputError(what + ": mesh has no faces");

  normalize_to_unit_cube(mesh);
  std::vector<Face> kept;
  kept.reserve(mesh.faces.size());
  for (const Face& f : mesh.faces) {
    if (face_normal(mesh, f).norm() / 2.0 > kMinRelativeArea) kept.push_back(f);
  }
  if (kept.size() != mesh.faces.size()) {
    spdlog::warn("{}: dropped {} degenerate face(s)", what,
                 mesh.faces.size() - kept.size());
  }
  if (kept.empty()) throw InputError(what + ": mesh has no non-degenerate faces");
  mesh.faces = std::move(kept);
  return mesh;
}

Mesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_obj(in, path.string());
}

std::string to_obj(const Mesh& mesh) {
  std::ostringstream out;
  out.precision(9);
  for (const auto& v : mesh.vertices) {
    out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const Face& f : mesh.faces) {
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
  return out.str();
}

}  // namespace sbsr
