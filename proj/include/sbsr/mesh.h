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

#ifndef SBSR_MESH_H_
#define SBSR_MESH_H_

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace sbsr {

using Face = std::array<std::uint32_t, 3>;

// Triangle mesh with +Y up.
struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Face> faces;
};

// Reads ASCII OBJ "v" and "f" records (other records ignored); polygons are
// fan-triangulated, negative indices are relative. Zero-area faces are
// dropped. The result is scaled uniformly into the unit cube centered at
// the origin. Throws InputError naming the line on bad indices, and when
// no faces remain.
Mesh parse_obj(std::istream& in, const std::string& what);
Mesh load_obj(const std::filesystem::path& path);

// Centers the bounding box at the origin and scales the longest side to 1.
void normalize_to_unit_cube(Mesh& mesh);

std::string to_obj(const Mesh& mesh);
Eigen::Vector3d face_normal(const Mesh& mesh, const Face& face);  // unnormalized

}  // namespace sbsr

#endif  // SBSR_MESH_H_
