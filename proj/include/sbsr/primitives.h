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


// Procedural test meshes with outward-facing windings, normalized to the
// unit cube. They seed the toy dataset and the renderer tests.

#ifndef SBSR_PRIMITIVES_H_
#define SBSR_PRIMITIVES_H_

#include <string>
#include <vector>

#include "sbsr/mesh.h"

namespace sbsr {

Mesh make_cube();
Mesh make_icosphere(int subdivisions);
Mesh make_cylinder(int segments);
Mesh make_cone(int segments);
Mesh make_torus(int major_segments, int minor_segments, double tube_ratio = 0.35);

struct NamedMesh {
  std::string name;
  Mesh mesh;
};

// cube, icosphere, cylinder, cone, torus.
std::vector<NamedMesh> toy_primitives();

}  // namespace sbsr

#endif  // SBSR_PRIMITIVES_H_
