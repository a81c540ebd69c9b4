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


#ifndef SBSR_PCA_H_
#define SBSR_PCA_H_

#include <array>
#include <string>
#include <vector>

#include "sbsr/feature_index.h"

namespace sbsr {

struct EmbeddedPoint {
  std::string id;
  Domain domain = Domain::kSketch;
  std::string class_label;
  double x = 0.0;
  double y = 0.0;
};

struct Projection2d {
  std::vector<EmbeddedPoint> points;  // index order
  std::array<double, 2> eigenvalues{};  // top two, descending
};

// Projects mean-centered features onto the top two eigenvectors of their
// covariance (divided by n). Each axis is signed so that its
// largest-magnitude loading is positive. Needs at least 3 entries.
Projection2d pca_2d(const FeatureIndex& index);

}  // namespace sbsr

#endif  // SBSR_PCA_H_
