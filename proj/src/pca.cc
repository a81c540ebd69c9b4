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


#include "sbsr/pca.h"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "sbsr/errors.h"

namespace sbsr {

Projection2d pca_2d(const FeatureIndex& index) {
  const auto n = static_cast<Eigen::Index>(index.entries.size());
  if (n < 3) throw InputError("PCA needs at least 3 index entries");
  Eigen::MatrixXd x(n, kFeatureDim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(kFeatureDim); ++j) x(i, j) = index.entries[i].feature[j];
  }
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("PCA eigen-decomposition failed");

  // Eigen returns ascending eigenvalues.
  Projection2d out;
  Eigen::MatrixXd axes(kFeatureDim, 2);
  for (int c = 0; c < 2; ++c) {
    const Eigen::Index col = kFeatureDim - 1 - c;
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    axes.col(c) = v;
    out.eigenvalues[static_cast<std::size_t>(c)] = solver.eigenvalues()(col);
  }
  const Eigen::MatrixXd coords = x * axes;
  out.points.reserve(index.entries.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const IndexEntry& e = index.entries[static_cast<std::size_t>(i)];
    out.points.push_back({e.id, e.domain, e.class_label, coords(i, 0), coords(i, 1)});
  }
  return out;
}

}  // namespace sbsr
