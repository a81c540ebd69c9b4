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

#include "sbsr/loss.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sbsr {

template <typename T>
ContrastiveResult<T> contrastive_loss(std::span<const T> a,
                                      std::span<const T> b, PairLabel y) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("contrastive_loss: feature lengths " +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  // Accumulate in double so the float path matches the reference closely.
  double distance = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    distance += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }

  double loss = 0.0;
  double dloss_ddist = 0.0;
  if (y == PairLabel::kSimilar) {
    loss = LossConstants::kAlpha * distance * distance;
    dloss_ddist = 2.0 * LossConstants::kAlpha * distance;
  } else {
    const double decay = std::exp(LossConstants::kGamma * distance);
    loss = LossConstants::kBeta * decay;
    dloss_ddist = LossConstants::kBeta * LossConstants::kGamma * decay;
  }

  ContrastiveResult<T> result;
  result.loss = static_cast<T>(loss);
  result.distance = static_cast<T>(distance);
  result.grad_a.resize(a.size());
  result.grad_b.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const T diff = a[i] - b[i];
    const double sign = diff > T{0} ? 1.0 : (diff < T{0} ? -1.0 : 0.0);
    result.grad_a[i] = static_cast<T>(dloss_ddist * sign);
    result.grad_b[i] = -result.grad_a[i];
  }
  return result;
}

std::vector<LossTerm> loss_terms(const CombinedOptions& options) {
  std::vector<LossTerm> terms{
      {Branch::kSketch1, Branch::kSketch2},
      {Branch::kView1, Branch::kView2},
      {Branch::kSketch1, Branch::kView1},
  };
  if (options.symmetric_cross_term) {
    terms.push_back({Branch::kSketch2, Branch::kView2});
  }
  return terms;
}

template <typename T>
CombinedResult<T> combined_loss(std::span<const T> fs1, std::span<const T> fs2,
                                std::span<const T> fv1, std::span<const T> fv2,
                                PairLabel y, const CombinedOptions& options) {
  const std::array<std::span<const T>, 4> features{fs1, fs2, fv1, fv2};
  CombinedResult<T> result;
  for (std::size_t i = 0; i < features.size(); ++i) {
    result.grads[i].assign(features[i].size(), T{0});
  }
  double total = 0.0;
  for (const LossTerm& term : loss_terms(options)) {
    const auto ia = static_cast<std::size_t>(term.a);
    const auto ib = static_cast<std::size_t>(term.b);
    ContrastiveResult<T> r = contrastive_loss(features[ia], features[ib], y);
    total += static_cast<double>(r.loss);
    for (std::size_t k = 0; k < r.grad_a.size(); ++k) {
      result.grads[ia][k] += r.grad_a[k];
      result.grads[ib][k] += r.grad_b[k];
    }
    result.terms.push_back(std::move(r));
  }
  result.loss = static_cast<T>(total);
  return result;
}

template ContrastiveResult<float> contrastive_loss(std::span<const float>,
                                                   std::span<const float>,
                                                   PairLabel);
template ContrastiveResult<double> contrastive_loss(std::span<const double>,
                                                    std::span<const double>,
                                                    PairLabel);
template CombinedResult<float> combined_loss(
    std::span<const float>, std::span<const float>, std::span<const float>,
    std::span<const float>, PairLabel, const CombinedOptions&);
template CombinedResult<double> combined_loss(
    std::span<const double>, std::span<const double>, std::span<const double>,
    std::span<const double>, PairLabel, const CombinedOptions&);

}  // namespace sbsr
