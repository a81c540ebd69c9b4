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

// Pairwise contrastive loss over L1 feature distance D:
//
//   L(a, b, y) = (1 - y) * alpha * D^2 + y * beta * exp(gamma * D)
//
// with alpha = 1/Cp, beta = Cn, gamma = -2.77/Cn, Cp = 0.2, Cn = 10.
// y = 0 marks a similar pair (pulled together), y = 1 a dissimilar pair
// (pushed apart; the penalty is largest at D = 0 since gamma < 0).
//
// The cross-domain loss sums three such terms over a sketch pair (s1, s2)
// and a view pair (v1, v2) sharing one label:
//
//   L(s1, s2, y) + L(v1, v2, y) + L(s1, v1, y)

#ifndef SBSR_LOSS_H_
#define SBSR_LOSS_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace sbsr {

struct LossConstants {
  static constexpr double kCp = 0.2;
  static constexpr double kCn = 10.0;
  static constexpr double kAlpha = 1.0 / kCp;
  static constexpr double kBeta = kCn;
  static constexpr double kGamma = -2.77 / kCn;
};

enum class PairLabel : std::uint8_t {
  kSimilar = 0,
  kDissimilar = 1,
};

template <typename T>
struct ContrastiveResult {
  T loss{};
  T distance{};
  std::vector<T> grad_a;  // dL/da
  std::vector<T> grad_b;  // dL/db
};

// The subgradient of |x| at 0 is taken as 0.
template <typename T>
ContrastiveResult<T> contrastive_loss(std::span<const T> a,
                                      std::span<const T> b, PairLabel y);

// Feature slots of one training quadruple.
enum class Branch : std::uint8_t { kSketch1 = 0, kSketch2, kView1, kView2 };

struct LossTerm {
  Branch a;
  Branch b;
};

struct CombinedOptions {
  // Adds L(s2, v2, y) to the three standard terms.
  bool symmetric_cross_term = false;
};

std::vector<LossTerm> loss_terms(const CombinedOptions& options);

template <typename T>
struct CombinedResult {
  T loss{};
  std::array<std::vector<T>, 4> grads;  // indexed by Branch
  std::vector<ContrastiveResult<T>> terms;  // parallel to loss_terms()
};

template <typename T>
CombinedResult<T> combined_loss(std::span<const T> fs1, std::span<const T> fs2,
                                std::span<const T> fv1, std::span<const T> fv2,
                                PairLabel y,
                                const CombinedOptions& options = {});

}  // namespace sbsr

#endif  // SBSR_LOSS_H_
