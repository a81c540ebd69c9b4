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

#ifndef SBSR_PAIRS_H_
#define SBSR_PAIRS_H_

#include <random>
#include <vector>

#include "sbsr/loss.h"
#include "sbsr/manifest.h"

namespace sbsr {

// One training quadruple, as indices into DatasetManifest::entries.
// s1 and v1 always share a class. y = kSimilar: all four share it.
// y = kDissimilar: s2 and v2 share one other class.
struct PairSpec {
  std::size_t sketch1 = 0;
  std::size_t sketch2 = 0;
  std::size_t view1 = 0;
  std::size_t view2 = 0;
  PairLabel y = PairLabel::kSimilar;

  friend bool operator==(const PairSpec&, const PairSpec&) = default;
};

// For every sketch: `kp` similar and `kn` dissimilar quadruples, drawn
// fresh on each call. Sketches whose class has no view are skipped with a
// warning. Throws InputError when fewer than two classes have views.
std::vector<PairSpec> sample_pairs(const DatasetManifest& manifest,
                                   std::size_t kp, std::size_t kn,
                                   std::mt19937_64& rng);

// True when `pair` satisfies its label invariant.
bool pair_is_consistent(const DatasetManifest& manifest, const PairSpec& pair);

}  // namespace sbsr

#endif  // SBSR_PAIRS_H_
