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

#include "sbsr/pairs.h"

#include <spdlog/spdlog.h>

#include <map>
#include <set>

#include "sbsr/errors.h"

namespace sbsr {
namespace {

struct ClassMembers {
  std::vector<std::size_t> sketches;
  std::vector<std::size_t> views;
};

std::size_t pick(const std::vector<std::size_t>& from, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, from.size() - 1);
  return from[dist(rng)];
}

}  // namespace

std::vector<PairSpec> sample_pairs(const DatasetManifest& manifest,
                                   std::size_t kp, std::size_t kn,
                                   std::mt19937_64& rng) {
  std::map<std::string, ClassMembers> classes;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& e = manifest.entries[i];
    auto& members = classes[e.class_label];
    (e.domain == Domain::kSketch ? members.sketches : members.views).push_back(i);
  }
  // A class can act as the "other" class only if it can supply s2 and v2.
  std::vector<const std::string*> negative_classes;
  std::size_t classes_with_views = 0;
  for (const auto& [label, members] : classes) {
    if (!members.views.empty()) ++classes_with_views;
    if (!members.views.empty() && !members.sketches.empty()) {
      negative_classes.push_back(&label);
    }
  }
  if (classes_with_views < 2) {
    throw InputError("pair sampling needs at least two classes with views");
  }

  std::vector<PairSpec> pairs;
  std::set<std::string> warned;
  for (std::size_t s1 = 0; s1 < manifest.entries.size(); ++s1) {
    const ManifestEntry& sketch = manifest.entries[s1];
    if (sketch.domain != Domain::kSketch) continue;
    const ClassMembers& own = classes.at(sketch.class_label);
    if (own.views.empty()) {
      if (warned.insert(sketch.class_label).second) {
        spdlog::warn("class \"{}\" has no views; its sketches are skipped",
                     sketch.class_label);
      }
      continue;
    }
    for (std::size_t k = 0; k < kp; ++k) {
      PairSpec p;
      p.sketch1 = s1;
      p.view1 = pick(own.views, rng);
      p.sketch2 = pick(own.sketches, rng);
      p.view2 = pick(own.views, rng);
      p.y = PairLabel::kSimilar;
      pairs.push_back(p);
    }
    std::vector<const std::string*> others;
    for (const std::string* label : negative_classes) {
      if (*label != sketch.class_label) others.push_back(label);
    }
    if (kn > 0 && others.empty()) {
      if (warned.insert("~" + sketch.class_label).second) {
        spdlog::warn("no other class can supply dissimilar pairs for \"{}\"",
                     sketch.class_label);
      }
      continue;
    }
    for (std::size_t k = 0; k < kn; ++k) {
      std::uniform_int_distribution<std::size_t> which(0, others.size() - 1);
      const ClassMembers& other = classes.at(*others[which(rng)]);
      PairSpec p;
      p.sketch1 = s1;
      p.view1 = pick(own.views, rng);
      p.sketch2 = pick(other.sketches, rng);
      p.view2 = pick(other.views, rng);
      p.y = PairLabel::kDissimilar;
      pairs.push_back(p);
    }
  }
  return pairs;
}

bool pair_is_consistent(const DatasetManifest& manifest, const PairSpec& pair) {
  const auto& e = manifest.entries;
  const std::size_t n = e.size();
  if (pair.sketch1 >= n || pair.sketch2 >= n || pair.view1 >= n || pair.view2 >= n) {
    return false;
  }
  if (e[pair.sketch1].domain != Domain::kSketch ||
      e[pair.sketch2].domain != Domain::kSketch ||
      e[pair.view1].domain != Domain::kView || e[pair.view2].domain != Domain::kView) {
    return false;
  }
  const std::string& c1 = e[pair.sketch1].class_label;
  const std::string& c2 = e[pair.sketch2].class_label;
  if (e[pair.view1].class_label != c1 || e[pair.view2].class_label != c2) return false;
  return pair.y == PairLabel::kSimilar ? c1 == c2 : c1 != c2;
}

}  // namespace sbsr
