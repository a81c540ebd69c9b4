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


// Persistent 64-d embeddings of a dataset, bound to the checkpoint that
// produced them, and exhaustive L1 ranking over them.

#ifndef SBSR_FEATURE_INDEX_H_
#define SBSR_FEATURE_INDEX_H_

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sbsr/digest.h"
#include "sbsr/domain.h"
#include "sbsr/manifest.h"
#include "sbsr/network.h"
#include "sbsr/siamese.h"

namespace sbsr {

using Feature = std::array<float, kFeatureDim>;

struct IndexEntry {
  std::string id;
  std::string class_label;
  Domain domain = Domain::kSketch;
  std::optional<std::string> model_id;
  Feature feature{};

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

struct FeatureIndex {
  std::vector<IndexEntry> entries;
  Fingerprint checkpoint_fingerprint{};

  const IndexEntry* find(std::string_view id) const;
  friend bool operator==(const FeatureIndex&, const FeatureIndex&) = default;
};

std::string encode_index(const FeatureIndex& index);
FeatureIndex decode_index(std::string_view bytes, const std::string& what = "index");
void write_index(const std::filesystem::path& path, const FeatureIndex& index);
FeatureIndex read_index(const std::filesystem::path& path);

// Forwards every manifest image through its domain's network. Unreadable
// or blank images are skipped with a warning; throws InputError when
// nothing usable remains. Output order follows the manifest.
FeatureIndex extract_features(const SiameseModel& model,
                              const DatasetManifest& manifest);

Feature embed(const NetworkParams<float>& net, const Tensor& image);

double l1_distance(std::span<const float> a, std::span<const float> b);

struct Hit {
  std::string target_id;
  double distance = 0.0;

  friend bool operator==(const Hit&, const Hit&) = default;
};

struct RankedList {
  std::string query_id;
  std::vector<Hit> hits;  // ascending distance, ties by id
};

void sort_hits(std::vector<Hit>& hits);

// The view entries of an index grouped by model. Models without exactly
// two views are dropped with a warning. Build once, query many times.
class ModelGallery {
 public:
  explicit ModelGallery(const FeatureIndex& index);

  // Per-model distance is the minimum over the model's views.
  RankedList rank(const Feature& query, std::string query_id = {}) const;

  std::size_t size() const { return models_.size(); }
  const std::string& class_of(std::string_view model_id) const;

 private:
  struct Model {
    std::string id;
    std::string class_label;
    std::array<const Feature*, 2> views{};
  };
  std::vector<Model> models_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

RankedList rank_models(const Feature& query, const FeatureIndex& index,
                       std::string query_id = {});

// Plain ranking over entries of `domain`; the entry whose id equals
// `query_id` is left out of its own gallery.
RankedList rank_within_domain(const Feature& query, const FeatureIndex& index,
                              Domain domain, std::string query_id = {});

}  // namespace sbsr

#endif  // SBSR_FEATURE_INDEX_H_
