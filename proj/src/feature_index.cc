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


#include "sbsr/feature_index.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "sbsr/binary_io.h"
#include "sbsr/errors.h"
#include "sbsr/image.h"
#include "sbsr/parallel.h"

namespace sbsr {
namespace {

constexpr std::string_view kIndexMagic = "SBFI";
constexpr std::uint16_t kIndexVersion = 1;

}  // namespace

const IndexEntry* FeatureIndex::find(std::string_view id) const {
  for (const IndexEntry& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::string encode_index(const FeatureIndex& index) {
  if (index.entries.size() > 0xFFFFFFFFu) throw Error("index too large");
  ByteWriter w;
  w.bytes(kIndexMagic);
  w.u16(kIndexVersion);
  w.u32(static_cast<std::uint32_t>(index.entries.size()));
  for (const IndexEntry& e : index.entries) {
    w.str16(e.id);
    w.str16(e.class_label);
    w.u8(static_cast<std::uint8_t>(e.domain));
    // Zero length stands for "no model id"; ids are never empty.
    w.str16(e.model_id.value_or(""));
    for (float v : e.feature) w.f32(v);
  }
  w.bytes(std::string_view(reinterpret_cast<const char*>(index.checkpoint_fingerprint.data()),
                           index.checkpoint_fingerprint.size()));
  return w.take();
}

FeatureIndex decode_index(std::string_view bytes, const std::string& what) {
  ByteReader r(bytes, what);
  if (bytes.size() < kIndexMagic.size() || r.bytes(kIndexMagic.size()) != kIndexMagic) {
    r.fail("not a feature index (bad magic)");
  }
  if (const std::uint16_t v = r.u16(); v != kIndexVersion) {
    r.fail("unsupported index version " + std::to_string(v));
  }
  FeatureIndex index;
  const std::uint32_t count = r.u32();
  std::map<std::string, bool> seen;
  for (std::uint32_t i = 0; i < count; ++i) {
    IndexEntry e;
    e.id = r.str16();
    e.class_label = r.str16();
    const std::uint8_t d = r.u8();
    if (d > 1) r.fail("bad domain byte " + std::to_string(d));
    e.domain = static_cast<Domain>(d);
    std::string model = r.str16();
    if (!model.empty()) e.model_id = std::move(model);
    for (float& v : e.feature) v = r.f32();
    if (!seen.emplace(e.id, true).second) r.fail("duplicate id \"" + e.id + "\"");
    index.entries.push_back(std::move(e));
  }
  const std::string_view fp = r.bytes(index.checkpoint_fingerprint.size());
  std::copy(fp.begin(), fp.end(), reinterpret_cast<char*>(index.checkpoint_fingerprint.data()));
  if (!r.at_end()) r.fail("trailing bytes");
  return index;
}

void write_index(const std::filesystem::path& path, const FeatureIndex& index) {
  write_file_bytes(path, encode_index(index));
}

FeatureIndex read_index(const std::filesystem::path& path) {
  return decode_index(read_file_bytes(path), path.string());
}

Feature embed(const NetworkParams<float>& net, const Tensor& image) {
  const Tensor out = net_forward(net, image);
  Feature f;
  std::copy(out.data().begin(), out.data().end(), f.begin());
  return f;
}

FeatureIndex extract_features(const SiameseModel& model,
                              const DatasetManifest& manifest) {
  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<Feature>> features(n);
  std::mutex log_mutex;
  parallel_for(n, [&](std::size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    try {
      const Tensor input = preprocess(load_image(e.image_path));
      features[i] = embed(model.net(e.domain), input);
    } catch (const InputError& err) {
      std::lock_guard lock(log_mutex);
      spdlog::warn("skipping {}: {}", e.id, err.what());
    } catch (const BadQuery& err) {
      std::lock_guard lock(log_mutex);
      spdlog::warn("skipping {}: {}", e.id, err.what());
    }
  });

  FeatureIndex index;
  index.checkpoint_fingerprint = model.fingerprint();
  for (std::size_t i = 0; i < n; ++i) {
    if (!features[i]) continue;
    const ManifestEntry& e = manifest.entries[i];
    index.entries.push_back({e.id, e.class_label, e.domain, e.model_id, *features[i]});
  }
  if (index.entries.empty()) throw InputError("no usable manifest entries to index");
  return index;
}

double l1_distance(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }
  return sum;
}

void sort_hits(std::vector<Hit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const Hit& l, const Hit& r) {
    if (l.distance != r.distance) return l.distance < r.distance;
    return l.target_id < r.target_id;
  });
}

ModelGallery::ModelGallery(const FeatureIndex& index) {
  std::map<std::string, std::vector<const IndexEntry*>> grouped;
  for (const IndexEntry& e : index.entries) {
    if (e.domain != Domain::kView) continue;
    if (!e.model_id) {
      spdlog::warn("view {} has no model id; excluded", e.id);
      continue;
    }
    grouped[*e.model_id].push_back(&e);
  }
  for (const auto& [id, views] : grouped) {
    if (views.size() != 2) {
      spdlog::warn("model {} has {} view feature(s), expected 2; excluded", id,
                   views.size());
      continue;
    }
    by_id_.emplace(id, models_.size());
    models_.push_back({id, views[0]->class_label, {&views[0]->feature, &views[1]->feature}});
  }
}

const std::string& ModelGallery::class_of(std::string_view model_id) const {
  auto it = by_id_.find(std::string(model_id));
  if (it == by_id_.end()) throw std::out_of_range("unknown model " + std::string(model_id));
  return models_[it->second].class_label;
}

RankedList ModelGallery::rank(const Feature& query, std::string query_id) const {
  RankedList out{std::move(query_id), {}};
  out.hits.reserve(models_.size());
  for (const Model& m : models_) {
    const double d = std::min(l1_distance(query, *m.views[0]), l1_distance(query, *m.views[1]));
    out.hits.push_back({m.id, d});
  }
  sort_hits(out.hits);
  return out;
}

RankedList rank_models(const Feature& query, const FeatureIndex& index,
                       std::string query_id) {
  return ModelGallery(index).rank(query, std::move(query_id));
}

RankedList rank_within_domain(const Feature& query, const FeatureIndex& index,
                              Domain domain, std::string query_id) {
  RankedList out{std::move(query_id), {}};
  for (const IndexEntry& e : index.entries) {
    if (e.domain != domain || e.id == out.query_id) continue;
    out.hits.push_back({e.id, l1_distance(query, e.feature)});
  }
  sort_hits(out.hits);
  return out;
}

}  // namespace sbsr
