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

// Dataset manifests are JSON-lines files, one entry per line:
//
//   {"id": "...", "class_label": "...", "domain": "sketch" | "view",
//    "image_path": "...", "model_id": "...", "split": "train" | "test"}
//
// model_id is required for views; split is optional (default "train") and
// must agree across lines. Relative image paths resolve against the
// manifest's directory.

#ifndef SBSR_MANIFEST_H_
#define SBSR_MANIFEST_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "sbsr/domain.h"

namespace sbsr {

struct ManifestEntry {
  std::string id;
  std::string class_label;
  Domain domain = Domain::kSketch;
  std::string image_path;
  std::optional<std::string> model_id;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::string split = "train";

  std::vector<std::size_t> indices_of(Domain d) const;
};

// Validates ids, required fields and the two-views-per-model rule. Errors
// name the offending 1-based line.
DatasetManifest parse_manifest(std::istream& in,
                               const std::filesystem::path& base_dir = {});
DatasetManifest load_manifest(const std::filesystem::path& path);

std::string manifest_line(const ManifestEntry& entry,
                          const std::string& split = "train");
void write_manifest(const std::filesystem::path& path,
                    const DatasetManifest& manifest);

}  // namespace sbsr

#endif  // SBSR_MANIFEST_H_
