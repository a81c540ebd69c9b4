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


// End-to-end steps behind the sbsr subcommands. Each step reads and
// writes files so the CLI stays a thin argument parser.

#ifndef SBSR_PIPELINE_H_
#define SBSR_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbsr/manifest.h"
#include "sbsr/metrics.h"
#include "sbsr/render.h"
#include "sbsr/trainer.h"

namespace sbsr {

namespace fs = std::filesystem;

struct RenderSummary {
  ViewPairConfig viewpoints;
  std::size_t rendered = 0;
  std::size_t failed = 0;
  fs::path manifest_path;
};

// Renders every *.obj under `obj_dir` from one dataset-wide viewpoint
// pair. A file directly in `obj_dir` forms its own class named after the
// file; files in a subdirectory take the subdirectory name as class.
// Writes {model}_v1.pgm, {model}_v2.pgm, views.jsonl and viewpoints.json
// into `out_dir`. Throws InputError when nothing renders.
RenderSummary run_render(const fs::path& obj_dir, const fs::path& out_dir,
                         std::uint64_t seed);

struct ToyOptions {
  std::uint64_t seed = 7;
  std::size_t sketches_per_class = 40;
  std::size_t test_per_class = 10;
};

// Five primitive classes rendered as views, plus jittered line drawings
// from nearby viewpoints standing in for sketches. Writes train.jsonl and
// test.jsonl (both listing every view) under `out_dir`.
void generate_toy_dataset(const fs::path& out_dir, const ToyOptions& options);

// Writes two affine-jittered copies of every sketch beside its source
// image and returns a manifest with originals, copies and views.
DatasetManifest run_augment(const fs::path& manifest_path, const fs::path& out_manifest,
                            std::uint64_t seed);

struct TrainConfig {
  fs::path manifest;
  fs::path checkpoint;        // final (and resume) checkpoint
  std::optional<fs::path> log;  // JSON lines; default <checkpoint>.log.jsonl
  std::size_t epochs = 20;    // total, counting epochs already done on resume
  float learning_rate = 0.001f;
  std::size_t batch_size = 64;
  std::size_t kp = 2;
  std::size_t kn = 20;
  std::uint64_t seed = 1;
  bool identical = false;
  bool resume = false;
  std::size_t checkpoint_every = 0;  // 0 = only the final checkpoint
  bool symmetric_cross_term = false;
};

using EpochLogSink = std::function<void(const nlohmann::ordered_json&)>;

// Returns the per-epoch log records written during this run.
std::vector<nlohmann::ordered_json> run_train(const TrainConfig& config,
                                              const EpochLogSink& sink = {});

void run_extract(const fs::path& checkpoint, const fs::path& manifest,
                 const fs::path& out_index);

nlohmann::ordered_json run_retrieve(const fs::path& index_path, const fs::path& checkpoint,
                                    const fs::path& query_image, std::size_t k);

enum class EvalMode { kCross, kSketch, kView };
EvalMode parse_eval_mode(std::string_view text);

// Queries are the manifest entries of the mode's query domain that appear
// in the index; their stored features are ranked against the index.
MetricsReport run_eval(const fs::path& index_path, const fs::path& query_manifest,
                       EvalMode mode);
MetricsReport evaluate_index(const FeatureIndex& index, const DatasetManifest& queries,
                             EvalMode mode);

std::string view_image_name(const std::string& model_id, int view);

// Top-k hits as [{model_id, distance, view_image_refs}].
nlohmann::ordered_json ranked_results_json(const RankedList& ranked, std::size_t k);

}  // namespace sbsr

#endif  // SBSR_PIPELINE_H_
