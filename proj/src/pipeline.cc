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


#include "sbsr/pipeline.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <unordered_map>

#include "sbsr/binary_io.h"
#include "sbsr/errors.h"
#include "sbsr/feature_index.h"
#include "sbsr/image.h"
#include "sbsr/pairs.h"
#include "sbsr/parallel.h"
#include "sbsr/primitives.h"

namespace sbsr {
namespace {

// Sketch viewpoints wander this far from the dataset viewpoints.
constexpr double kSketchAzimuthJitterDeg = 20.0;
constexpr double kSketchElevationJitterDeg = 5.0;

nlohmann::ordered_json viewpoint_json(const Viewpoint& v) {
  nlohmann::ordered_json j;
  j["azimuth_deg"] = v.azimuth_deg;
  j["elevation_deg"] = v.elevation_deg;
  return j;
}

std::string relative_to(const fs::path& target, const fs::path& base_dir) {
  return fs::proximate(target, base_dir.empty() ? fs::path(".") : base_dir).generic_string();
}

}  // namespace

std::string view_image_name(const std::string& model_id, int view) {
  return model_id + "_v" + std::to_string(view) + ".pgm";
}

RenderSummary run_render(const fs::path& obj_dir, const fs::path& out_dir,
                         std::uint64_t seed) {
  if (!fs::is_directory(obj_dir)) {
    throw InputError("OBJ directory not found: " + obj_dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& item : fs::recursive_directory_iterator(obj_dir)) {
    if (item.is_regular_file() && item.path().extension() == ".obj") files.push_back(item.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no .obj files under " + obj_dir.string());

  RenderSummary summary;
  summary.viewpoints = pick_viewpoints(seed);
  fs::create_directories(out_dir);

  std::map<std::string, fs::path> owner;
  std::vector<bool> usable(files.size(), true);
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string id = files[i].stem().string();
    if (!owner.emplace(id, files[i]).second) {
      spdlog::error("{}: model id \"{}\" already used by {}", files[i].string(), id,
                    owner[id].string());
      usable[i] = false;
    }
  }

  std::mutex log_mutex;
  std::vector<bool> ok(files.size(), false);
  parallel_for(files.size(), [&](std::size_t i) {
    if (!usable[i]) return;
    try {
      const Mesh mesh = load_obj(files[i]);
      const std::string id = files[i].stem().string();
      save_pgm(out_dir / view_image_name(id, 1), render_lines(mesh, summary.viewpoints.v1));
      save_pgm(out_dir / view_image_name(id, 2), render_lines(mesh, summary.viewpoints.v2));
      ok[i] = true;
    } catch (const Error& e) {
      std::lock_guard lock(log_mutex);
      spdlog::error("{}", e.what());
    }
  });

  DatasetManifest manifest;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!ok[i]) {
      ++summary.failed;
      continue;
    }
    ++summary.rendered;
    const std::string id = files[i].stem().string();
    const fs::path parent = files[i].parent_path();
    const std::string label = fs::equivalent(parent, obj_dir) ? id : parent.filename().string();
    for (int v = 1; v <= 2; ++v) {
      manifest.entries.push_back({id + "_v" + std::to_string(v), label, Domain::kView,
                                  view_image_name(id, v), id});
    }
  }
  if (summary.rendered == 0) throw InputError("every OBJ file failed to render");

  summary.manifest_path = out_dir / "views.jsonl";
  write_manifest(summary.manifest_path, manifest);
  nlohmann::ordered_json vp;
  vp["seed"] = seed;
  vp["v1"] = viewpoint_json(summary.viewpoints.v1);
  vp["v2"] = viewpoint_json(summary.viewpoints.v2);
  vp["separation_deg"] = angular_separation_deg(summary.viewpoints.v1, summary.viewpoints.v2);
  write_file_bytes(out_dir / "viewpoints.json", vp.dump(2) + "\n");
  return summary;
}

void generate_toy_dataset(const fs::path& out_dir, const ToyOptions& options) {
  if (options.test_per_class >= options.sketches_per_class) {
    throw std::invalid_argument("toy dataset: test split must leave training sketches");
  }
  const std::vector<NamedMesh> meshes = toy_primitives();
  for (const NamedMesh& m : meshes) {
    write_file_bytes(out_dir / "meshes" / m.name / (m.name + ".obj"), to_obj(m.mesh));
  }
  const RenderSummary views = run_render(out_dir / "meshes", out_dir / "views", options.seed);

  const std::size_t per_class = options.sketches_per_class;
  std::vector<GrayImage> sketches(meshes.size() * per_class);
  parallel_for(sketches.size(), [&](std::size_t i) {
    const std::size_t c = i / per_class;
    const std::size_t j = i % per_class;
    std::mt19937_64 rng(derive_seed(options.seed, 1000 + i));
    std::uniform_real_distribution<double> az(-kSketchAzimuthJitterDeg, kSketchAzimuthJitterDeg);
    std::uniform_real_distribution<double> el(-kSketchElevationJitterDeg, kSketchElevationJitterDeg);
    Viewpoint vp = j % 2 == 0 ? views.viewpoints.v1 : views.viewpoints.v2;
    vp.azimuth_deg += az(rng);
    vp.elevation_deg += el(rng);
    sketches[i] = augment_sketch(render_lines(meshes[c].mesh, vp), rng);
  });

  DatasetManifest train;
  DatasetManifest test;
  test.split = "test";
  const std::size_t train_count = per_class - options.test_per_class;
  for (std::size_t c = 0; c < meshes.size(); ++c) {
    for (std::size_t j = 0; j < per_class; ++j) {
      const std::string id = fmt::format("{}_s{:02}", meshes[c].name, j);
      const fs::path rel = fs::path("sketches") / (id + ".pgm");
      save_pgm(out_dir / rel, sketches[c * per_class + j]);
      (j < train_count ? train : test)
          .entries.push_back({id, meshes[c].name, Domain::kSketch, rel.generic_string(), {}});
    }
  }
  const DatasetManifest gallery = load_manifest(views.manifest_path);
  for (ManifestEntry e : gallery.entries) {
    e.image_path = relative_to(e.image_path, out_dir);
    train.entries.push_back(e);
    test.entries.push_back(e);
  }
  write_manifest(out_dir / "train.jsonl", train);
  write_manifest(out_dir / "test.jsonl", test);
}

DatasetManifest run_augment(const fs::path& manifest_path, const fs::path& out_manifest,
                            std::uint64_t seed) {
  const DatasetManifest in = load_manifest(manifest_path);
  const fs::path out_dir = out_manifest.parent_path();
  std::vector<std::array<GrayImage, 2>> copies(in.entries.size());
  parallel_for(in.entries.size(), [&](std::size_t i) {
    const ManifestEntry& e = in.entries[i];
    if (e.domain != Domain::kSketch) return;
    std::mt19937_64 rng(derive_seed(seed, i));
    const GrayImage source = load_image(e.image_path);
    for (GrayImage& copy : copies[i]) copy = augment_sketch(source, rng);
  });

  DatasetManifest out;
  out.split = in.split;
  for (std::size_t i = 0; i < in.entries.size(); ++i) {
    ManifestEntry e = in.entries[i];
    const fs::path source = e.image_path;
    e.image_path = relative_to(source, out_dir);
    out.entries.push_back(e);
    if (e.domain != Domain::kSketch) continue;
    for (int c = 1; c <= 2; ++c) {
      const std::string suffix = "_aug" + std::to_string(c);
      const fs::path target =
          source.parent_path() / (source.stem().string() + suffix + ".pgm");
      save_pgm(target, copies[i][static_cast<std::size_t>(c - 1)]);
      out.entries.push_back({e.id + suffix, e.class_label, Domain::kSketch,
                             relative_to(target, out_dir), {}});
    }
  }
  write_manifest(out_manifest, out);
  return out;
}

std::vector<nlohmann::ordered_json> run_train(const TrainConfig& config,
                                              const EpochLogSink& sink) {
  if (!(config.learning_rate > 0.0f)) throw std::invalid_argument("learning rate must be positive");
  if (config.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (config.kp + config.kn == 0) throw std::invalid_argument("kp + kn must be positive");

  const DatasetManifest manifest = load_manifest(config.manifest);
  ImageBank bank;
  std::vector<std::uint32_t> bank_slot(manifest.entries.size());
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    auto& list = manifest.entries[i].domain == Domain::kSketch ? bank.sketches : bank.views;
    bank_slot[i] = static_cast<std::uint32_t>(list.size());
    list.emplace_back();
  }
  parallel_for(manifest.entries.size(), [&](std::size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    auto& list = e.domain == Domain::kSketch ? bank.sketches : bank.views;
    try {
      list[bank_slot[i]] = preprocess(load_image(e.image_path));
    } catch (const BadQuery& err) {
      throw InputError(e.id + ": " + err.what());
    }
  });

  SiameseModel model = config.resume && fs::exists(config.checkpoint)
                           ? SiameseModel::load(config.checkpoint)
                           : SiameseModel::create(config.seed, config.identical);
  if (model.identical() != config.identical) {
    throw InputError(config.checkpoint.string() + ": checkpoint network mode does not match --identical");
  }
  const std::size_t done = model.completed_epochs();
  if (done > 0) spdlog::info("resuming after epoch {}", done);

  const fs::path log_path =
      config.log.value_or(fs::path(config.checkpoint.string() + ".log.jsonl"));
  if (log_path.has_parent_path()) fs::create_directories(log_path.parent_path());
  std::ofstream log(log_path, done > 0 ? std::ios::app : std::ios::trunc);
  if (!log) throw Error("cannot write " + log_path.string());

  const PairSource pairs = [&](std::size_t epoch) {
    std::mt19937_64 rng(derive_seed(derive_seed(config.seed, epoch), 1));
    PairBatch batch;
    for (const PairSpec& p : sample_pairs(manifest, config.kp, config.kn, rng)) {
      batch.push_back({bank_slot[p.sketch1], bank_slot[p.sketch2], bank_slot[p.view1],
                       bank_slot[p.view2], p.y});
    }
    return batch;
  };

  TrainLoopConfig loop;
  loop.epochs = config.epochs > done ? config.epochs - done : 0;
  loop.learning_rate = config.learning_rate;
  loop.seed = config.seed;
  loop.options.batch_size = config.batch_size;
  loop.options.loss.symmetric_cross_term = config.symmetric_cross_term;

  std::vector<nlohmann::ordered_json> records;
  train(model, bank, pairs, loop, [&](const EpochStats& stats, const SiameseModel& m) {
    nlohmann::ordered_json rec;
    rec["epoch"] = stats.epoch + 1;
    rec["learning_rate"] = scheduled_learning_rate(config.learning_rate, stats.epoch);
    rec["mean_loss"] = stats.mean_loss;
    rec["pairs"] = stats.pairs;
    rec["similar"] = stats.similar;
    rec["dissimilar"] = stats.dissimilar;
    log << rec.dump() << '\n' << std::flush;
    if (sink) sink(rec);
    records.push_back(std::move(rec));
    if (config.checkpoint_every > 0 && (stats.epoch + 1) % config.checkpoint_every == 0) {
      m.save(config.checkpoint);
    }
  });
  model.save(config.checkpoint);
  return records;
}

void run_extract(const fs::path& checkpoint, const fs::path& manifest,
                 const fs::path& out_index) {
  const SiameseModel model = SiameseModel::load(checkpoint);
  write_index(out_index, extract_features(model, load_manifest(manifest)));
}

nlohmann::ordered_json ranked_results_json(const RankedList& ranked, std::size_t k) {
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < ranked.hits.size() && i < k; ++i) {
    const Hit& h = ranked.hits[i];
    nlohmann::ordered_json r;
    r["model_id"] = h.target_id;
    r["distance"] = h.distance;
    r["view_image_refs"] = {view_image_name(h.target_id, 1), view_image_name(h.target_id, 2)};
    results.push_back(std::move(r));
  }
  return results;
}

nlohmann::ordered_json run_retrieve(const fs::path& index_path, const fs::path& checkpoint,
                                    const fs::path& query_image, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  const FeatureIndex index = read_index(index_path);
  const SiameseModel model = SiameseModel::load(checkpoint);
  if (model.fingerprint() != index.checkpoint_fingerprint) {
    throw InputError(index_path.string() + " was built from a different checkpoint");
  }
  const Feature query = embed(model.sketch_net(), preprocess(load_image(query_image)));
  nlohmann::ordered_json out;
  out["results"] = ranked_results_json(ModelGallery(index).rank(query), k);
  return out;
}

EvalMode parse_eval_mode(std::string_view text) {
  if (text == "cross") return EvalMode::kCross;
  if (text == "sketch") return EvalMode::kSketch;
  if (text == "view") return EvalMode::kView;
  throw std::invalid_argument("unknown eval mode \"" + std::string(text) +
                              "\" (expected cross, sketch or view)");
}

MetricsReport evaluate_index(const FeatureIndex& index, const DatasetManifest& queries,
                             EvalMode mode) {
  const Domain query_domain = mode == EvalMode::kView ? Domain::kView : Domain::kSketch;
  std::unordered_map<std::string, const IndexEntry*> by_id;
  for (const IndexEntry& e : index.entries) by_id.emplace(e.id, &e);

  std::vector<const ManifestEntry*> chosen;
  std::size_t missing = 0;
  for (const ManifestEntry& e : queries.entries) {
    if (e.domain != query_domain) continue;
    if (by_id.count(e.id) == 0) {
      ++missing;
      continue;
    }
    chosen.push_back(&e);
  }
  if (missing > 0) spdlog::warn("{} query entries are not in the index", missing);

  std::optional<ModelGallery> gallery;
  if (mode == EvalMode::kCross) gallery.emplace(index);
  const auto entry_class = [&](const std::string& id) -> const std::string& {
    return by_id.at(id)->class_label;
  };
  const auto model_class = [&](const std::string& id) -> const std::string& {
    return gallery->class_of(id);
  };

  std::vector<RelevanceJudgedList> lists(chosen.size());
  parallel_for(chosen.size(), [&](std::size_t q) {
    const ManifestEntry& e = *chosen[q];
    const Feature& f = by_id.at(e.id)->feature;
    if (mode == EvalMode::kCross) {
      lists[q] = judge(gallery->rank(f, e.id), e.class_label, model_class);
    } else {
      lists[q] = judge(rank_within_domain(f, index, query_domain, e.id), e.class_label,
                       entry_class);
    }
  });
  MetricsReport report = evaluate_all(lists);
  report.excluded += missing;
  return report;
}

MetricsReport run_eval(const fs::path& index_path, const fs::path& query_manifest,
                       EvalMode mode) {
  return evaluate_index(read_index(index_path), load_manifest(query_manifest), mode);
}

}  // namespace sbsr
