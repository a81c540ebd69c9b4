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


// sbsr: sketch-based 3D shape retrieval from the command line.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sbsr/errors.h"
#include "sbsr/parallel.h"
#include "sbsr/pipeline.h"
#include "sbsr/service.h"
#include "sbsr/trainer.h"

namespace {

namespace fs = std::filesystem;

void write_output(const std::string& text, const std::optional<fs::path>& out) {
  if (out) {
    std::ofstream f(*out, std::ios::binary | std::ios::trunc);
    if (!f) throw sbsr::Error("cannot write " + out->string());
    f << text;
  } else {
    std::cout << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sketch-based 3D shape retrieval with coupled Siamese networks"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  // render
  fs::path obj_dir, render_out;
  std::uint64_t seed = 1;
  auto* render = app.add_subcommand("render", "Render two line-drawing views per OBJ model");
  render->add_option("--objs", obj_dir, "Directory of .obj files")->required();
  render->add_option("--out", render_out, "Output directory")->required();
  render->add_option("--seed", seed, "Viewpoint seed");

  // toy
  fs::path toy_out;
  sbsr::ToyOptions toy_options;
  auto* toy = app.add_subcommand("toy", "Generate the five-class primitive dataset");
  toy->add_option("--out", toy_out, "Output directory")->required();
  toy->add_option("--seed", toy_options.seed, "Dataset seed");
  toy->add_option("--sketches", toy_options.sketches_per_class, "Sketches per class");
  toy->add_option("--test", toy_options.test_per_class, "Held-out sketches per class");

  // augment
  fs::path augment_in, augment_out;
  auto* augment = app.add_subcommand("augment", "Add two jittered copies of every sketch");
  augment->add_option("--manifest", augment_in, "Input manifest")->required();
  augment->add_option("--out", augment_out, "Output manifest")->required();
  augment->add_option("--seed", seed, "Augmentation seed");

  // train
  sbsr::TrainConfig train;
  std::string profile;
  std::optional<fs::path> log_path;
  auto* train_cmd = app.add_subcommand("train", "Train the sketch and view networks");
  train_cmd->add_option("--manifest", train.manifest, "Training manifest")->required();
  train_cmd->add_option("--checkpoint", train.checkpoint, "Checkpoint to write")->required();
  train_cmd->add_option("--log", log_path, "Epoch log (default <checkpoint>.log.jsonl)");
  auto* epochs_opt = train_cmd->add_option("--epochs", train.epochs, "Total epochs");
  train_cmd->add_option("--profile", profile, "Dataset profile: psb, sbsr or shrec13")
      ->check(CLI::IsMember({"psb", "sbsr", "shrec13"}))
      ->excludes(epochs_opt);
  train_cmd->add_option("--lr", train.learning_rate, "Base learning rate")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch", train.batch_size, "Pairs per minibatch")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--kp", train.kp, "Similar pairs per sketch per epoch");
  train_cmd->add_option("--kn", train.kn, "Dissimilar pairs per sketch per epoch");
  train_cmd->add_option("--seed", train.seed, "Initialization and sampling seed");
  train_cmd->add_flag("--identical", train.identical, "Share one network across domains");
  train_cmd->add_flag("--resume", train.resume, "Continue from --checkpoint if present");
  train_cmd->add_option("--checkpoint-every", train.checkpoint_every,
                        "Also save the checkpoint every N epochs");
  train_cmd->add_flag("--symmetric", train.symmetric_cross_term,
                      "Add the second sketch/view cross term to the loss");

  // extract
  fs::path checkpoint, manifest, index;
  auto* extract = app.add_subcommand("extract", "Embed every manifest image into an index");
  extract->add_option("--checkpoint", checkpoint, "Trained checkpoint")->required();
  extract->add_option("--manifest", manifest, "Dataset manifest")->required();
  extract->add_option("--index", index, "Index file to write")->required();

  // retrieve
  fs::path query;
  std::size_t k = sbsr::kDefaultQueryK;
  auto* retrieve = app.add_subcommand("retrieve", "Rank 3D models for a sketch image");
  retrieve->add_option("--index", index, "Feature index")->required();
  retrieve->add_option("--checkpoint", checkpoint, "Checkpoint the index was built with")
      ->required();
  retrieve->add_option("--query", query, "Sketch image (PGM or PNG)")->required();
  retrieve->add_option("--k", k, "Number of models to return")->check(CLI::PositiveNumber);

  // eval
  std::string mode = "cross";
  std::string format = "json";
  std::optional<fs::path> eval_out;
  auto* eval = app.add_subcommand("eval", "Score retrieval over labelled queries");
  eval->add_option("--index", index, "Feature index")->required();
  eval->add_option("--manifest", manifest, "Query manifest")->required();
  eval->add_option("--mode", mode, "cross, sketch or view")
      ->check(CLI::IsMember({"cross", "sketch", "view"}));
  eval->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
  eval->add_option("--out", eval_out, "Write the report here instead of stdout");

  // serve
  int port = sbsr::kDefaultPort;
  std::string host = "0.0.0.0";
  fs::path data_dir = ".";
  auto* serve = app.add_subcommand("serve", "Serve query-by-sketch over HTTP");
  serve->add_option("--checkpoint", checkpoint, "Trained checkpoint")->required();
  serve->add_option("--index", index, "Feature index")->required();
  serve->add_option("--port", port, "Listen port")->envname("SBSR_PORT");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--data-dir", data_dir, "Directory of rendered view images")
      ->envname("SBSR_DATA_DIR");

  CLI11_PARSE(app, argc, argv);
  sbsr::set_thread_count(threads);

  try {
    if (render->parsed()) {
      const auto s = sbsr::run_render(obj_dir, render_out, seed);
      spdlog::info("rendered {} model(s), {} failed; manifest {}", s.rendered, s.failed,
                   s.manifest_path.string());
    } else if (toy->parsed()) {
      sbsr::generate_toy_dataset(toy_out, toy_options);
    } else if (augment->parsed()) {
      sbsr::run_augment(augment_in, augment_out, seed);
    } else if (train_cmd->parsed()) {
      if (!profile.empty()) train.epochs = sbsr::default_epochs(profile);
      train.log = log_path;
      sbsr::run_train(train, [](const nlohmann::ordered_json& rec) {
        std::cout << rec.dump() << std::endl;
      });
    } else if (extract->parsed()) {
      sbsr::run_extract(checkpoint, manifest, index);
    } else if (retrieve->parsed()) {
      write_output(sbsr::run_retrieve(index, checkpoint, query, k).dump(2) + "\n", std::nullopt);
    } else if (eval->parsed()) {
      const sbsr::MetricsReport report =
          sbsr::run_eval(index, manifest, sbsr::parse_eval_mode(mode));
      write_output(format == "table" ? report.to_table() : report.to_json().dump(2) + "\n",
                   eval_out);
    } else if (serve->parsed()) {
      sbsr::serve(sbsr::RetrievalService::load(checkpoint, index, data_dir), host, port);
    }
  } catch (const sbsr::Error& e) {
    spdlog::error("{}", e.what());
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
