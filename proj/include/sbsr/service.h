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


// Read-only HTTP front end over one model and its feature index.
//
//   GET  /api/health                 {"status":"ok"}
//   POST /api/query                  {"image_png_base64", "k"} -> ranked models
//   GET  /api/models/{id}/views/{n}  PNG of view n (1 or 2)
//   GET  /api/embedding              2D PCA of every index entry
//
// Handlers are plain functions over request bodies so they can be tested
// without a socket; mount() wires them into an httplib server.

#ifndef SBSR_SERVICE_H_
#define SBSR_SERVICE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "sbsr/feature_index.h"
#include "sbsr/pca.h"
#include "sbsr/siamese.h"

namespace httplib {
class Server;
}

namespace sbsr {

inline constexpr int kDefaultPort = 8080;
inline constexpr std::size_t kDefaultQueryK = 15;
inline constexpr std::size_t kMaxQueryK = 100;

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

class RetrievalService {
 public:
  // Throws InputError when the index was not built from `model`.
  RetrievalService(SiameseModel model, FeatureIndex index, std::filesystem::path data_dir);
  RetrievalService(const RetrievalService&) = delete;
  RetrievalService& operator=(const RetrievalService&) = delete;
  RetrievalService(RetrievalService&&) = default;  // moves keep feature storage in place

  static RetrievalService load(const std::filesystem::path& checkpoint,
                               const std::filesystem::path& index,
                               const std::filesystem::path& data_dir);

  HttpReply health() const;
  HttpReply query(std::string_view body) const;
  HttpReply view_image(std::string_view model_id, std::string_view view) const;
  HttpReply embedding() const;

  void mount(httplib::Server& server) const;

 private:
  SiameseModel model_;
  FeatureIndex index_;
  ModelGallery gallery_;
  std::filesystem::path data_dir_;
  std::optional<Projection2d> projection_;
};

// Blocks serving requests. Throws BindError when the port is taken.
void serve(const RetrievalService& service, const std::string& host, int port);

}  // namespace sbsr

#endif  // SBSR_SERVICE_H_
