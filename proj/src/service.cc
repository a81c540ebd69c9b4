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


#include "sbsr/service.h"

#include <spdlog/spdlog.h>

#include <chrono>
#include <nlohmann/json.hpp>

#include "sbsr/binary_io.h"
#include "sbsr/digest.h"
#include "sbsr/errors.h"
#include "sbsr/image.h"
#include "sbsr/pipeline.h"

// After Eigen: <resolv.h>, pulled in by httplib, defines a `_res` macro
// that collides with Eigen parameter names.
#include <httplib.h>

namespace sbsr {
namespace {

using json = nlohmann::ordered_json;

HttpReply json_reply(int status, const json& body) {
  return {status, "application/json", body.dump()};
}

HttpReply error_reply(int status, const std::string& message) {
  return json_reply(status, json{{"error", message}});
}

void send(httplib::Response& res, const HttpReply& reply) {
  res.status = reply.status;
  res.set_content(reply.body, reply.content_type);
}

}  // namespace

RetrievalService::RetrievalService(SiameseModel model, FeatureIndex index,
                                   std::filesystem::path data_dir)
    : model_(std::move(model)),
      index_(std::move(index)),
      gallery_(index_),
      data_dir_(std::move(data_dir)) {
  if (model_.fingerprint() != index_.checkpoint_fingerprint) {
    throw InputError("feature index was built from a different checkpoint");
  }
  if (index_.entries.size() >= 3) projection_ = pca_2d(index_);
}

RetrievalService RetrievalService::load(const std::filesystem::path& checkpoint,
                                        const std::filesystem::path& index,
                                        const std::filesystem::path& data_dir) {
  return RetrievalService(SiameseModel::load(checkpoint), read_index(index), data_dir);
}

HttpReply RetrievalService::health() const { return json_reply(200, json{{"status", "ok"}}); }

HttpReply RetrievalService::query(std::string_view body) const {
  const auto start = std::chrono::steady_clock::now();
  if (body.empty()) return error_reply(400, "empty request body");
  const nlohmann::json request = nlohmann::json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object()) {
    return error_reply(400, "request body is not a JSON object");
  }
  const auto image_field = request.find("image_png_base64");
  if (image_field == request.end() || !image_field->is_string()) {
    return error_reply(400, "image_png_base64 must be a string");
  }
  std::size_t k = kDefaultQueryK;
  if (const auto k_field = request.find("k"); k_field != request.end()) {
    if (!k_field->is_number_integer() || k_field->get<long long>() < 1 ||
        k_field->get<long long>() > static_cast<long long>(kMaxQueryK)) {
      return error_reply(400, "k must be an integer in [1, 100]");
    }
    k = k_field->get<std::size_t>();
  }
  try {
    const GrayImage image = decode_png_lenient(base64_decode(image_field->get<std::string>()));
    const Feature feature = embed(model_.sketch_net(), preprocess(image));
    json out;
    out["results"] = ranked_results_json(gallery_.rank(feature), k);
    out["elapsed_ms"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    return json_reply(200, out);
  } catch (const BadQuery& e) {
    return error_reply(400, e.what());
  }
}

HttpReply RetrievalService::view_image(std::string_view model_id, std::string_view view) const {
  if (view != "1" && view != "2") return error_reply(404, "views are numbered 1 and 2");
  try {
    gallery_.class_of(model_id);  // only models in the gallery are served
  } catch (const std::out_of_range&) {
    return error_reply(404, "unknown model " + std::string(model_id));
  }
  const auto path = data_dir_ / view_image_name(std::string(model_id), view == "1" ? 1 : 2);
  try {
    return {200, "image/png", encode_png(load_image(path))};
  } catch (const InputError& e) {
    spdlog::warn("{}", e.what());
    return error_reply(404, "view image unavailable");
  }
}

HttpReply RetrievalService::embedding() const {
  if (!projection_) return error_reply(404, "embedding needs at least 3 index entries");
  json out = json::array();
  for (const EmbeddedPoint& p : projection_->points) {
    out.push_back({{"id", p.id},
                   {"domain", std::string(domain_name(p.domain))},
                   {"class", p.class_label},
                   {"x", p.x},
                   {"y", p.y}});
  }
  return json_reply(200, out);
}

void RetrievalService::mount(httplib::Server& server) const {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  server.Get("/api/health",
             [this](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  server.Post("/api/query", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, query(req.body));
  });
  server.Get(R"(/api/models/([^/]+)/views/([^/]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
               send(res, view_image(req.matches[1].str(), req.matches[2].str()));
             });
  server.Get("/api/embedding",
             [this](const httplib::Request&, httplib::Response& res) { send(res, embedding()); });
}

void serve(const RetrievalService& service, const std::string& host, int port) {
  httplib::Server server;
  // httplib defaults to SO_REUSEPORT, which would let a second server share
  // a port that is already taken.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  service.mount(server);
  if (!server.bind_to_port(host, port)) {
    throw BindError("cannot bind " + host + ":" + std::to_string(port));
  }
  spdlog::info("listening on {}:{}", host, port);
  server.listen_after_bind();
}

}  // namespace sbsr
