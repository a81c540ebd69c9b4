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


#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <random>
#include <thread>

#include "sbsr/digest.h"
#include "sbsr/errors.h"
#include "sbsr/image.h"
#include "sbsr/manifest.h"
#include "sbsr/service.h"
#include "support/generators.h"

#include <httplib.h>

namespace sbsr {
namespace {

using json = nlohmann::json;

std::string base64(std::string_view raw) {
  std::string out(4 * ((raw.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(raw.data()),
                                static_cast<int>(raw.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing_support::TempDir;
    std::mt19937_64 rng(1);
    DatasetManifest m;
    for (const char* model : {"alpha", "beta", "gamma"}) {
      for (int v = 1; v <= 2; ++v) {
        const std::string id = std::string(model) + "_v" + std::to_string(v);
        save_pgm(*dir_ / (id + ".pgm"), testing_support::random_sketch(rng));
        m.entries.push_back({id, model == std::string("gamma") ? "g" : "ab", Domain::kView,
                             (*dir_ / (id + ".pgm")).string(), model});
      }
    }
    save_pgm(*dir_ / "s.pgm", testing_support::random_sketch(rng));
    m.entries.push_back({"s", "ab", Domain::kSketch, (*dir_ / "s.pgm").string(), {}});
    SiameseModel model = SiameseModel::create(2);
    FeatureIndex index = extract_features(model, m);
    service_ = new RetrievalService(std::move(model), std::move(index), dir_->path());
  }
  static void TearDownTestSuite() {
    delete service_;
    delete dir_;
  }

  static std::string query_body(int k = -1) {
    std::mt19937_64 rng(5);
    json body{{"image_png_base64", base64(encode_png(testing_support::random_sketch(rng)))}};
    if (k >= 0) body["k"] = k;
    return body.dump();
  }

  static testing_support::TempDir* dir_;
  static RetrievalService* service_;
};
testing_support::TempDir* ServiceTest::dir_ = nullptr;
RetrievalService* ServiceTest::service_ = nullptr;

TEST_F(ServiceTest, Health) {
  const HttpReply r = service_->health();
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body), json({{"status", "ok"}}));
}

TEST_F(ServiceTest, QueryRanksModels) {
  const HttpReply r = service_->query(query_body());
  ASSERT_EQ(r.status, 200) << r.body;
  const json j = json::parse(r.body);
  ASSERT_EQ(j["results"].size(), 3u);  // default k exceeds the gallery
  EXPECT_GE(j["elapsed_ms"].get<double>(), 0.0);
  EXPECT_LE(j["results"][0]["distance"].get<double>(), j["results"][2]["distance"].get<double>());
  EXPECT_EQ(j["results"][0]["view_image_refs"].size(), 2u);
  EXPECT_EQ(json::parse(service_->query(query_body(1)).body)["results"].size(), 1u);
}

TEST_F(ServiceTest, QueryRejectsBadRequests) {
  EXPECT_EQ(service_->query("").status, 400);
  EXPECT_EQ(service_->query("{not json").status, 400);
  EXPECT_EQ(service_->query("[]").status, 400);
  EXPECT_EQ(service_->query(R"({"k":3})").status, 400);
  EXPECT_EQ(service_->query(query_body(0)).status, 400);
  EXPECT_EQ(service_->query(query_body(101)).status, 400);
  EXPECT_EQ(service_->query(R"({"image_png_base64":"%%%"})").status, 400);
  EXPECT_EQ(service_->query(json{{"image_png_base64", base64("GIF89a")}}.dump()).status, 400);
  const std::string blank = base64(encode_png(GrayImage(100, 100)));
  const HttpReply r = service_->query(json{{"image_png_base64", blank}}.dump());
  EXPECT_EQ(r.status, 400);
  EXPECT_TRUE(json::parse(r.body).contains("error"));
}

TEST_F(ServiceTest, ViewImages) {
  const HttpReply r = service_->view_image("beta", "2");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type, "image/png");
  EXPECT_EQ(decode_image(r.body, "reply"), load_image(*dir_ / "beta_v2.pgm"));
  EXPECT_EQ(service_->view_image("beta", "3").status, 404);
  EXPECT_EQ(service_->view_image("delta", "1").status, 404);
  EXPECT_EQ(service_->view_image("../s", "1").status, 404);
}

TEST_F(ServiceTest, EmbeddingListsEveryEntry) {
  const HttpReply r = service_->embedding();
  ASSERT_EQ(r.status, 200);
  const json j = json::parse(r.body);
  ASSERT_EQ(j.size(), 7u);
  EXPECT_EQ(j[6]["id"], "s");
  EXPECT_EQ(j[6]["domain"], "sketch");
  EXPECT_EQ(j[0]["class"], "ab");
  EXPECT_TRUE(j[0]["x"].is_number());
}

TEST_F(ServiceTest, RejectsIndexFromAnotherModel) {
  FeatureIndex index;
  index.checkpoint_fingerprint[0] = 1;
  EXPECT_THROW(RetrievalService(SiameseModel::create(1), index, dir_->path()), InputError);
}

TEST_F(ServiceTest, TinyIndexHasNoEmbedding) {
  SiameseModel model = SiameseModel::create(4);
  FeatureIndex index;
  index.checkpoint_fingerprint = model.fingerprint();
  const RetrievalService tiny(std::move(model), index, dir_->path());
  EXPECT_EQ(tiny.embedding().status, 404);
}

TEST_F(ServiceTest, ServesOverHttp) {
  httplib::Server server;
  service_->mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "*");

  auto q = client.Post("/api/query", query_body(2), "application/json");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->status, 200);
  EXPECT_EQ(json::parse(q->body)["results"].size(), 2u);

  auto bad = client.Post("/api/query", "nope", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  auto view = client.Get("/api/models/alpha/views/1");
  ASSERT_TRUE(view);
  EXPECT_EQ(view->status, 200);
  EXPECT_EQ(view->get_header_value("Content-Type"), "image/png");

  auto emb = client.Get("/api/embedding");
  ASSERT_TRUE(emb);
  EXPECT_EQ(json::parse(emb->body).size(), 7u);

  auto pre = client.Options("/api/query");
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);
  EXPECT_NE(pre->get_header_value("Access-Control-Allow-Methods").find("POST"), std::string::npos);

  server.stop();
  worker.join();
}

TEST_F(ServiceTest, BusyPortIsABindError) {
  httplib::Server holder;
  const int port = holder.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread listener([&] { holder.listen_after_bind(); });
  holder.wait_until_ready();
  EXPECT_THROW(serve(*service_, "127.0.0.1", port), BindError);
  holder.stop();
  listener.join();
}

TEST(Base64, DecodesStandardAlphabet) {
  EXPECT_EQ(base64_decode("aGVsbG8="), "hello");
  EXPECT_EQ(base64_decode(base64(std::string("\x00\xff\x10", 3))), std::string("\x00\xff\x10", 3));
  EXPECT_THROW(base64_decode("a$=="), BadQuery);
}

}  // namespace
}  // namespace sbsr
