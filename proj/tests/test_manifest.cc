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

#include <random>
#include <sstream>

#include "sbsr/errors.h"
#include "sbsr/manifest.h"
#include "support/generators.h"

namespace sbsr {
namespace {

DatasetManifest parse(const std::string& text, const std::filesystem::path& base = {}) {
  std::istringstream in(text);
  return parse_manifest(in, base);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

const char* kView1 =
    R"({"id":"m_v1","class_label":"cup","domain":"view","image_path":"a.pgm","model_id":"m"})";
const char* kView2 =
    R"({"id":"m_v2","class_label":"cup","domain":"view","image_path":"b.pgm","model_id":"m"})";

TEST(Manifest, ParsesAndResolvesRelativePaths) {
  const std::string text = std::string(kView1) + "\n\n" + kView2 + "\n" +
      R"({"id":"s","class_label":"cup","domain":"sketch","image_path":"/abs/s.png"})" + "\n";
  const DatasetManifest m = parse(text, "/data/set");
  ASSERT_EQ(m.entries.size(), 3u);
  EXPECT_EQ(m.entries[0].image_path, "/data/set/a.pgm");
  EXPECT_EQ(m.entries[2].image_path, "/abs/s.png");
  EXPECT_EQ(m.entries[0].model_id, "m");
  EXPECT_FALSE(m.entries[2].model_id.has_value());
  EXPECT_EQ(m.split, "train");
  EXPECT_EQ(m.indices_of(Domain::kView), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(m.indices_of(Domain::kSketch), (std::vector<std::size_t>{2}));
}

TEST(Manifest, ErrorsNameTheLine) {
  EXPECT_NE(error_of(std::string(kView1) + "\n" + kView2 + "\n{oops\n").find("line 3"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"id":"x","domain":"sketch","image_path":"p"})").find("line 1"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"id":"x","class_label":"c","domain":"photo","image_path":"p"})"),
            "");
  EXPECT_NE(error_of(R"({"id":"x","class_label":"c","domain":"view","image_path":"p"})"), "");
  const std::string dup = R"({"id":"s","class_label":"c","domain":"sketch","image_path":"p"})";
  EXPECT_NE(error_of(dup + "\n" + dup).find("line 2"), std::string::npos);
}

TEST(Manifest, ModelsNeedExactlyTwoViews) {
  EXPECT_NE(error_of(kView1), "");
  const std::string third =
      R"({"id":"m_v3","class_label":"cup","domain":"view","image_path":"c.pgm","model_id":"m"})";
  EXPECT_NE(error_of(std::string(kView1) + "\n" + kView2 + "\n" + third), "");
}

TEST(Manifest, SplitMustAgree) {
  const std::string a = R"({"id":"a","class_label":"c","domain":"sketch","image_path":"p","split":"test"})";
  const std::string b = R"({"id":"b","class_label":"c","domain":"sketch","image_path":"p","split":"train"})";
  EXPECT_EQ(parse(a).split, "test");
  EXPECT_NE(error_of(a + "\n" + b), "");
}

TEST(Manifest, WriteParseRoundTripOverRandomManifests) {
  std::mt19937_64 rng(11);
  testing_support::TempDir dir;
  for (int trial = 0; trial < 20; ++trial) {
    DatasetManifest m;
    m.split = trial % 2 ? "test" : "train";
    const std::size_t models = 1 + rng() % 4;
    for (std::size_t i = 0; i < models; ++i) {
      for (int v = 1; v <= 2; ++v) {
        m.entries.push_back({"m" + std::to_string(i) + "_v" + std::to_string(v),
                             "c" + std::to_string(rng() % 3), Domain::kView,
                             (dir / ("v" + std::to_string(i) + std::to_string(v) + ".pgm")).string(),
                             "m" + std::to_string(i)});
      }
      m.entries[m.entries.size() - 1].class_label = m.entries[m.entries.size() - 2].class_label;
    }
    for (std::size_t i = 0; i < rng() % 5; ++i) {
      m.entries.push_back({"s" + std::to_string(i), "c", Domain::kSketch,
                           (dir / "s.pgm").string(), std::nullopt});
    }
    write_manifest(dir / "m.jsonl", m);
    const DatasetManifest back = load_manifest(dir / "m.jsonl");
    EXPECT_EQ(back.entries, m.entries);
    EXPECT_EQ(back.split, m.split);
  }
}

TEST(Manifest, MissingFileIsAnInputError) {
  EXPECT_THROW(load_manifest("/nonexistent/manifest.jsonl"), InputError);
}

}  // namespace
}  // namespace sbsr
