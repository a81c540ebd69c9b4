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

#include "sbsr/manifest.h"

#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "sbsr/binary_io.h"
#include "sbsr/errors.h"

namespace sbsr {
namespace {

using nlohmann::json;

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw InputError("manifest line " + std::to_string(line) + ": " + message);
}

std::string required_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(line, std::string("missing field \"") + key + "\"");
  if (!it->is_string() || it->get_ref<const std::string&>().empty()) {
    fail(line, std::string("field \"") + key + "\" must be a non-empty string");
  }
  return it->get<std::string>();
}

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

std::vector<std::size_t> DatasetManifest::indices_of(Domain d) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].domain == d) out.push_back(i);
  }
  return out;
}

DatasetManifest parse_manifest(std::istream& in,
                               const std::filesystem::path& base_dir) {
  DatasetManifest manifest;
  std::set<std::string> ids;
  std::map<std::string, std::vector<std::size_t>> model_view_lines;
  std::optional<std::string> split;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      fail(line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) fail(line, "expected a JSON object");

    ManifestEntry entry;
    entry.id = required_string(obj, "id", line);
    entry.class_label = required_string(obj, "class_label", line);
    const std::string domain = required_string(obj, "domain", line);
    const auto parsed = parse_domain(domain);
    if (!parsed) fail(line, "unknown domain \"" + domain + "\"");
    entry.domain = *parsed;
    entry.image_path = required_string(obj, "image_path", line);
    if (obj.contains("model_id") && !obj["model_id"].is_null()) {
      entry.model_id = required_string(obj, "model_id", line);
    }
    if (obj.contains("split")) {
      const std::string s = required_string(obj, "split", line);
      if (s != "train" && s != "test") fail(line, "split must be train or test");
      if (split && *split != s) fail(line, "mixed splits in one manifest");
      split = s;
    }

    if (!ids.insert(entry.id).second) fail(line, "duplicate id \"" + entry.id + "\"");
    if (entry.domain == Domain::kView) {
      if (!entry.model_id) fail(line, "view entry without model_id");
      auto& lines = model_view_lines[*entry.model_id];
      lines.push_back(line);
      if (lines.size() > 2) {
        fail(line, "model \"" + *entry.model_id + "\" has more than 2 views");
      }
    }
    std::filesystem::path p(entry.image_path);
    if (p.is_relative() && !base_dir.empty()) {
      entry.image_path = (base_dir / p).lexically_normal().string();
    }
    manifest.entries.push_back(std::move(entry));
  }
  for (const auto& [model, lines] : model_view_lines) {
    if (lines.size() != 2) {
      fail(lines.front(), "model \"" + model + "\" has " +
                              std::to_string(lines.size()) + " view(s), expected 2");
    }
  }
  if (split) manifest.split = *split;
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path.string());
  try {
    return parse_manifest(in, path.parent_path());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string manifest_line(const ManifestEntry& entry, const std::string& split) {
  json obj = json::object();
  obj["id"] = entry.id;
  obj["class_label"] = entry.class_label;
  obj["domain"] = std::string(domain_name(entry.domain));
  obj["image_path"] = entry.image_path;
  if (entry.model_id) obj["model_id"] = *entry.model_id;
  obj["split"] = split;
  return obj.dump();
}

void write_manifest(const std::filesystem::path& path,
                    const DatasetManifest& manifest) {
  std::ostringstream out;
  for (const ManifestEntry& e : manifest.entries) {
    out << manifest_line(e, manifest.split) << '\n';
  }
  write_file_bytes(path, out.str());
}

}  // namespace sbsr
