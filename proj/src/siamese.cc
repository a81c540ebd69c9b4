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

#include "sbsr/siamese.h"

#include <map>

#include "sbsr/errors.h"

namespace sbsr {
namespace {

constexpr const char* kEpochTensor = "meta.epochs";

const char* slot_prefix(bool identical, std::size_t slot) {
  if (identical) return "shared.";
  return slot == 0 ? "sketch." : "view.";
}

}  // namespace

SiameseModel SiameseModel::create(std::uint64_t seed, bool identical) {
  SiameseModel model;
  model.nets_.push_back(NetworkParams<float>::initialized(seed));
  if (!identical) {
    // Distinct streams so the two domains start from different weights.
    model.nets_.push_back(
        NetworkParams<float>::initialized(seed ^ 0x9E3779B97F4A7C15ULL));
  }
  return model;
}

std::vector<NamedTensor> SiameseModel::to_tensors() const {
  std::vector<NamedTensor> out;
  for (std::size_t s = 0; s < nets_.size(); ++s) {
    const std::string prefix = slot_prefix(identical(), s);
    nets_[s].for_each_tensor([&](const std::string& name, const Tensor& t) {
      out.push_back({prefix + name, t});
    });
  }
  out.push_back({kEpochTensor,
                 Tensor({1}, {static_cast<float>(completed_epochs_)})});
  return out;
}

SiameseModel SiameseModel::from_tensors(const std::vector<NamedTensor>& tensors) {
  std::map<std::string, const Tensor*> by_name;
  for (const NamedTensor& nt : tensors) {
    if (!by_name.emplace(nt.name, &nt.tensor).second) {
      throw InputError("checkpoint: duplicate tensor " + nt.name);
    }
  }
  SiameseModel model;
  const bool identical = by_name.count("shared.fc.weight") > 0;
  const std::size_t slots = identical ? 1 : 2;
  for (std::size_t s = 0; s < slots; ++s) {
    const std::string prefix = slot_prefix(identical, s);
    NetworkParams<float> params = NetworkParams<float>::zeros();
    params.for_each_tensor([&](const std::string& name, Tensor& t) {
      auto it = by_name.find(prefix + name);
      if (it == by_name.end()) {
        throw InputError("checkpoint: missing tensor " + prefix + name);
      }
      if (it->second->shape() != t.shape()) {
        throw InputError("checkpoint: tensor " + prefix + name + " has shape " +
                         to_string(it->second->shape()) + ", expected " +
                         to_string(t.shape()));
      }
      t = *it->second;
    });
    model.nets_.push_back(std::move(params));
  }
  if (auto it = by_name.find(kEpochTensor); it != by_name.end()) {
    model.completed_epochs_ = static_cast<std::size_t>((*it->second)[0]);
  }
  return model;
}

void SiameseModel::save(const std::filesystem::path& path) const {
  write_checkpoint(path, to_tensors());
}

SiameseModel SiameseModel::load(const std::filesystem::path& path) {
  return from_tensors(read_checkpoint(path));
}

Fingerprint SiameseModel::fingerprint() const {
  return sha256(encode_checkpoint(to_tensors()));
}

}  // namespace sbsr
