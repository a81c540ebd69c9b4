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

#ifndef SBSR_SIAMESE_H_
#define SBSR_SIAMESE_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sbsr/checkpoint.h"
#include "sbsr/digest.h"
#include "sbsr/domain.h"
#include "sbsr/network.h"

namespace sbsr {

// One embedding network per domain. In identical mode a single parameter
// set serves both domains and the two handles alias it.
class SiameseModel {
 public:
  static SiameseModel create(std::uint64_t seed, bool identical = false);

  bool identical() const { return nets_.size() == 1; }

  NetworkParams<float>& sketch_net() { return nets_[slot(Domain::kSketch)]; }
  NetworkParams<float>& view_net() { return nets_[slot(Domain::kView)]; }
  const NetworkParams<float>& sketch_net() const {
    return nets_[slot(Domain::kSketch)];
  }
  const NetworkParams<float>& view_net() const {
    return nets_[slot(Domain::kView)];
  }
  const NetworkParams<float>& net(Domain d) const { return nets_[slot(d)]; }

  // Index of the parameter set that serves `d`.
  std::size_t slot(Domain d) const {
    return identical() ? 0 : static_cast<std::size_t>(d);
  }
  std::size_t slot_count() const { return nets_.size(); }
  NetworkParams<float>& slot_params(std::size_t s) { return nets_.at(s); }
  const NetworkParams<float>& slot_params(std::size_t s) const {
    return nets_.at(s);
  }

  std::size_t completed_epochs() const { return completed_epochs_; }
  void set_completed_epochs(std::size_t n) { completed_epochs_ = n; }

  std::vector<NamedTensor> to_tensors() const;
  static SiameseModel from_tensors(const std::vector<NamedTensor>& tensors);

  void save(const std::filesystem::path& path) const;
  static SiameseModel load(const std::filesystem::path& path);

  // SHA-256 of the serialized checkpoint bytes.
  Fingerprint fingerprint() const;

  friend bool operator==(const SiameseModel&, const SiameseModel&) = default;

 private:
  std::vector<NetworkParams<float>> nets_;
  std::size_t completed_epochs_ = 0;
};

}  // namespace sbsr

#endif  // SBSR_SIAMESE_H_
