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


// Hand-rolled random generators and filesystem helpers for tests.

#ifndef SBSR_TESTS_SUPPORT_GENERATORS_H_
#define SBSR_TESTS_SUPPORT_GENERATORS_H_

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sbsr/image.h"
#include "sbsr/tensor.h"

namespace testing_support {

template <typename T>
sbsr::BasicTensor<T> random_tensor(const sbsr::Shape& shape, std::mt19937_64& rng,
                                   double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  sbsr::BasicTensor<T> t(shape);
  for (auto& v : t.data()) v = static_cast<T>(u(rng));
  return t;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Sparse random strokes on a blank canvas.
inline sbsr::GrayImage random_sketch(std::mt19937_64& rng, std::size_t size = 100) {
  sbsr::GrayImage img(size, size);
  std::uniform_int_distribution<std::size_t> pos(10, size - 11);
  for (int s = 0; s < 4; ++s) {
    const auto x0 = static_cast<double>(pos(rng)), y0 = static_cast<double>(pos(rng));
    const auto x1 = static_cast<double>(pos(rng)), y1 = static_cast<double>(pos(rng));
    for (int t = 0; t <= 200; ++t) {
      const double f = t / 200.0;
      img.at(static_cast<std::size_t>(x0 + f * (x1 - x0)),
             static_cast<std::size_t>(y0 + f * (y1 - y0))) = 1.0f;
    }
  }
  return img;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("sbsr_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support

#endif  // SBSR_TESTS_SUPPORT_GENERATORS_H_
