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

#ifndef SBSR_DOMAIN_H_
#define SBSR_DOMAIN_H_

#include <cstdint>
#include <optional>
#include <string_view>

namespace sbsr {

// Wire values are fixed: the index file stores them as one byte.
enum class Domain : std::uint8_t { kSketch = 0, kView = 1 };

constexpr std::string_view domain_name(Domain d) {
  return d == Domain::kSketch ? "sketch" : "view";
}

constexpr std::optional<Domain> parse_domain(std::string_view s) {
  if (s == "sketch") return Domain::kSketch;
  if (s == "view") return Domain::kView;
  return std::nullopt;
}

}  // namespace sbsr

#endif  // SBSR_DOMAIN_H_
