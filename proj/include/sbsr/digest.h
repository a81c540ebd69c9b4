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

#ifndef SBSR_DIGEST_H_
#define SBSR_DIGEST_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace sbsr {

using Fingerprint = std::array<std::uint8_t, 32>;

Fingerprint sha256(std::string_view bytes);
std::string to_hex(const Fingerprint& fp);

std::string base64_decode(std::string_view text);

}  // namespace sbsr

#endif  // SBSR_DIGEST_H_
