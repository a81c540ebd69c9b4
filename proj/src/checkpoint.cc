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

#include "sbsr/checkpoint.h"

#include "sbsr/binary_io.h"

namespace sbsr {

namespace {
constexpr std::string_view kMagic = "SBSR";
}

std::string encode_checkpoint(const std::vector<NamedTensor>& tensors) {
  ByteWriter w;
  w.bytes(kMagic);
  w.u16(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& nt : tensors) {
    w.str16(nt.name);
    const Shape& shape = nt.tensor.shape();
    if (shape.size() > 0xFF) throw Error("tensor rank too large: " + nt.name);
    w.u8(static_cast<std::uint8_t>(shape.size()));
    for (std::size_t d : shape) w.u32(static_cast<std::uint32_t>(d));
    for (float v : nt.tensor.data()) w.f32(v);
  }
  return w.take();
}

std::vector<NamedTensor> decode_checkpoint(const std::string& bytes) {
  ByteReader r(bytes, "checkpoint");
  if (r.bytes(kMagic.size()) != kMagic) r.fail("bad magic");
  const std::uint16_t version = r.u16();
  if (version != kCheckpointVersion) {
    r.fail("unsupported version " + std::to_string(version));
  }
  const std::uint32_t count = r.u32();
  std::vector<NamedTensor> tensors;
  tensors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor nt;
    nt.name = r.str16();
    const std::uint8_t ndim = r.u8();
    Shape shape(ndim);
    for (auto& d : shape) {
      d = r.u32();
      if (d == 0) r.fail("zero dimension in tensor " + nt.name);
    }
    const std::size_t n = shape_size(shape);
    if (n > r.remaining() / 4) r.fail("tensor " + nt.name + " truncated");
    std::vector<float> data(n);
    for (float& v : data) v = r.f32();
    nt.tensor = Tensor(std::move(shape), std::move(data));
    tensors.push_back(std::move(nt));
  }
  if (!r.at_end()) r.fail("trailing bytes");
  return tensors;
}

void write_checkpoint(const std::filesystem::path& path,
                      const std::vector<NamedTensor>& tensors) {
  write_file_bytes(path, encode_checkpoint(tensors));
}

std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file_bytes(path));
}

}  // namespace sbsr
