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

#include "sbsr/image.h"

#include <png.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "sbsr/binary_io.h"
#include "sbsr/errors.h"
#include "sbsr/network.h"

namespace sbsr {
namespace {

constexpr double kActiveArea = 90.0;

// Maps 8-bit dark-on-light samples to ink values and normalizes polarity.
GrayImage from_gray8(std::size_t w, std::size_t h, const unsigned char* data,
                     std::string_view what) {
  GrayImage img(w, h);
  double sum = 0.0;
  for (std::size_t i = 0; i < w * h; ++i) {
    img.pixels[i] = 1.0f - static_cast<float>(data[i]) / 255.0f;
    sum += img.pixels[i];
  }
  if (!img.pixels.empty() && sum / static_cast<double>(img.pixels.size()) > 0.5) {
    if (sum == static_cast<double>(img.pixels.size())) {
      spdlog::warn("{}: image is entirely ink; treating it as blank", what);
    }
    for (float& v : img.pixels) v = 1.0f - v;
  }
  return img;
}

std::size_t parse_pgm_int(std::string_view bytes, std::size_t& pos,
                          std::string_view what) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  std::size_t value = 0;
  const std::size_t start = pos;
  while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    value = value * 10 + static_cast<std::size_t>(bytes[pos] - '0');
    if (value > (1u << 24)) throw InputError(std::string(what) + ": PGM header value too large");
    ++pos;
  }
  if (pos == start) throw InputError(std::string(what) + ": malformed PGM header");
  return value;
}

GrayImage decode_pgm(std::string_view bytes, std::string_view what) {
  std::size_t pos = 2;
  const std::size_t w = parse_pgm_int(bytes, pos, what);
  const std::size_t h = parse_pgm_int(bytes, pos, what);
  const std::size_t maxval = parse_pgm_int(bytes, pos, what);
  if (maxval != 255) {
    throw InputError(std::string(what) + ": unsupported PGM maxval " +
                     std::to_string(maxval) + " (only 8-bit is supported)");
  }
  if (w == 0 || h == 0) throw InputError(std::string(what) + ": empty PGM");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw InputError(std::string(what) + ": malformed PGM header");
  }
  ++pos;
  if (bytes.size() - pos < w * h) throw InputError(std::string(what) + ": truncated PGM");
  return from_gray8(w, h, reinterpret_cast<const unsigned char*>(bytes.data() + pos),
                    what);
}

bool is_png(std::string_view bytes) {
  return bytes.size() >= 8 &&
         png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) == 0;
}

GrayImage decode_png(std::string_view bytes, std::string_view what, bool lenient) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw InputError(std::string(what) + ": " + image.message);
  }
  if (!lenient && image.format != PNG_FORMAT_GRAY) {
    png_image_free(&image);
    throw InputError(std::string(what) +
                     ": only 8-bit grayscale PNG is supported");
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
  const png_color white{255, 255, 255};
  if (!png_image_finish_read(&image, &white, buffer.data(), 0, nullptr)) {
    throw InputError(std::string(what) + ": " + image.message);
  }
  return from_gray8(image.width, image.height, buffer.data(), what);
}

std::vector<unsigned char> to_gray8(const GrayImage& image) {
  std::vector<unsigned char> out(image.pixels.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const float ink = std::clamp(image.pixels[i], 0.0f, 1.0f);
    out[i] = static_cast<unsigned char>(std::lround((1.0f - ink) * 255.0f));
  }
  return out;
}

// Bilinear sample at continuous pixel-index coordinates; zero outside.
float sample_bilinear(const GrayImage& img, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double ax = x - fx;
  const double ay = y - fy;
  const auto x0 = static_cast<long long>(fx);
  const auto y0 = static_cast<long long>(fy);
  auto px = [&](long long xx, long long yy) -> double {
    if (xx < 0 || yy < 0 || xx >= static_cast<long long>(img.width) ||
        yy >= static_cast<long long>(img.height)) {
      return 0.0;
    }
    return img.at(static_cast<std::size_t>(xx), static_cast<std::size_t>(yy));
  };
  double v = 0.0;
  if (ax < 1.0 && ay < 1.0) v += (1 - ax) * (1 - ay) * px(x0, y0);
  if (ax > 0.0 && ay < 1.0) v += ax * (1 - ay) * px(x0 + 1, y0);
  if (ax < 1.0 && ay > 0.0) v += (1 - ax) * ay * px(x0, y0 + 1);
  if (ax > 0.0 && ay > 0.0) v += ax * ay * px(x0 + 1, y0 + 1);
  return static_cast<float>(v);
}

}  // namespace

std::size_t GrayImage::ink_count() const {
  return static_cast<std::size_t>(
      std::count_if(pixels.begin(), pixels.end(), [](float v) { return v > 0.0f; }));
}

GrayImage decode_image(std::string_view bytes, std::string_view what) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
    return decode_pgm(bytes, what);
  }
  if (is_png(bytes)) return decode_png(bytes, what, /*lenient=*/false);
  throw InputError(std::string(what) + ": unsupported image format");
}

GrayImage decode_png_lenient(std::string_view bytes) {
  if (!is_png(bytes)) throw BadQuery("query image is not a PNG");
  try {
    return decode_png(bytes, "query", /*lenient=*/true);
  } catch (const InputError& e) {
    throw BadQuery(e.what());
  }
}

GrayImage load_image(const std::filesystem::path& path) {
  return decode_image(read_file_bytes(path), path.string());
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  const std::vector<unsigned char> gray = to_gray8(image);
  out.append(reinterpret_cast<const char*>(gray.data()), gray.size());
  return out;
}

std::string encode_png(const GrayImage& image) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_GRAY;
  const std::vector<unsigned char> gray = to_gray8(image);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, gray.data(), 0, nullptr)) {
    throw Error(std::string("PNG encode failed: ") + png.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, gray.data(), 0,
                                 nullptr)) {
    throw Error(std::string("PNG encode failed: ") + png.message);
  }
  out.resize(size);
  return out;
}

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
  write_file_bytes(path, encode_pgm(image));
}

Tensor preprocess(const GrayImage& image) {
  if (image.empty()) throw BadQuery("cannot preprocess an empty image");
  std::size_t x_min = image.width, y_min = image.height, x_max = 0, y_max = 0;
  bool any = false;
  for (std::size_t y = 0; y < image.height; ++y) {
    for (std::size_t x = 0; x < image.width; ++x) {
      if (image.at(x, y) > 0.0f) {
        any = true;
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (!any) throw BadQuery("image has no ink; nothing to query");

  const double box_w = static_cast<double>(x_max - x_min + 1);
  const double box_h = static_cast<double>(y_max - y_min + 1);
  const double scale = kActiveArea / std::max(box_w, box_h);
  const double center = static_cast<double>(kImageSize) / 2.0;
  const double left = center - box_w * scale / 2.0;
  const double top = center - box_h * scale / 2.0;

  Tensor out({1, kImageSize, kImageSize});
  for (std::size_t v = 0; v < kImageSize; ++v) {
    const double sy = static_cast<double>(y_min) +
                      (static_cast<double>(v) + 0.5 - top) / scale - 0.5;
    for (std::size_t u = 0; u < kImageSize; ++u) {
      const double sx = static_cast<double>(x_min) +
                        (static_cast<double>(u) + 0.5 - left) / scale - 0.5;
      out.at(0, v, u) = std::clamp(sample_bilinear(image, sx, sy), 0.0f, 1.0f);
    }
  }
  return out;
}

GrayImage warp_affine(const GrayImage& image, const AffineParams& params) {
  GrayImage out(image.width, image.height);
  const double cx = static_cast<double>(image.width) / 2.0;
  const double cy = static_cast<double>(image.height) / 2.0;
  const double theta = params.rotation_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // Inverse map: src = C + R(-theta) (dst - C - t) / scale.
  for (std::size_t v = 0; v < image.height; ++v) {
    for (std::size_t u = 0; u < image.width; ++u) {
      const double dx = (static_cast<double>(u) + 0.5 - cx - params.tx) / params.scale;
      const double dy = (static_cast<double>(v) + 0.5 - cy - params.ty) / params.scale;
      const double sx = cx + c * dx + s * dy - 0.5;
      const double sy = cy - s * dx + c * dy - 0.5;
      out.at(u, v) = std::clamp(sample_bilinear(image, sx, sy), 0.0f, 1.0f);
    }
  }
  return out;
}

AffineParams draw_augmentation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rotation(-10.0, 10.0);
  std::uniform_real_distribution<double> scale(0.9, 1.1);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  AffineParams p;
  p.rotation_deg = rotation(rng);
  p.scale = scale(rng);
  p.tx = shift(rng);
  p.ty = shift(rng);
  return p;
}

GrayImage augment_sketch(const GrayImage& image, std::mt19937_64& rng) {
  return warp_affine(image, draw_augmentation(rng));
}

}  // namespace sbsr
