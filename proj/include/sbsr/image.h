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

// Grayscale line-drawing images. Pixel values live in [0,1] with 1 = ink
// and 0 = background. Files store the usual dark-on-light convention.

#ifndef SBSR_IMAGE_H_
#define SBSR_IMAGE_H_

#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sbsr/tensor.h"

namespace sbsr {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<float> pixels;  // row-major

  GrayImage() = default;
  GrayImage(std::size_t w, std::size_t h, float fill = 0.0f)
      : width(w), height(h), pixels(w * h, fill) {}

  float& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  float at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
  bool empty() const { return pixels.empty(); }
  std::size_t ink_count() const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

// Decodes binary PGM (P5, maxval 255) or 8-bit grayscale PNG. Dark pixels
// become ink; an image whose mean ink exceeds 0.5 is inverted so strokes
// stay sparse. Throws InputError for other formats and depths.
GrayImage load_image(const std::filesystem::path& path);
GrayImage decode_image(std::string_view bytes, std::string_view what);

// Like decode_image for PNG but also accepts RGB(A) input, flattened onto
// white and converted to gray. Used for browser uploads.
GrayImage decode_png_lenient(std::string_view bytes);

std::string encode_pgm(const GrayImage& image);
std::string encode_png(const GrayImage& image);
void save_pgm(const std::filesystem::path& path, const GrayImage& image);

// Scales the ink bounding box (aspect preserved, bilinear) to fit 90x90
// and centers it on a 100x100 blank canvas. Throws BadQuery when the image
// has no ink.
Tensor preprocess(const GrayImage& image);

struct AffineParams {
  double rotation_deg = 0.0;
  double scale = 1.0;
  double tx = 0.0;
  double ty = 0.0;
};

// Rotation and isotropic scale about the image center, then translation;
// bilinear sampling with zero fill. Output keeps the input size.
GrayImage warp_affine(const GrayImage& image, const AffineParams& params);

// rotation ~ U(-10, 10) deg, scale ~ U(0.9, 1.1), translation ~ U(-5, 5) px.
AffineParams draw_augmentation(std::mt19937_64& rng);
GrayImage augment_sketch(const GrayImage& image, std::mt19937_64& rng);

}  // namespace sbsr

#endif  // SBSR_IMAGE_H_
