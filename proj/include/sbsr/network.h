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

// The fixed embedding network shared by both domains:
//
//   1x100x100 -> conv 13x13 (32) -> relu -> pool 4 -> 32x22x22
//             -> conv  7x7  (64) -> relu -> pool 2 -> 64x8x8
//             -> conv  3x3 (256) -> relu -> pool 2 -> 256x3x3
//             -> flatten 2304 -> linear 64
//
// Only map sizes are fixed by the architecture; the kernel sizes above are
// the stride-1 valid-convolution choice that reproduces them.

#ifndef SBSR_NETWORK_H_
#define SBSR_NETWORK_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "sbsr/layers.h"
#include "sbsr/tensor.h"

namespace sbsr {

inline constexpr std::size_t kImageSize = 100;
inline constexpr std::size_t kFeatureDim = 64;
inline constexpr std::size_t kFlatDim = 2304;

struct StageSpec {
  std::size_t out_maps;
  std::size_t kernel;
  std::size_t pool;
  std::size_t pooled_size;  // side of the map after pooling
};

inline constexpr std::array<StageSpec, 3> kConvSpecs{{
    {32, 13, 4, 22},
    {64, 7, 2, 8},
    {256, 3, 2, 3},
}};

template <typename T>
struct NetworkParams {
  std::array<ConvStage<T>, 3> conv;
  LinearStage<T> linear;

  // All-zero parameters with the fixed architecture's shapes.
  static NetworkParams zeros();
  // Weights ~ U(-a, a) with a = sqrt(6 / (fan_in + fan_out)); biases 0.
  static NetworkParams initialized(std::uint64_t seed);

  void add_scaled(const NetworkParams& other, T factor);
  void scale(T factor);
  bool all_finite() const;
  std::size_t parameter_count() const;

  // Visits (name, tensor) in canonical checkpoint order.
  template <typename F>
  void for_each_tensor(F&& visit) {
    for (std::size_t i = 0; i < conv.size(); ++i) {
      const std::string stage = "conv" + std::to_string(i + 1);
      visit(stage + ".weight", conv[i].kernels);
      visit(stage + ".bias", conv[i].bias);
    }
    visit(std::string("fc.weight"), linear.weights);
    visit(std::string("fc.bias"), linear.bias);
  }
  template <typename F>
  void for_each_tensor(F&& visit) const {
    const_cast<NetworkParams*>(this)->for_each_tensor(
        [&](const std::string& name, BasicTensor<T>& t) {
          visit(name, static_cast<const BasicTensor<T>&>(t));
        });
  }

  template <typename U>
  NetworkParams<U> cast() const {
    NetworkParams<U> out;
    for (std::size_t i = 0; i < conv.size(); ++i) {
      out.conv[i].kernels = conv[i].kernels.template cast<U>();
      out.conv[i].bias = conv[i].bias.template cast<U>();
      out.conv[i].pool = conv[i].pool;
    }
    out.linear.weights = linear.weights.template cast<U>();
    out.linear.bias = linear.bias.template cast<U>();
    return out;
  }

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

template <typename T>
using ParamGrads = NetworkParams<T>;

// Activations kept by a forward pass for the matching backward pass.
template <typename T>
struct ForwardTrace {
  bool valid = false;
  BasicTensor<T> image;
  std::array<BasicTensor<T>, 3> activated;  // relu(conv) before pooling
  std::array<ArgmaxMask, 3> masks;
  std::array<BasicTensor<T>, 3> pooled;     // (32,22,22) (64,8,8) (256,3,3)
  BasicTensor<T> features;                  // [64]
};

// Maps a [1,100,100] image with values in [0,1] to a 64-d feature vector.
// Fills `trace` when given.
template <typename T>
BasicTensor<T> net_forward(const NetworkParams<T>& params,
                           const BasicTensor<T>& image,
                           ForwardTrace<T>* trace = nullptr);

// Backpropagates dL/dfeatures through the traced forward pass, adding the
// parameter gradients into `grads`. The image gradient is written to
// `input_grad` when requested.
template <typename T>
void net_backward(const NetworkParams<T>& params, const ForwardTrace<T>& trace,
                  std::span<const T> upstream, ParamGrads<T>& grads,
                  BasicTensor<T>* input_grad = nullptr);

// params <- params - learning_rate * grads. Throws NonFiniteError on
// non-finite gradients, leaving params untouched.
template <typename T>
void sgd_step(NetworkParams<T>& params, const ParamGrads<T>& grads,
              T learning_rate);

extern template struct NetworkParams<float>;
extern template struct NetworkParams<double>;

}  // namespace sbsr

#endif  // SBSR_NETWORK_H_
