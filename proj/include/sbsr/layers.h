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

// The four layer kinds of the embedding network: valid stride-1
// convolution, non-overlapping max pooling, ReLU and a fully connected map.
// Every forward has a matching hand-written backward. Backward passes
// accumulate parameter gradients into the caller's buffers so that several
// samples can share one gradient set.

#ifndef SBSR_LAYERS_H_
#define SBSR_LAYERS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sbsr/tensor.h"

namespace sbsr {

template <typename T>
struct ConvStage {
  BasicTensor<T> kernels;  // [out_maps, in_maps, k, k]
  BasicTensor<T> bias;     // [out_maps]
  std::size_t pool = 1;    // p of the p x p max pooling that follows

  std::size_t out_maps() const { return kernels.dim(0); }
  std::size_t in_maps() const { return kernels.dim(1); }
  std::size_t kernel_size() const { return kernels.dim(2); }

  friend bool operator==(const ConvStage&, const ConvStage&) = default;
};

template <typename T>
struct LinearStage {
  BasicTensor<T> weights;  // [out, in]
  BasicTensor<T> bias;     // [out]

  std::size_t out_dim() const { return weights.dim(0); }
  std::size_t in_dim() const { return weights.dim(1); }

  friend bool operator==(const LinearStage&, const LinearStage&) = default;
};

// Winning flat input index for every pooled output cell.
struct ArgmaxMask {
  Shape input_shape;
  std::vector<std::uint32_t> index;
};

template <typename T>
struct PoolResult {
  BasicTensor<T> output;
  ArgmaxMask mask;
};

// Cross-correlation (no kernel flip) with per-map bias; output is
// [out_maps, h-k+1, w-k+1].
template <typename T>
BasicTensor<T> conv_forward(const BasicTensor<T>& input,
                            const ConvStage<T>& stage);

// Adds dL/dkernels and dL/dbias into `grad`. Writes dL/dinput when
// `input_grad` is non-null.
template <typename T>
void conv_backward(const BasicTensor<T>& input, const ConvStage<T>& stage,
                   const BasicTensor<T>& upstream, ConvStage<T>& grad,
                   BasicTensor<T>* input_grad);

// Ties resolve to the first index in row-major window order.
template <typename T>
PoolResult<T> maxpool_forward(const BasicTensor<T>& input, std::size_t p);

template <typename T>
BasicTensor<T> maxpool_backward(const BasicTensor<T>& upstream,
                                const ArgmaxMask& mask);

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& input);

// upstream * [input > 0]; the subgradient at exactly 0 is 0.
template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& input,
                             const BasicTensor<T>& upstream);

template <typename T>
BasicTensor<T> linear_forward(std::span<const T> input,
                              const LinearStage<T>& stage);

// Adds dL/dW and dL/db into `grad`; writes dL/dx into `input_grad` unless it
// is empty.
template <typename T>
void linear_backward(std::span<const T> input, const LinearStage<T>& stage,
                     std::span<const T> upstream, LinearStage<T>& grad,
                     std::span<T> input_grad);

}  // namespace sbsr

#endif  // SBSR_LAYERS_H_
