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

#include "sbsr/layers.h"

#include <Eigen/Core>

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

namespace sbsr {
namespace {

template <typename T>
using RowMatrix =
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatrixMap = Eigen::Map<RowMatrix<T>>;
template <typename T>
using ConstMatrixMap = Eigen::Map<const RowMatrix<T>>;
template <typename T>
using VectorMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>>;
template <typename T>
using ConstVectorMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

[[noreturn]] void shape_error(const char* op, const Shape& got,
                              const Shape& expected) {
  throw std::invalid_argument(std::string(op) + ": input shape " +
                              to_string(got) + " incompatible with " +
                              to_string(expected));
}

template <typename T>
void check_conv_input(const char* op, const BasicTensor<T>& input,
                      const ConvStage<T>& stage) {
  const std::size_t k = stage.kernel_size();
  if (input.rank() != 3 || input.dim(0) != stage.in_maps() ||
      input.dim(1) < k || input.dim(2) < k) {
    shape_error(op, input.shape(), stage.kernels.shape());
  }
}

// cols[(c*k + ky)*k + kx, oy*ow + ox] = input[c, oy+ky, ox+kx]
template <typename T>
RowMatrix<T> im2col(const BasicTensor<T>& input, std::size_t k) {
  const std::size_t channels = input.dim(0);
  const std::size_t h = input.dim(1);
  const std::size_t w = input.dim(2);
  const std::size_t oh = h - k + 1;
  const std::size_t ow = w - k + 1;
  RowMatrix<T> cols(channels * k * k, oh * ow);
  const T* src = input.raw();
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t ky = 0; ky < k; ++ky) {
      for (std::size_t kx = 0; kx < k; ++kx) {
        T* row = cols.data() + ((c * k + ky) * k + kx) * oh * ow;
        for (std::size_t oy = 0; oy < oh; ++oy) {
          std::memcpy(row + oy * ow, src + (c * h + oy + ky) * w + kx,
                      ow * sizeof(T));
        }
      }
    }
  }
  return cols;
}

template <typename T>
void col2im_add(const RowMatrix<T>& cols, std::size_t k,
                BasicTensor<T>& out) {
  const std::size_t channels = out.dim(0);
  const std::size_t h = out.dim(1);
  const std::size_t w = out.dim(2);
  const std::size_t oh = h - k + 1;
  const std::size_t ow = w - k + 1;
  T* dst = out.raw();
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t ky = 0; ky < k; ++ky) {
      for (std::size_t kx = 0; kx < k; ++kx) {
        const T* row = cols.data() + ((c * k + ky) * k + kx) * oh * ow;
        for (std::size_t oy = 0; oy < oh; ++oy) {
          T* out_row = dst + (c * h + oy + ky) * w + kx;
          const T* in_row = row + oy * ow;
          for (std::size_t ox = 0; ox < ow; ++ox) out_row[ox] += in_row[ox];
        }
      }
    }
  }
}

}  // namespace

template <typename T>
BasicTensor<T> conv_forward(const BasicTensor<T>& input,
                            const ConvStage<T>& stage) {
  check_conv_input("conv_forward", input, stage);
  const std::size_t k = stage.kernel_size();
  const std::size_t oh = input.dim(1) - k + 1;
  const std::size_t ow = input.dim(2) - k + 1;
  const std::size_t maps = stage.out_maps();
  const std::size_t depth = stage.in_maps() * k * k;

  const RowMatrix<T> cols = im2col(input, k);
  BasicTensor<T> out({maps, oh, ow});
  MatrixMap<T> out_mat(out.raw(), maps, oh * ow);
  ConstMatrixMap<T> weights(stage.kernels.raw(), maps, depth);
  out_mat.noalias() = weights * cols;
  for (std::size_t m = 0; m < maps; ++m) {
    out_mat.row(m).array() += stage.bias[m];
  }
  return out;
}

template <typename T>
void conv_backward(const BasicTensor<T>& input, const ConvStage<T>& stage,
                   const BasicTensor<T>& upstream, ConvStage<T>& grad,
                   BasicTensor<T>* input_grad) {
  check_conv_input("conv_backward", input, stage);
  const std::size_t k = stage.kernel_size();
  const std::size_t oh = input.dim(1) - k + 1;
  const std::size_t ow = input.dim(2) - k + 1;
  const std::size_t maps = stage.out_maps();
  const std::size_t depth = stage.in_maps() * k * k;
  const Shape expected{maps, oh, ow};
  if (upstream.shape() != expected) {
    shape_error("conv_backward upstream", upstream.shape(), expected);
  }
  if (grad.kernels.shape() != stage.kernels.shape()) {
    shape_error("conv_backward gradient", grad.kernels.shape(),
                stage.kernels.shape());
  }

  const RowMatrix<T> cols = im2col(input, k);
  ConstMatrixMap<T> dout(upstream.raw(), maps, oh * ow);
  MatrixMap<T> dweights(grad.kernels.raw(), maps, depth);
  dweights.noalias() += dout * cols.transpose();
  VectorMap<T> dbias(grad.bias.raw(), maps);
  dbias += dout.rowwise().sum();

  if (input_grad != nullptr) {
    ConstMatrixMap<T> weights(stage.kernels.raw(), maps, depth);
    RowMatrix<T> dcols(depth, oh * ow);
    dcols.noalias() = weights.transpose() * dout;
    *input_grad = BasicTensor<T>(input.shape());
    col2im_add(dcols, k, *input_grad);
  }
}

template <typename T>
PoolResult<T> maxpool_forward(const BasicTensor<T>& input, std::size_t p) {
  if (input.rank() != 3 || p == 0 || input.dim(1) % p != 0 ||
      input.dim(2) % p != 0) {
    throw std::invalid_argument("maxpool_forward: shape " +
                                to_string(input.shape()) +
                                " is not divisible by pool window " +
                                std::to_string(p));
  }
  const std::size_t channels = input.dim(0);
  const std::size_t h = input.dim(1);
  const std::size_t w = input.dim(2);
  const std::size_t oh = h / p;
  const std::size_t ow = w / p;

  PoolResult<T> result{BasicTensor<T>({channels, oh, ow}),
                       ArgmaxMask{input.shape(), {}}};
  result.mask.index.resize(channels * oh * ow);
  std::size_t cell = 0;
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox, ++cell) {
        std::size_t best = (c * h + oy * p) * w + ox * p;
        T best_value = input[best];
        for (std::size_t dy = 0; dy < p; ++dy) {
          for (std::size_t dx = 0; dx < p; ++dx) {
            const std::size_t idx = (c * h + oy * p + dy) * w + ox * p + dx;
            if (input[idx] > best_value) {
              best_value = input[idx];
              best = idx;
            }
          }
        }
        result.output[cell] = best_value;
        result.mask.index[cell] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return result;
}

template <typename T>
BasicTensor<T> maxpool_backward(const BasicTensor<T>& upstream,
                                const ArgmaxMask& mask) {
  if (upstream.size() != mask.index.size()) {
    throw std::invalid_argument(
        "maxpool_backward: upstream " + to_string(upstream.shape()) +
        " does not match mask of " + std::to_string(mask.index.size()) +
        " cells");
  }
  BasicTensor<T> grad(mask.input_shape);
  for (std::size_t i = 0; i < mask.index.size(); ++i) {
    grad[mask.index[i]] += upstream[i];
  }
  return grad;
}

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& input) {
  BasicTensor<T> out = input;
  for (T& v : out.data()) v = v > T{0} ? v : T{0};
  return out;
}

template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& input,
                             const BasicTensor<T>& upstream) {
  if (input.shape() != upstream.shape()) {
    shape_error("relu_backward", upstream.shape(), input.shape());
  }
  BasicTensor<T> out = upstream;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(input[i] > T{0})) out[i] = T{0};
  }
  return out;
}

template <typename T>
BasicTensor<T> linear_forward(std::span<const T> input,
                              const LinearStage<T>& stage) {
  if (input.size() != stage.in_dim()) {
    shape_error("linear_forward", Shape{input.size()},
                stage.weights.shape());
  }
  const std::size_t out_dim = stage.out_dim();
  BasicTensor<T> out = stage.bias;
  ConstMatrixMap<T> weights(stage.weights.raw(), out_dim, stage.in_dim());
  const Vector<T> x = ConstVectorMap<T>(input.data(), input.size());
  VectorMap<T>(out.raw(), out_dim).noalias() += weights * x;
  return out;
}

template <typename T>
void linear_backward(std::span<const T> input, const LinearStage<T>& stage,
                     std::span<const T> upstream, LinearStage<T>& grad,
                     std::span<T> input_grad) {
  const std::size_t out_dim = stage.out_dim();
  const std::size_t in_dim = stage.in_dim();
  if (input.size() != in_dim || upstream.size() != out_dim) {
    shape_error("linear_backward", Shape{input.size(), upstream.size()},
                stage.weights.shape());
  }
  // Spans may point anywhere; aligned copies keep the arithmetic
  // independent of the caller's allocation.
  const Vector<T> x = ConstVectorMap<T>(input.data(), in_dim);
  const Vector<T> dy = ConstVectorMap<T>(upstream.data(), out_dim);
  MatrixMap<T>(grad.weights.raw(), out_dim, in_dim).noalias() +=
      dy * x.transpose();
  VectorMap<T>(grad.bias.raw(), out_dim) += dy;
  if (!input_grad.empty()) {
    if (input_grad.size() != in_dim) {
      shape_error("linear_backward input_grad", Shape{input_grad.size()},
                  Shape{in_dim});
    }
    ConstMatrixMap<T> weights(stage.weights.raw(), out_dim, in_dim);
    Vector<T> dx(in_dim);
    dx.noalias() = weights.transpose() * dy;
    VectorMap<T>(input_grad.data(), in_dim) = dx;
  }
}

#define SBSR_INSTANTIATE_LAYERS(T)                                            \
  template BasicTensor<T> conv_forward(const BasicTensor<T>&,                 \
                                       const ConvStage<T>&);                  \
  template void conv_backward(const BasicTensor<T>&, const ConvStage<T>&,     \
                              const BasicTensor<T>&, ConvStage<T>&,           \
                              BasicTensor<T>*);                               \
  template PoolResult<T> maxpool_forward(const BasicTensor<T>&, std::size_t); \
  template BasicTensor<T> maxpool_backward(const BasicTensor<T>&,             \
                                           const ArgmaxMask&);                \
  template BasicTensor<T> relu(const BasicTensor<T>&);                        \
  template BasicTensor<T> relu_backward(const BasicTensor<T>&,                \
                                        const BasicTensor<T>&);               \
  template BasicTensor<T> linear_forward(std::span<const T>,                  \
                                         const LinearStage<T>&);              \
  template void linear_backward(std::span<const T>, const LinearStage<T>&,    \
                                std::span<const T>, LinearStage<T>&,          \
                                std::span<T>);

SBSR_INSTANTIATE_LAYERS(float)
SBSR_INSTANTIATE_LAYERS(double)

#undef SBSR_INSTANTIATE_LAYERS

}  // namespace sbsr
