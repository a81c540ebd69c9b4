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

#include "sbsr/network.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "sbsr/errors.h"

namespace sbsr {
namespace {

template <typename T>
void expect_shape(const BasicTensor<T>& t, const Shape& expected,
                  const char* where) {
  if (t.shape() != expected) {
    throw std::logic_error(std::string("architecture violation at ") + where +
                           ": got " + to_string(t.shape()) + ", expected " +
                           to_string(expected));
  }
}

template <typename T>
void fill_uniform(BasicTensor<T>& t, double limit, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (T& v : t.data()) v = static_cast<T>(dist(rng));
}

}  // namespace

template <typename T>
NetworkParams<T> NetworkParams<T>::zeros() {
  NetworkParams params;
  std::size_t in_maps = 1;
  for (std::size_t i = 0; i < kConvSpecs.size(); ++i) {
    const StageSpec& spec = kConvSpecs[i];
    params.conv[i].kernels =
        BasicTensor<T>({spec.out_maps, in_maps, spec.kernel, spec.kernel});
    params.conv[i].bias = BasicTensor<T>({spec.out_maps});
    params.conv[i].pool = spec.pool;
    in_maps = spec.out_maps;
  }
  params.linear.weights = BasicTensor<T>({kFeatureDim, kFlatDim});
  params.linear.bias = BasicTensor<T>({kFeatureDim});
  return params;
}

template <typename T>
NetworkParams<T> NetworkParams<T>::initialized(std::uint64_t seed) {
  NetworkParams params = zeros();
  std::mt19937_64 rng(seed);
  for (ConvStage<T>& stage : params.conv) {
    const double area =
        static_cast<double>(stage.kernel_size() * stage.kernel_size());
    const double fan_in = static_cast<double>(stage.in_maps()) * area;
    const double fan_out = static_cast<double>(stage.out_maps()) * area;
    fill_uniform(stage.kernels, std::sqrt(6.0 / (fan_in + fan_out)), rng);
  }
  fill_uniform(params.linear.weights,
               std::sqrt(6.0 / static_cast<double>(kFlatDim + kFeatureDim)),
               rng);
  return params;
}

template <typename T>
void NetworkParams<T>::add_scaled(const NetworkParams& other, T factor) {
  auto axpy = [factor](BasicTensor<T>& dst, const BasicTensor<T>& src) {
    if (dst.shape() != src.shape()) {
      throw std::invalid_argument("add_scaled: shape " +
                                  to_string(src.shape()) + " vs " +
                                  to_string(dst.shape()));
    }
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
  };
  for (std::size_t i = 0; i < conv.size(); ++i) {
    axpy(conv[i].kernels, other.conv[i].kernels);
    axpy(conv[i].bias, other.conv[i].bias);
  }
  axpy(linear.weights, other.linear.weights);
  axpy(linear.bias, other.linear.bias);
}

template <typename T>
void NetworkParams<T>::scale(T factor) {
  for_each_tensor([factor](const std::string&, BasicTensor<T>& t) {
    for (T& v : t.data()) v *= factor;
  });
}

template <typename T>
bool NetworkParams<T>::all_finite() const {
  bool finite = true;
  for_each_tensor([&finite](const std::string&, const BasicTensor<T>& t) {
    finite = finite && t.all_finite();
  });
  return finite;
}

template <typename T>
std::size_t NetworkParams<T>::parameter_count() const {
  std::size_t n = 0;
  for_each_tensor(
      [&n](const std::string&, const BasicTensor<T>& t) { n += t.size(); });
  return n;
}

template <typename T>
BasicTensor<T> net_forward(const NetworkParams<T>& params,
                           const BasicTensor<T>& image,
                           ForwardTrace<T>* trace) {
  const Shape input_shape{1, kImageSize, kImageSize};
  if (image.shape() != input_shape) {
    throw std::invalid_argument("net_forward: image shape " +
                                to_string(image.shape()) + ", expected " +
                                to_string(input_shape));
  }
  for (T v : image.data()) {
    if (!(v >= T{0} && v <= T{1})) {
      throw std::invalid_argument("net_forward: image values must be in [0,1]");
    }
  }

  ForwardTrace<T> local;
  ForwardTrace<T>& t = trace != nullptr ? *trace : local;
  t.valid = false;
  t.image = image;
  const BasicTensor<T>* signal = &t.image;
  for (std::size_t i = 0; i < kConvSpecs.size(); ++i) {
    t.activated[i] = relu(conv_forward(*signal, params.conv[i]));
    PoolResult<T> pooled = maxpool_forward(t.activated[i], params.conv[i].pool);
    const StageSpec& spec = kConvSpecs[i];
    expect_shape(pooled.output,
                 {spec.out_maps, spec.pooled_size, spec.pooled_size},
                 "pooling output");
    t.pooled[i] = std::move(pooled.output);
    t.masks[i] = std::move(pooled.mask);
    signal = &t.pooled[i];
  }
  if (signal->size() != kFlatDim) {
    throw std::logic_error("architecture violation: flattened size " +
                           std::to_string(signal->size()));
  }
  t.features = linear_forward(signal->data(), params.linear);
  expect_shape(t.features, {kFeatureDim}, "feature output");
  t.valid = true;
  return t.features;
}

template <typename T>
void net_backward(const NetworkParams<T>& params, const ForwardTrace<T>& trace,
                  std::span<const T> upstream, ParamGrads<T>& grads,
                  BasicTensor<T>* input_grad) {
  if (!trace.valid) {
    throw std::logic_error("net_backward called without a forward trace");
  }
  if (upstream.size() != kFeatureDim) {
    throw std::invalid_argument("net_backward: upstream gradient of length " +
                                std::to_string(upstream.size()));
  }
  BasicTensor<T> signal_grad(trace.pooled.back().shape());
  linear_backward(trace.pooled.back().data(), params.linear, upstream,
                  grads.linear, signal_grad.data());
  for (std::size_t i = kConvSpecs.size(); i-- > 0;) {
    BasicTensor<T> act_grad = relu_backward(
        trace.activated[i], maxpool_backward(signal_grad, trace.masks[i]));
    const BasicTensor<T>& stage_input = i == 0 ? trace.image : trace.pooled[i - 1];
    if (i == 0) {
      conv_backward(stage_input, params.conv[i], act_grad, grads.conv[i],
                    input_grad);
    } else {
      conv_backward(stage_input, params.conv[i], act_grad, grads.conv[i],
                    &signal_grad);
    }
  }
}

template <typename T>
void sgd_step(NetworkParams<T>& params, const ParamGrads<T>& grads,
              T learning_rate) {
  if (!(learning_rate > T{0})) {
    throw std::invalid_argument("sgd_step: learning rate must be positive");
  }
  if (!grads.all_finite()) {
    throw NonFiniteError("sgd_step: non-finite gradient");
  }
  params.add_scaled(grads, -learning_rate);
}

template struct NetworkParams<float>;
template struct NetworkParams<double>;

#define SBSR_INSTANTIATE_NETWORK(T)                                         \
  template BasicTensor<T> net_forward(const NetworkParams<T>&,              \
                                      const BasicTensor<T>&,                \
                                      ForwardTrace<T>*);                    \
  template void net_backward(const NetworkParams<T>&,                       \
                             const ForwardTrace<T>&, std::span<const T>,    \
                             ParamGrads<T>&, BasicTensor<T>*);              \
  template void sgd_step(NetworkParams<T>&, const ParamGrads<T>&, T);

SBSR_INSTANTIATE_NETWORK(float)
SBSR_INSTANTIATE_NETWORK(double)

#undef SBSR_INSTANTIATE_NETWORK

}  // namespace sbsr
