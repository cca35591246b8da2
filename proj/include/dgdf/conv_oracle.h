/* Copyright 2026 The DGDF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Reference convolutions. Plain nested loops, zero padding, stride 1, output
// spatial size equal to the input. These are the ground truth every fast path
// is compared against; speed is not a goal.

#ifndef DGDF_CONV_ORACLE_H_
#define DGDF_CONV_ORACLE_H_

#include <vector>

#include "dgdf/tensor.h"

namespace dgdf {

// Spatially shared filter, weights laid out (k^2, c_in, c_out). `bias` is
// either empty or holds c_out values.
template <typename T>
struct StaticFilter {
  int k = 1;
  int c_in = 1;
  int c_out = 1;
  std::vector<T> weights;
  std::vector<T> bias;

  StaticFilter() = default;
  StaticFilter(int k, int c_in, int c_out, bool with_bias);

  int taps() const { return k * k; }
  bool has_bias() const { return !bias.empty(); }
  std::size_t weight_count() const { return weights.size(); }

  T& w(int d, int ci, int co) {
    return weights[(static_cast<std::size_t>(d) * c_in + ci) * c_out + co];
  }
  const T& w(int d, int ci, int co) const {
    return weights[(static_cast<std::size_t>(d) * c_in + ci) * c_out + co];
  }
};

// Per-pixel full filter, (h*w, k^2, c_in, c_out).
template <typename T>
struct PerPixelFullFilter {
  int h = 0;
  int w = 0;
  int k = 1;
  int c_in = 0;
  int c_out = 0;
  std::vector<T> weights;

  PerPixelFullFilter() = default;
  PerPixelFullFilter(int h, int w, int k, int c_in, int c_out);

  int taps() const { return k * k; }
  T& at(int p, int d, int ci, int co) {
    return weights[((static_cast<std::size_t>(p) * taps() + d) * c_in + ci) * c_out + co];
  }
  const T& at(int p, int d, int ci, int co) const {
    return weights[((static_cast<std::size_t>(p) * taps() + d) * c_in + ci) * c_out + co];
  }
};

// (c_in, c_out) channel mixing matrix of the cross-depth stage.
template <typename T>
using CrossDepthFilter = Matrix<T>;

template <typename T>
Tensor<T> conv2d_ref(const Tensor<T>& x, const StaticFilter<T>& f);

template <typename T>
Tensor<T> dynamic_conv_ref(const Tensor<T>& x, const PerPixelFullFilter<T>& f);

template <typename T>
Tensor<T> perpixel_depthwise_ref(const Tensor<T>& x,
                                 const PerPixelDepthwiseFilter<T>& f);

template <typename T>
Tensor<T> cross_depth_ref(const Tensor<T>& x, const CrossDepthFilter<T>& f);

// f[p, d, ci, co] = g[p, d, ci] * h[ci, co].
template <typename T>
PerPixelFullFilter<T> compose_rank1(const PerPixelDepthwiseFilter<T>& g,
                                    const CrossDepthFilter<T>& h);

// Spatially constant full filter built from a static one (bias dropped).
template <typename T>
PerPixelFullFilter<T> broadcast_static(const StaticFilter<T>& f, int h, int w);

}  // namespace dgdf

#endif  // DGDF_CONV_ORACLE_H_
