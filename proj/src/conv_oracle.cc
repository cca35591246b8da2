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

#include "dgdf/conv_oracle.h"

namespace dgdf {

template <typename T>
StaticFilter<T>::StaticFilter(int k_, int c_in_, int c_out_, bool with_bias)
    : k(k_), c_in(c_in_), c_out(c_out_) {
  DGDF_CHECK(k >= 1 && k % 2 == 1 && c_in >= 1 && c_out >= 1,
             ErrorCode::kInvalidShape, "invalid static filter shape");
  weights.assign(static_cast<std::size_t>(k) * k * c_in * c_out, T(0));
  if (with_bias) bias.assign(c_out, T(0));
}

template <typename T>
PerPixelFullFilter<T>::PerPixelFullFilter(int h_, int w_, int k_, int c_in_,
                                          int c_out_)
    : h(h_), w(w_), k(k_), c_in(c_in_), c_out(c_out_) {
  DGDF_CHECK(h >= 1 && w >= 1 && k >= 1 && k % 2 == 1 && c_in >= 1 && c_out >= 1,
             ErrorCode::kInvalidShape, "invalid per-pixel filter shape");
  weights.assign(static_cast<std::size_t>(h) * w * k * k * c_in * c_out, T(0));
}

template <typename T>
Tensor<T> conv2d_ref(const Tensor<T>& x, const StaticFilter<T>& f) {
  DGDF_CHECK_SHAPE(f.c_in == x.c(), "conv2d_ref: filter c_in != input channels");
  DGDF_CHECK_SHAPE(!f.has_bias() || static_cast<int>(f.bias.size()) == f.c_out,
                   "conv2d_ref: bias length != c_out");
  const PatchGrid grid(f.k);
  Tensor<T> y(x.h(), x.w(), f.c_out);
  for (int py = 0; py < x.h(); ++py) {
    for (int px = 0; px < x.w(); ++px) {
      for (int co = 0; co < f.c_out; ++co) {
        T acc = f.has_bias() ? f.bias[co] : T(0);
        for (int ci = 0; ci < f.c_in; ++ci) {
          for (int d = 0; d < grid.taps(); ++d) {
            acc += f.w(d, ci, co) * x.padded(py + grid[d].dy, px + grid[d].dx, ci);
          }
        }
        y(py, px, co) = acc;
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> dynamic_conv_ref(const Tensor<T>& x, const PerPixelFullFilter<T>& f) {
  DGDF_CHECK_SHAPE(f.h == x.h() && f.w == x.w() && f.c_in == x.c(),
                   "dynamic_conv_ref: filter shape inconsistent with input");
  const PatchGrid grid(f.k);
  Tensor<T> y(x.h(), x.w(), f.c_out);
  for (int py = 0; py < x.h(); ++py) {
    for (int px = 0; px < x.w(); ++px) {
      const int p = py * x.w() + px;
      for (int co = 0; co < f.c_out; ++co) {
        T acc = T(0);
        for (int ci = 0; ci < f.c_in; ++ci) {
          for (int d = 0; d < grid.taps(); ++d) {
            acc += f.at(p, d, ci, co) * x.padded(py + grid[d].dy, px + grid[d].dx, ci);
          }
        }
        y(py, px, co) = acc;
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> perpixel_depthwise_ref(const Tensor<T>& x,
                                 const PerPixelDepthwiseFilter<T>& f) {
  DGDF_CHECK_SHAPE(f.h() == x.h() && f.w() == x.w() && f.depth() == x.c(),
                   "perpixel_depthwise_ref: filter shape inconsistent with input");
  const PatchGrid grid(f.k());
  Tensor<T> y(x.h(), x.w(), x.c());
  for (int py = 0; py < x.h(); ++py) {
    for (int px = 0; px < x.w(); ++px) {
      const int p = py * x.w() + px;
      for (int ch = 0; ch < x.c(); ++ch) {
        T acc = T(0);
        for (int d = 0; d < grid.taps(); ++d) {
          acc += f(p, d, ch) * x.padded(py + grid[d].dy, px + grid[d].dx, ch);
        }
        y(py, px, ch) = acc;
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> cross_depth_ref(const Tensor<T>& x, const CrossDepthFilter<T>& f) {
  DGDF_CHECK_SHAPE(f.rows() == x.c(), "cross_depth_ref: filter rows != input channels");
  Tensor<T> y(x.h(), x.w(), f.cols());
  for (int py = 0; py < x.h(); ++py) {
    for (int px = 0; px < x.w(); ++px) {
      for (int co = 0; co < f.cols(); ++co) {
        T acc = T(0);
        for (int ci = 0; ci < x.c(); ++ci) acc += f(ci, co) * x(py, px, ci);
        y(py, px, co) = acc;
      }
    }
  }
  return y;
}

template <typename T>
PerPixelFullFilter<T> compose_rank1(const PerPixelDepthwiseFilter<T>& g,
                                    const CrossDepthFilter<T>& h) {
  DGDF_CHECK_SHAPE(g.depth() == h.rows(), "compose_rank1: channel mismatch");
  PerPixelFullFilter<T> f(g.h(), g.w(), g.k(), h.rows(), h.cols());
  for (int p = 0; p < g.pixels(); ++p)
    for (int d = 0; d < g.taps(); ++d)
      for (int ci = 0; ci < h.rows(); ++ci)
        for (int co = 0; co < h.cols(); ++co) f.at(p, d, ci, co) = g(p, d, ci) * h(ci, co);
  return f;
}

template <typename T>
PerPixelFullFilter<T> broadcast_static(const StaticFilter<T>& s, int h, int w) {
  PerPixelFullFilter<T> f(h, w, s.k, s.c_in, s.c_out);
  for (int p = 0; p < h * w; ++p)
    for (int d = 0; d < s.taps(); ++d)
      for (int ci = 0; ci < s.c_in; ++ci)
        for (int co = 0; co < s.c_out; ++co) f.at(p, d, ci, co) = s.w(d, ci, co);
  return f;
}

#define DGDF_INSTANTIATE(T)                                                    \
  template struct StaticFilter<T>;                                            \
  template struct PerPixelFullFilter<T>;                                      \
  template Tensor<T> conv2d_ref(const Tensor<T>&, const StaticFilter<T>&);    \
  template Tensor<T> dynamic_conv_ref(const Tensor<T>&,                       \
                                      const PerPixelFullFilter<T>&);          \
  template Tensor<T> perpixel_depthwise_ref(const Tensor<T>&,                 \
                                            const PerPixelDepthwiseFilter<T>&); \
  template Tensor<T> cross_depth_ref(const Tensor<T>&, const CrossDepthFilter<T>&); \
  template PerPixelFullFilter<T> compose_rank1(const PerPixelDepthwiseFilter<T>&, \
                                               const CrossDepthFilter<T>&);   \
  template PerPixelFullFilter<T> broadcast_static(const StaticFilter<T>&, int, int);

DGDF_INSTANTIATE(float)
DGDF_INSTANTIATE(double)

#undef DGDF_INSTANTIATE

}  // namespace dgdf
