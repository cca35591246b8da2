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

#include "dgdf/nn_ops.h"

#include <cmath>

namespace dgdf {

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const StaticFilter<T>& f,
                 OpCounter* counter, const ExecOptions& exec) {
  DGDF_CHECK_SHAPE(f.c_in == x.c(), "conv2d: filter c_in != input channels");
  DGDF_CHECK_SHAPE(!f.has_bias() || static_cast<int>(f.bias.size()) == f.c_out,
                   "conv2d: bias length != c_out");
  const PatchGrid grid(f.k);
  Tensor<T> y(x.h(), x.w(), f.c_out);
  parallel_rows(x.h(), exec, counter, [&](int y0, int y1, OpCounter& cnt) {
    std::vector<T> acc(f.c_out);
    for (int py = y0; py < y1; ++py) {
      for (int px = 0; px < x.w(); ++px) {
        if (f.has_bias())
          std::copy(f.bias.begin(), f.bias.end(), acc.begin());
        else
          std::fill(acc.begin(), acc.end(), T(0));
        for (int d = 0; d < grid.taps(); ++d) {
          const int sy = py + grid[d].dy, sx = px + grid[d].dx;
          if (!x.in_bounds(sy, sx)) continue;
          const T* xin = &x(sy, sx, 0);
          for (int ci = 0; ci < f.c_in; ++ci) {
            const T xv = xin[ci];
            const T* wrow = &f.w(d, ci, 0);
            for (int co = 0; co < f.c_out; ++co) acc[co] += wrow[co] * xv;
          }
        }
        std::copy(acc.begin(), acc.end(), &y(py, px, 0));
      }
      cnt.macs += static_cast<std::uint64_t>(x.w()) * grid.taps() * f.c_in * f.c_out;
    }
  });
  return y;
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  Tensor<T> y = x;
  for (T& v : y.values()) v = v > T(0) ? v : T(0);
  return y;
}

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x) {
  Tensor<T> y = x;
  for (T& v : y.values()) v = T(1) / (T(1) + std::exp(-v));
  return y;
}

template <typename T>
std::vector<T> global_avgpool(const Tensor<T>& x) {
  std::vector<T> out(x.c(), T(0));
  for (int p = 0; p < x.pixels(); ++p)
    for (int ch = 0; ch < x.c(); ++ch) out[ch] += x.at_pixel(p, ch);
  for (T& v : out) v /= static_cast<T>(x.pixels());
  return out;
}

template <typename T>
Tensor<T> avgpool2x2(const Tensor<T>& x) {
  DGDF_CHECK_SHAPE(x.h() % 2 == 0 && x.w() % 2 == 0,
                   "avgpool2x2: spatial dims must be even");
  Tensor<T> y(x.h() / 2, x.w() / 2, x.c());
  for (int py = 0; py < y.h(); ++py)
    for (int px = 0; px < y.w(); ++px)
      for (int ch = 0; ch < x.c(); ++ch)
        y(py, px, ch) = T(0.25) * (x(2 * py, 2 * px, ch) + x(2 * py, 2 * px + 1, ch) +
                                   x(2 * py + 1, 2 * px, ch) + x(2 * py + 1, 2 * px + 1, ch));
  return y;
}

template <typename T>
Tensor<T> upsample_nearest2x(const Tensor<T>& x) {
  Tensor<T> y(x.h() * 2, x.w() * 2, x.c());
  for (int py = 0; py < y.h(); ++py)
    for (int px = 0; px < y.w(); ++px)
      for (int ch = 0; ch < x.c(); ++ch) y(py, px, ch) = x(py / 2, px / 2, ch);
  return y;
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
  DGDF_CHECK_SHAPE(a.h() == b.h() && a.w() == b.w(),
                   "concat: spatial dims differ");
  Tensor<T> y(a.h(), a.w(), a.c() + b.c());
  for (int p = 0; p < a.pixels(); ++p) {
    for (int ch = 0; ch < a.c(); ++ch) y.at_pixel(p, ch) = a.at_pixel(p, ch);
    for (int ch = 0; ch < b.c(); ++ch) y.at_pixel(p, a.c() + ch) = b.at_pixel(p, ch);
  }
  return y;
}

#define DGDF_INSTANTIATE(T)                                                     \
  template Tensor<T> conv2d(const Tensor<T>&, const StaticFilter<T>&, OpCounter*, \
                            const ExecOptions&);                               \
  template Tensor<T> relu(const Tensor<T>&);                                   \
  template Tensor<T> sigmoid(const Tensor<T>&);                                \
  template std::vector<T> global_avgpool(const Tensor<T>&);                    \
  template Tensor<T> avgpool2x2(const Tensor<T>&);                             \
  template Tensor<T> upsample_nearest2x(const Tensor<T>&);                     \
  template Tensor<T> concat_channels(const Tensor<T>&, const Tensor<T>&);

DGDF_INSTANTIATE(float)
DGDF_INSTANTIATE(double)

#undef DGDF_INSTANTIATE

}  // namespace dgdf
