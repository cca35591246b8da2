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

#ifndef DGDF_TENSOR_H_
#define DGDF_TENSOR_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dgdf/error.h"
#include "dgdf/rng.h"

namespace dgdf {

struct Pixel {
  int y = 0;
  int x = 0;
};

struct Offset {
  int dy = 0;
  int dx = 0;
};

// Sampling grid of a k x k kernel. Offsets run row-major over
// {-(k-1)/2 .. (k-1)/2}^2; every "d" axis in the library uses this order.
class PatchGrid {
 public:
  explicit PatchGrid(int k) : k_(k) {
    DGDF_CHECK(k >= 1 && k % 2 == 1, ErrorCode::kInvalidShape,
               "kernel extent must be odd and >= 1, got " + std::to_string(k));
    const int r = radius();
    offsets_.reserve(static_cast<std::size_t>(k) * k);
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) offsets_.push_back({dy, dx});
  }

  int k() const { return k_; }
  int radius() const { return (k_ - 1) / 2; }
  int taps() const { return k_ * k_; }
  int center() const { return taps() / 2; }
  const std::vector<Offset>& offsets() const { return offsets_; }
  const Offset& operator[](int j) const { return offsets_[j]; }

 private:
  int k_;
  std::vector<Offset> offsets_;
};

// Dense (h, w, c) feature map, row-major, c fastest. A default-constructed
// tensor is an empty placeholder; every other constructor enforces h, w, c >= 1.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;

  Tensor(int h, int w, int c, T fill = T(0)) : h_(h), w_(w), c_(c) {
    check_dims();
    data_.assign(static_cast<std::size_t>(h) * w * c, fill);
  }

  Tensor(int h, int w, int c, std::vector<T> data)
      : h_(h), w_(w), c_(c), data_(std::move(data)) {
    check_dims();
    DGDF_CHECK_SHAPE(data_.size() == static_cast<std::size_t>(h) * w * c,
                     "tensor data length does not match h*w*c");
  }

  int h() const { return h_; }
  int w() const { return w_; }
  int c() const { return c_; }
  int pixels() const { return h_ * w_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(int y, int x, int ch) const {
    return (static_cast<std::size_t>(y) * w_ + x) * c_ + ch;
  }

  T& operator()(int y, int x, int ch) { return data_[index(y, x, ch)]; }
  const T& operator()(int y, int x, int ch) const {
    return data_[index(y, x, ch)];
  }

  // Flat pixel index p = y * w + x.
  T& at_pixel(int p, int ch) {
    return data_[static_cast<std::size_t>(p) * c_ + ch];
  }
  const T& at_pixel(int p, int ch) const {
    return data_[static_cast<std::size_t>(p) * c_ + ch];
  }

  T& at(int y, int x, int ch) {
    check_index(y, x, ch);
    return (*this)(y, x, ch);
  }
  const T& at(int y, int x, int ch) const {
    check_index(y, x, ch);
    return (*this)(y, x, ch);
  }

  bool in_bounds(int y, int x) const {
    return y >= 0 && y < h_ && x >= 0 && x < w_;
  }

  // Zero-padded read.
  T padded(int y, int x, int ch) const {
    return in_bounds(y, x) ? (*this)(y, x, ch) : T(0);
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  const std::vector<T>& data() const { return data_; }
  std::vector<T> release() && { return std::move(data_); }

  bool same_shape(const Tensor& o) const {
    return h_ == o.h_ && w_ == o.w_ && c_ == o.c_;
  }

  template <typename U>
  Tensor<U> cast() const {
    std::vector<U> out(data_.begin(), data_.end());
    return Tensor<U>(h_, w_, c_, std::move(out));
  }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.same_shape(b) && a.data_ == b.data_;
  }

 private:
  void check_dims() const {
    DGDF_CHECK(h_ >= 1 && w_ >= 1 && c_ >= 1, ErrorCode::kInvalidShape,
               "tensor dims must be >= 1, got " + std::to_string(h_) + "x" +
                   std::to_string(w_) + "x" + std::to_string(c_));
  }
  void check_index(int y, int x, int ch) const {
    DGDF_CHECK(in_bounds(y, x) && ch >= 0 && ch < c_,
               ErrorCode::kIndexOutOfRange, "tensor index out of range");
  }

  int h_ = 0;
  int w_ = 0;
  int c_ = 0;
  std::vector<T> data_;
};

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

// Row-major dense matrix. Used for component matrices (m x c, k^2 x c), the
// cross-depth filter (c_in x c_out) and the squeeze/excite weights.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, T fill = T(0)) : rows_(rows), cols_(cols) {
    DGDF_CHECK(rows >= 1 && cols >= 1, ErrorCode::kInvalidShape,
               "matrix dims must be >= 1");
    data_.assign(static_cast<std::size_t>(rows) * cols, fill);
  }
  Matrix(int rows, int cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    DGDF_CHECK(rows >= 1 && cols >= 1, ErrorCode::kInvalidShape,
               "matrix dims must be >= 1");
    DGDF_CHECK_SHAPE(data_.size() == static_cast<std::size_t>(rows) * cols,
                     "matrix data length does not match rows*cols");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  T& operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  const T& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  template <typename U>
  Matrix<U> cast() const {
    return Matrix<U>(rows_, cols_, std::vector<U>(data_.begin(), data_.end()));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

// Per-pixel kernel data laid out as (h*w, k^2, depth). With depth = c this is
// a spatially-variant depth-wise filter; depth = m gives scheme A adaptors;
// depth = 1 gives scheme B attention maps.
template <typename T>
class KernelField {
 public:
  KernelField() = default;
  KernelField(int h, int w, int k, int depth, T fill = T(0))
      : h_(h), w_(w), k_(k), depth_(depth) {
    DGDF_CHECK(h >= 1 && w >= 1 && depth >= 1 && k >= 1 && k % 2 == 1,
               ErrorCode::kInvalidShape, "invalid kernel field shape");
    data_.assign(static_cast<std::size_t>(h) * w * k * k * depth, fill);
  }
  KernelField(int h, int w, int k, int depth, std::vector<T> data)
      : KernelField(h, w, k, depth) {
    DGDF_CHECK_SHAPE(data.size() == data_.size(),
                     "kernel field data length does not match shape");
    data_ = std::move(data);
  }

  int h() const { return h_; }
  int w() const { return w_; }
  int k() const { return k_; }
  int taps() const { return k_ * k_; }
  int depth() const { return depth_; }
  int pixels() const { return h_ * w_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(int p, int d, int j) const {
    return (static_cast<std::size_t>(p) * taps() + d) * depth_ + j;
  }
  T& operator()(int p, int d, int j) { return data_[index(p, d, j)]; }
  const T& operator()(int p, int d, int j) const {
    return data_[index(p, d, j)];
  }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool same_shape(const KernelField& o) const {
    return h_ == o.h_ && w_ == o.w_ && k_ == o.k_ && depth_ == o.depth_;
  }

  template <typename U>
  KernelField<U> cast() const {
    KernelField<U> out(h_, w_, k_, depth_);
    std::copy(data_.begin(), data_.end(), out.values().begin());
    return out;
  }

 private:
  int h_ = 0;
  int w_ = 0;
  int k_ = 0;
  int depth_ = 0;
  std::vector<T> data_;
};

template <typename T>
using PerPixelDepthwiseFilter = KernelField<T>;
template <typename T>
using Adaptors = KernelField<T>;
template <typename T>
using AttentionMap = KernelField<T>;

// Zero-padded k x k neighbourhood of X around p in channel ch, in PatchGrid
// order.
template <typename T>
std::vector<T> gather_patch(const Tensor<T>& x, Pixel p, const PatchGrid& grid,
                            int ch) {
  DGDF_CHECK(x.in_bounds(p.y, p.x) && ch >= 0 && ch < x.c(),
             ErrorCode::kIndexOutOfRange, "gather_patch: index out of range");
  std::vector<T> out;
  out.reserve(grid.taps());
  for (const Offset& o : grid.offsets())
    out.push_back(x.padded(p.y + o.dy, p.x + o.dx, ch));
  return out;
}

struct Distribution {
  enum class Kind { kUniform, kConstant, kFanInUniform };

  Kind kind = Kind::kConstant;
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  int fan_in = 1;

  static Distribution Uniform(double lo, double hi) {
    Distribution d;
    d.kind = Kind::kUniform;
    d.lo = lo;
    d.hi = hi;
    return d;
  }
  static Distribution Constant(double v) {
    Distribution d;
    d.kind = Kind::kConstant;
    d.value = v;
    return d;
  }
  // Uniform in +-sqrt(1 / fan_in).
  static Distribution FanInUniform(int fan_in) {
    Distribution d;
    d.kind = Kind::kFanInUniform;
    d.fan_in = fan_in;
    return d;
  }
};

template <typename T>
void fill_values(std::span<T> out, std::uint64_t seed, const Distribution& dist) {
  Rng rng(seed);
  double lo = dist.lo, hi = dist.hi;
  if (dist.kind == Distribution::Kind::kFanInUniform) {
    DGDF_CHECK(dist.fan_in >= 1, ErrorCode::kInvalidInput, "fan_in must be >= 1");
    hi = std::sqrt(1.0 / dist.fan_in);
    lo = -hi;
  }
  for (T& v : out) {
    v = dist.kind == Distribution::Kind::kConstant
            ? static_cast<T>(dist.value)
            : static_cast<T>(rng.uniform(lo, hi));
  }
}

template <typename T>
Tensor<T> seeded_fill(int h, int w, int c, std::uint64_t seed,
                      const Distribution& dist) {
  DGDF_CHECK(h >= 1 && w >= 1 && c >= 1, ErrorCode::kInvalidShape,
             "seeded_fill: all dims must be >= 1");
  Tensor<T> t(h, w, c);
  fill_values<T>(t.values(), seed, dist);
  return t;
}

template <typename T>
Matrix<T> seeded_matrix(int rows, int cols, std::uint64_t seed,
                        const Distribution& dist) {
  Matrix<T> m(rows, cols);
  fill_values<T>(m.values(), seed, dist);
  return m;
}

// Elementwise helpers. All require identical shapes.

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  DGDF_CHECK_SHAPE(a.same_shape(b), "add: shape mismatch");
  Tensor<T> out = a;
  auto o = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bv[i];
  return out;
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  DGDF_CHECK_SHAPE(a.same_shape(b), "sub: shape mismatch");
  Tensor<T> out = a;
  auto o = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
  return out;
}

template <typename T>
Tensor<T> scale(const Tensor<T>& a, T s) {
  Tensor<T> out = a;
  for (T& v : out.values()) v *= s;
  return out;
}

// a * x + b * y
template <typename T>
Tensor<T> axpby(T a, const Tensor<T>& x, T b, const Tensor<T>& y) {
  DGDF_CHECK_SHAPE(x.same_shape(y), "axpby: shape mismatch");
  Tensor<T> out = x;
  auto o = out.values();
  auto yv = y.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = a * o[i] + b * yv[i];
  return out;
}

template <typename T>
double max_abs_diff(std::span<const T> a, std::span<const T> b) {
  DGDF_CHECK_SHAPE(a.size() == b.size(), "max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
  return m;
}

template <typename T>
double max_abs_diff(const Tensor<T>& a, const Tensor<T>& b) {
  DGDF_CHECK_SHAPE(a.same_shape(b), "max_abs_diff: shape mismatch");
  return max_abs_diff<T>(a.values(), b.values());
}

template <typename T>
bool all_finite(std::span<const T> v) {
  return std::all_of(v.begin(), v.end(), [](T x) { return std::isfinite(x); });
}

}  // namespace dgdf

#endif  // DGDF_TENSOR_H_
