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

#include "dgdf/grad.h"

#include <algorithm>
#include <cmath>

#include "dgdf/metrics.h"
#include "dgdf/nn_ops.h"

namespace dgdf {

// ---------------------------------------------------------------------------
// Typed adjoints

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& x, const StaticFilter<T>& f,
                             const Tensor<T>& dy) {
  DGDF_CHECK_SHAPE(f.c_in == x.c(), "conv2d_backward: filter c_in != input channels");
  DGDF_CHECK_SHAPE(dy.h() == x.h() && dy.w() == x.w() && dy.c() == f.c_out,
                   "conv2d_backward: dy shape");
  const PatchGrid grid(f.k);
  ConvGrads<T> g{Tensor<T>(x.h(), x.w(), x.c()), StaticFilter<T>(f.k, f.c_in, f.c_out, f.has_bias())};
  for (int py = 0; py < x.h(); ++py) {
    for (int px = 0; px < x.w(); ++px) {
      const T* up = &dy(py, px, 0);
      if (f.has_bias())
        for (int co = 0; co < f.c_out; ++co) g.dfilter.bias[co] += up[co];
      for (int d = 0; d < grid.taps(); ++d) {
        const int sy = py + grid[d].dy, sx = px + grid[d].dx;
        if (!x.in_bounds(sy, sx)) continue;
        for (int ci = 0; ci < f.c_in; ++ci) {
          const T xv = x(sy, sx, ci);
          const T* wrow = &f.w(d, ci, 0);
          T* dwrow = &g.dfilter.w(d, ci, 0);
          T acc = T(0);
          for (int co = 0; co < f.c_out; ++co) {
            dwrow[co] += xv * up[co];
            acc += wrow[co] * up[co];
          }
          g.dx(sy, sx, ci) += acc;
        }
      }
    }
  }
  return g;
}

template <typename T>
DepthwiseGrads<T> perpixel_depthwise_backward(const Tensor<T>& x,
                                              const PerPixelDepthwiseFilter<T>& f,
                                              const Tensor<T>& dy) {
  DGDF_CHECK_SHAPE(f.h() == x.h() && f.w() == x.w() && f.depth() == x.c(),
                   "perpixel_depthwise_backward: filter shape");
  DGDF_CHECK_SHAPE(dy.same_shape(x), "perpixel_depthwise_backward: dy shape");
  const PatchGrid grid(f.k());
  DepthwiseGrads<T> g{Tensor<T>(x.h(), x.w(), x.c()),
                      PerPixelDepthwiseFilter<T>(f.h(), f.w(), f.k(), f.depth())};
  for (int py = 0; py < x.h(); ++py)
    for (int px = 0; px < x.w(); ++px) {
      const int p = py * x.w() + px;
      for (int d = 0; d < grid.taps(); ++d) {
        const int sy = py + grid[d].dy, sx = px + grid[d].dx;
        if (!x.in_bounds(sy, sx)) continue;
        for (int l = 0; l < x.c(); ++l) {
          const T up = dy(py, px, l);
          g.dfilter(p, d, l) = x(sy, sx, l) * up;
          g.dx(sy, sx, l) += f(p, d, l) * up;
        }
      }
    }
  return g;
}

template <typename T>
CrossDepthGrads<T> cross_depth_backward(const Tensor<T>& x, const CrossDepthFilter<T>& f,
                                        const Tensor<T>& dy) {
  DGDF_CHECK_SHAPE(f.rows() == x.c(), "cross_depth_backward: filter rows");
  DGDF_CHECK_SHAPE(dy.h() == x.h() && dy.w() == x.w() && dy.c() == f.cols(),
                   "cross_depth_backward: dy shape");
  CrossDepthGrads<T> g{Tensor<T>(x.h(), x.w(), x.c()), CrossDepthFilter<T>(f.rows(), f.cols())};
  for (int p = 0; p < x.pixels(); ++p)
    for (int ci = 0; ci < f.rows(); ++ci) {
      T acc = T(0);
      for (int co = 0; co < f.cols(); ++co) {
        acc += f(ci, co) * dy.at_pixel(p, co);
        g.dfilter(ci, co) += x.at_pixel(p, ci) * dy.at_pixel(p, co);
      }
      g.dx.at_pixel(p, ci) = acc;
    }
  return g;
}

template <typename T>
SchemeAApplyGrads<T> scheme_a_apply_backward(const Tensor<T>& x, const Adaptors<T>& adaptors,
                                             const Matrix<T>& component, const Tensor<T>& dy) {
  DGDF_CHECK_SHAPE(dy.same_shape(x), "scheme_a_apply_backward: dy shape");
  DGDF_CHECK_SHAPE(component.cols() == x.c() && component.rows() == adaptors.depth(),
                   "scheme_a_apply_backward: component shape");
  const int c = x.c(), m = adaptors.depth();
  const Tensor<T> inter = scheme_a_layer1(x, adaptors);
  SchemeAApplyGrads<T> g{Tensor<T>(x.h(), x.w(), c),
                         Adaptors<T>(adaptors.h(), adaptors.w(), adaptors.k(), m),
                         Matrix<T>(m, c)};
  // Layer 2: Y[p, l] = sum_j D[j, l] I[p, l m + j].
  Tensor<T> dinter(x.h(), x.w(), c * m);
  for (int p = 0; p < x.pixels(); ++p)
    for (int l = 0; l < c; ++l) {
      const T up = dy.at_pixel(p, l);
      for (int j = 0; j < m; ++j) {
        g.dcomponent(j, l) += up * inter.at_pixel(p, l * m + j);
        dinter.at_pixel(p, l * m + j) = component(j, l) * up;
      }
    }
  // Layer 1: I[p, l m + j] = sum_d A[p, d, j] X[p + d, l].
  const PatchGrid grid(adaptors.k());
  for (int py = 0; py < x.h(); ++py)
    for (int px = 0; px < x.w(); ++px) {
      const int p = py * x.w() + px;
      for (int d = 0; d < grid.taps(); ++d) {
        const int sy = py + grid[d].dy, sx = px + grid[d].dx;
        if (!x.in_bounds(sy, sx)) continue;
        for (int l = 0; l < c; ++l) {
          const T xv = x(sy, sx, l);
          T acc = T(0);
          for (int j = 0; j < m; ++j) {
            const T di = dinter.at_pixel(p, l * m + j);
            g.dadaptors(p, d, j) += di * xv;
            acc += adaptors(p, d, j) * di;
          }
          g.dx(sy, sx, l) += acc;
        }
      }
    }
  return g;
}

template <typename T>
SchemeBApplyGrads<T> scheme_b_apply_backward(const Tensor<T>& x,
                                             const AttentionMap<T>& attention,
                                             const Matrix<T>& component, const Tensor<T>& dy) {
  DGDF_CHECK_SHAPE(dy.same_shape(x), "scheme_b_apply_backward: dy shape");
  DGDF_CHECK_SHAPE(component.cols() == x.c() && component.rows() == attention.taps(),
                   "scheme_b_apply_backward: component shape");
  const PatchGrid grid(attention.k());
  SchemeBApplyGrads<T> g{Tensor<T>(x.h(), x.w(), x.c()),
                         AttentionMap<T>(attention.h(), attention.w(), attention.k(), 1),
                         Matrix<T>(component.rows(), component.cols())};
  for (int py = 0; py < x.h(); ++py)
    for (int px = 0; px < x.w(); ++px) {
      const int p = py * x.w() + px;
      for (int d = 0; d < grid.taps(); ++d) {
        const int sy = py + grid[d].dy, sx = px + grid[d].dx;
        if (!x.in_bounds(sy, sx)) continue;
        const T a = attention(p, d, 0);
        T da = T(0);
        for (int l = 0; l < x.c(); ++l) {
          const T up = dy(py, px, l);
          const T xv = x(sy, sx, l);
          da += component(d, l) * xv * up;
          g.dcomponent(d, l) += a * xv * up;
          g.dx(sy, sx, l) += a * component(d, l) * up;
        }
        g.dattention(p, d, 0) = da;
      }
    }
  return g;
}

template <typename T>
GdfApplyGrads<T> gdf_apply_backward(const Tensor<T>& x, const PerPixelDepthwiseFilter<T>& dw,
                                    const CrossDepthFilter<T>& cross, const Tensor<T>& dy) {
  const Tensor<T> mid = perpixel_depthwise_ref(x, dw);
  CrossDepthGrads<T> cg = cross_depth_backward(mid, cross, dy);
  DepthwiseGrads<T> dg = perpixel_depthwise_backward(x, dw, cg.dx);
  return {std::move(dg.dx), std::move(dg.dfilter), std::move(cg.dfilter)};
}

template <typename T>
GeneratorGrads<T> generator_backward(const Tensor<T>& g, const GeneratorParams<T>& gen,
                                     const Tensor<T>& dout) {
  DGDF_CHECK_SHAPE(dout.h() == g.h() && dout.w() == g.w() && dout.c() == gen.n_out(),
                   "generator_backward: dout shape");
  Tensor<T> hidden_pre, hidden;
  const Tensor<T>* pw_in = &g;
  if (gen.kind == GeneratorKind::kTwoLayer) {
    hidden_pre = conv2d(g, gen.hidden);
    hidden = relu(hidden_pre);
    pw_in = &hidden;
  }
  Tensor<T> dz = dout;
  if (gen.activation == Activation::kSigmoid)
    dz = sigmoid_backward(conv2d(*pw_in, gen.pointwise), dout);
  ConvGrads<T> pw = conv2d_backward(*pw_in, gen.pointwise, dz);
  GeneratorGrads<T> out;
  out.dpointwise = std::move(pw.dfilter);
  if (gen.kind == GeneratorKind::kTwoLayer) {
    ConvGrads<T> hg = conv2d_backward(g, gen.hidden, relu_backward(hidden_pre, pw.dx));
    out.dg = std::move(hg.dx);
    out.dhidden = std::move(hg.dfilter);
  } else {
    out.dg = std::move(pw.dx);
  }
  return out;
}

namespace {

template <typename T>
Tensor<T> field_as_tensor(const KernelField<T>& f) {
  return Tensor<T>(f.h(), f.w(), f.taps() * f.depth(),
                   std::vector<T>(f.values().begin(), f.values().end()));
}

}  // namespace

template <typename T>
GeneratorGrads<T> gen_scheme_a_backward(const Tensor<T>& g, const SchemeAState<T>& s,
                                        const Adaptors<T>& dadaptors) {
  return generator_backward(g, s.adaptor_gen, field_as_tensor(dadaptors));
}

template <typename T>
GeneratorGrads<T> gen_scheme_b_backward(const Tensor<T>& g, const SchemeBState<T>& s,
                                        const AttentionMap<T>& dattention) {
  return generator_backward(g, s.attn_gen, field_as_tensor(dattention));
}

template <typename T>
CrossDepthGenGrads<T> gen_cross_depth_backward(const Tensor<T>& g,
                                               const CrossDepthGenerator<T>& cd,
                                               const CrossDepthFilter<T>& dcross) {
  const int c = cd.c, s = cd.width();
  DGDF_CHECK_SHAPE(g.c() == c && dcross.rows() == c && dcross.cols() == c,
                   "gen_cross_depth_backward: shapes");
  const std::vector<T> pooled = global_avgpool(g);
  std::vector<T> pre(s), sq(s);
  for (int i = 0; i < s; ++i) {
    T acc = cd.squeeze_bias[i];
    for (int l = 0; l < c; ++l) acc += cd.squeeze(l, i) * pooled[l];
    pre[i] = acc;
    sq[i] = acc > T(0) ? acc : T(0);
  }
  CrossDepthGenGrads<T> out;
  out.dexcite = Matrix<T>(s, c * c);
  out.dexcite_bias.assign(dcross.values().begin(), dcross.values().end());
  std::vector<T> dsq(s, T(0));
  for (int i = 0; i < s; ++i)
    for (int q = 0; q < c * c; ++q) {
      const T de = dcross.values()[q];
      out.dexcite(i, q) = sq[i] * de;
      dsq[i] += cd.excite(i, q) * de;
    }
  out.dsqueeze = Matrix<T>(c, s);
  out.dsqueeze_bias.assign(s, T(0));
  std::vector<T> dpooled(c, T(0));
  for (int i = 0; i < s; ++i) {
    const T dz = pre[i] > T(0) ? dsq[i] : T(0);
    out.dsqueeze_bias[i] = dz;
    for (int l = 0; l < c; ++l) {
      out.dsqueeze(l, i) = pooled[l] * dz;
      dpooled[l] += cd.squeeze(l, i) * dz;
    }
  }
  out.dg = global_avgpool_backward<T>(g.h(), g.w(), dpooled);
  return out;
}

template <typename T>
GdfGenGrads<T> gen_gdf_backward(const Tensor<T>& g, const FactorizedGDFState<T>& s,
                                const PerPixelDepthwiseFilter<T>& ddepthwise,
                                const CrossDepthFilter<T>& dcross) {
  GdfGenGrads<T> out;
  out.dw_gen = generator_backward(g, s.dw_gen, field_as_tensor(ddepthwise));
  out.cd_gen = gen_cross_depth_backward(g, s.cd_gen, dcross);
  out.dg = add(out.dw_gen.dg, out.cd_gen.dg);
  return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& x, const Tensor<T>& dy) {
  DGDF_CHECK_SHAPE(x.same_shape(dy), "relu_backward: shape");
  Tensor<T> dx = dy;
  auto xv = x.values();
  auto d = dx.values();
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!(xv[i] > T(0))) d[i] = T(0);
  return dx;
}

template <typename T>
Tensor<T> sigmoid_backward(const Tensor<T>& x, const Tensor<T>& dy) {
  DGDF_CHECK_SHAPE(x.same_shape(dy), "sigmoid_backward: shape");
  Tensor<T> dx = dy;
  auto xv = x.values();
  auto d = dx.values();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const T s = T(1) / (T(1) + std::exp(-xv[i]));
    d[i] *= s * (T(1) - s);
  }
  return dx;
}

template <typename T>
Tensor<T> global_avgpool_backward(int h, int w, std::span<const T> dpooled) {
  const int c = static_cast<int>(dpooled.size());
  Tensor<T> dx(h, w, c);
  const T inv = T(1) / static_cast<T>(h * w);
  for (int p = 0; p < h * w; ++p)
    for (int ch = 0; ch < c; ++ch) dx.at_pixel(p, ch) = dpooled[ch] * inv;
  return dx;
}

template <typename T>
Tensor<T> avgpool2x2_backward(const Tensor<T>& dy) {
  Tensor<T> dx(dy.h() * 2, dy.w() * 2, dy.c());
  for (int py = 0; py < dx.h(); ++py)
    for (int px = 0; px < dx.w(); ++px)
      for (int ch = 0; ch < dy.c(); ++ch) dx(py, px, ch) = T(0.25) * dy(py / 2, px / 2, ch);
  return dx;
}

template <typename T>
Tensor<T> upsample_nearest2x_backward(const Tensor<T>& dy) {
  DGDF_CHECK_SHAPE(dy.h() % 2 == 0 && dy.w() % 2 == 0, "upsample backward: odd dims");
  Tensor<T> dx(dy.h() / 2, dy.w() / 2, dy.c());
  for (int py = 0; py < dy.h(); ++py)
    for (int px = 0; px < dy.w(); ++px)
      for (int ch = 0; ch < dy.c(); ++ch) dx(py / 2, px / 2, ch) += dy(py, px, ch);
  return dx;
}

template <typename T>
std::pair<Tensor<T>, Tensor<T>> concat_backward(const Tensor<T>& dy, int c_first) {
  DGDF_CHECK_SHAPE(c_first >= 1 && c_first < dy.c(), "concat_backward: split point");
  Tensor<T> a(dy.h(), dy.w(), c_first), b(dy.h(), dy.w(), dy.c() - c_first);
  for (int p = 0; p < dy.pixels(); ++p) {
    for (int ch = 0; ch < c_first; ++ch) a.at_pixel(p, ch) = dy.at_pixel(p, ch);
    for (int ch = c_first; ch < dy.c(); ++ch) b.at_pixel(p, ch - c_first) = dy.at_pixel(p, ch);
  }
  return {std::move(a), std::move(b)};
}

#define DGDF_INSTANTIATE(T)                                                              \
  template ConvGrads<T> conv2d_backward(const Tensor<T>&, const StaticFilter<T>&,      \
                                        const Tensor<T>&);                              \
  template DepthwiseGrads<T> perpixel_depthwise_backward(                               \
      const Tensor<T>&, const PerPixelDepthwiseFilter<T>&, const Tensor<T>&);           \
  template CrossDepthGrads<T> cross_depth_backward(const Tensor<T>&,                   \
                                                   const CrossDepthFilter<T>&,         \
                                                   const Tensor<T>&);                  \
  template SchemeAApplyGrads<T> scheme_a_apply_backward(                                \
      const Tensor<T>&, const Adaptors<T>&, const Matrix<T>&, const Tensor<T>&);        \
  template SchemeBApplyGrads<T> scheme_b_apply_backward(                                \
      const Tensor<T>&, const AttentionMap<T>&, const Matrix<T>&, const Tensor<T>&);    \
  template GdfApplyGrads<T> gdf_apply_backward(const Tensor<T>&,                       \
                                               const PerPixelDepthwiseFilter<T>&,      \
                                               const CrossDepthFilter<T>&,             \
                                               const Tensor<T>&);                      \
  template GeneratorGrads<T> generator_backward(const Tensor<T>&,                      \
                                                const GeneratorParams<T>&,             \
                                                const Tensor<T>&);                     \
  template GeneratorGrads<T> gen_scheme_a_backward(const Tensor<T>&,                   \
                                                   const SchemeAState<T>&,             \
                                                   const Adaptors<T>&);                \
  template GeneratorGrads<T> gen_scheme_b_backward(const Tensor<T>&,                   \
                                                   const SchemeBState<T>&,             \
                                                   const AttentionMap<T>&);            \
  template CrossDepthGenGrads<T> gen_cross_depth_backward(                              \
      const Tensor<T>&, const CrossDepthGenerator<T>&, const CrossDepthFilter<T>&);     \
  template GdfGenGrads<T> gen_gdf_backward(const Tensor<T>&,                           \
                                           const FactorizedGDFState<T>&,               \
                                           const PerPixelDepthwiseFilter<T>&,          \
                                           const CrossDepthFilter<T>&);                \
  template Tensor<T> relu_backward(const Tensor<T>&, const Tensor<T>&);                \
  template Tensor<T> sigmoid_backward(const Tensor<T>&, const Tensor<T>&);             \
  template Tensor<T> global_avgpool_backward(int, int, std::span<const T>);            \
  template Tensor<T> avgpool2x2_backward(const Tensor<T>&);                            \
  template Tensor<T> upsample_nearest2x_backward(const Tensor<T>&);                    \
  template std::pair<Tensor<T>, Tensor<T>> concat_backward(const Tensor<T>&, int);

DGDF_INSTANTIATE(float)
DGDF_INSTANTIATE(double)

#undef DGDF_INSTANTIATE

}  // namespace dgdf
