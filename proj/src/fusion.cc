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

#include "dgdf/fusion.h"

#include <cmath>

#include "dgdf/nn_ops.h"

namespace dgdf {

const char* FusionMethodName(FusionMethod m) {
  switch (m) {
    case FusionMethod::kNaive: return "naive";
    case FusionMethod::kGdf: return "gdf";
    case FusionMethod::kSchemeA: return "scheme_a";
    case FusionMethod::kSchemeB: return "scheme_b";
  }
  return "unknown";
}

FusionMethod ParseFusionMethod(const std::string& name) {
  if (name == "naive") return FusionMethod::kNaive;
  if (name == "gdf") return FusionMethod::kGdf;
  if (name == "scheme_a") return FusionMethod::kSchemeA;
  if (name == "scheme_b") return FusionMethod::kSchemeB;
  throw Error(ErrorCode::kInvalidInput, "unknown fusion method '" + name + "'");
}

int squeeze_width(int c, double sigma) {
  DGDF_CHECK(c >= 1, ErrorCode::kInvalidInput, "squeeze_width: c must be >= 1");
  DGDF_CHECK(sigma > 0.0 && sigma <= 1.0, ErrorCode::kInvalidInput,
             "squeeze ratio must be in (0, 1]");
  const int s = static_cast<int>(std::ceil(sigma * c - 1e-9));
  return std::max(1, s);
}

namespace {

template <typename T>
StaticFilter<T> random_filter(int k, int c_in, int c_out, std::uint64_t seed) {
  StaticFilter<T> f(k, c_in, c_out, /*with_bias=*/true);
  fill_values<T>(std::span<T>(f.weights), seed,
                 Distribution::FanInUniform(k * k * c_in));
  return f;
}

template <typename T>
KernelField<T> to_field(Tensor<T>&& t, int k, int depth) {
  const int h = t.h(), w = t.w();
  return KernelField<T>(h, w, k, depth, std::move(t).release());
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter containers

template <typename T>
std::size_t GeneratorParams<T>::weight_count() const {
  std::size_t n = pointwise.weight_count();
  if (kind == GeneratorKind::kTwoLayer) n += hidden.weight_count();
  return n;
}

template <typename T>
GeneratorParams<T> GeneratorParams<T>::Make(int c_in, int n_out, Activation act,
                                            std::uint64_t seed, GeneratorKind kind) {
  GeneratorParams<T> g;
  g.kind = kind;
  g.activation = act;
  if (kind == GeneratorKind::kTwoLayer)
    g.hidden = random_filter<T>(3, c_in, c_in, derive_seed(seed, 1));
  g.pointwise = random_filter<T>(1, c_in, n_out, derive_seed(seed, 2));
  return g;
}

template <typename T>
CrossDepthGenerator<T> CrossDepthGenerator<T>::Make(int c, double sigma,
                                                    std::uint64_t seed) {
  CrossDepthGenerator<T> cd;
  cd.c = c;
  cd.sigma = sigma;
  const int s = squeeze_width(c, sigma);
  cd.squeeze = seeded_matrix<T>(c, s, derive_seed(seed, 1), Distribution::FanInUniform(c));
  cd.squeeze_bias.assign(s, T(0));
  cd.excite = seeded_matrix<T>(s, c * c, derive_seed(seed, 2), Distribution::FanInUniform(s));
  cd.excite_bias.assign(static_cast<std::size_t>(c) * c, T(0));
  return cd;
}

template <typename T>
SchemeAState<T> SchemeAState<T>::Make(int c, int k, int m, std::uint64_t seed,
                                      GeneratorKind kind) {
  DGDF_CHECK(m >= 1, ErrorCode::kInvalidInput, "scheme A needs m >= 1");
  SchemeAState<T> s;
  s.k = k;
  s.m = m;
  s.adaptor_gen = GeneratorParams<T>::Make(c, k * k * m, Activation::kNone,
                                           derive_seed(seed, 10), kind);
  s.component = seeded_matrix<T>(m, c, derive_seed(seed, 11), Distribution::FanInUniform(m));
  return s;
}

template <typename T>
SchemeBState<T> SchemeBState<T>::Make(int c, int k, std::uint64_t seed,
                                      GeneratorKind kind) {
  SchemeBState<T> s;
  s.k = k;
  s.attn_gen = GeneratorParams<T>::Make(c, k * k, Activation::kSigmoid,
                                        derive_seed(seed, 20), kind);
  s.component = seeded_matrix<T>(k * k, c, derive_seed(seed, 21),
                                 Distribution::FanInUniform(k * k));
  return s;
}

template <typename T>
FactorizedGDFState<T> FactorizedGDFState<T>::Make(int c, int k, double sigma,
                                                  std::uint64_t seed,
                                                  GeneratorKind kind) {
  FactorizedGDFState<T> s;
  s.k = k;
  s.dw_gen = GeneratorParams<T>::Make(c, k * k * c, Activation::kNone,
                                      derive_seed(seed, 30), kind);
  s.cd_gen = CrossDepthGenerator<T>::Make(c, sigma, derive_seed(seed, 31));
  return s;
}

template <typename T>
NaiveGDFState<T> NaiveGDFState<T>::Make(int c, int k, std::uint64_t seed) {
  NaiveGDFState<T> s;
  s.k = k;
  s.gen = GeneratorParams<T>::Make(c, k * k * c * c, Activation::kNone,
                                   derive_seed(seed, 40));
  return s;
}

// ---------------------------------------------------------------------------
// Generators

template <typename T>
Tensor<T> run_generator(const Tensor<T>& g, const GeneratorParams<T>& gen,
                        OpCounter* counter, const ExecOptions& exec) {
  DGDF_CHECK_SHAPE(g.c() == gen.c_in(), "generator: guidance channels != generator input");
  DGDF_CHECK(gen.pointwise.k == 1, ErrorCode::kInvalidConfig,
             "generator output layer must be 1x1");
  Tensor<T> out;
  if (gen.kind == GeneratorKind::kTwoLayer) {
    out = conv2d(relu(conv2d(g, gen.hidden, counter, exec)), gen.pointwise, counter, exec);
  } else {
    out = conv2d(g, gen.pointwise, counter, exec);
  }
  if (gen.activation == Activation::kSigmoid) out = sigmoid(out);
  return out;
}

// ---------------------------------------------------------------------------
// Scheme A

template <typename T>
Adaptors<T> gen_scheme_a(const Tensor<T>& g, const SchemeAState<T>& s,
                         OpCounter* counter, const ExecOptions& exec) {
  DGDF_CHECK_SHAPE(s.adaptor_gen.n_out() == s.k * s.k * s.m,
                   "scheme A generator width != k^2 m");
  Adaptors<T> a = to_field(run_generator(g, s.adaptor_gen, counter, exec), s.k, s.m);
  if (counter) counter->mem_elems += a.size();
  return a;
}

template <typename T>
Tensor<T> scheme_a_layer1(const Tensor<T>& x, const Adaptors<T>& adaptors,
                          OpCounter* counter, const ExecOptions& exec) {
  DGDF_CHECK_SHAPE(adaptors.h() == x.h() && adaptors.w() == x.w(),
                   "scheme A: adaptor spatial size != input");
  const PatchGrid grid(adaptors.k());
  const int c = x.c(), m = adaptors.depth();
  Tensor<T> inter(x.h(), x.w(), c * m);
  parallel_rows(x.h(), exec, counter, [&](int y0, int y1, OpCounter& cnt) {
    for (int py = y0; py < y1; ++py) {
      for (int px = 0; px < x.w(); ++px) {
        const int p = py * x.w() + px;
        T* out = &inter(py, px, 0);
        for (int d = 0; d < grid.taps(); ++d) {
          const int sy = py + grid[d].dy, sx = px + grid[d].dx;
          const bool inside = x.in_bounds(sy, sx);
          const T* a = &adaptors(p, d, 0);
          for (int l = 0; l < c; ++l) {
            const T xv = inside ? x(sy, sx, l) : T(0);
            T* o = out + static_cast<std::size_t>(l) * m;
            for (int j = 0; j < m; ++j) o[j] += a[j] * xv;
          }
          cnt.macs += static_cast<std::uint64_t>(c) * m;
        }
      }
    }
  });
  if (counter) counter->mem_elems += inter.size();
  return inter;
}

template <typename T>
Tensor<T> scheme_a_layer2(const Tensor<T>& inter, const Matrix<T>& component,
                          OpCounter* counter, const ExecOptions& exec) {
  const int m = component.rows(), c = component.cols();
  DGDF_CHECK_SHAPE(inter.c() == c * m, "scheme A: intermediate channels != c * m");
  Tensor<T> y(inter.h(), inter.w(), c);
  parallel_rows(inter.h(), exec, counter, [&](int y0, int y1, OpCounter& cnt) {
    for (int py = y0; py < y1; ++py) {
      for (int px = 0; px < inter.w(); ++px) {
        const T* in = &inter(py, px, 0);
        for (int l = 0; l < c; ++l) {
          T acc = T(0);
          for (int j = 0; j < m; ++j) acc += component(j, l) * in[l * m + j];
          y(py, px, l) = acc;
        }
      }
      cnt.macs += static_cast<std::uint64_t>(inter.w()) * c * m;
    }
  });
  return y;
}

template <typename T>
Tensor<T> scheme_a_apply(const Tensor<T>& x, const Adaptors<T>& adaptors,
                         const Matrix<T>& component, OpCounter* counter,
                         const ExecOptions& exec) {
  DGDF_CHECK_SHAPE(component.cols() == x.c(), "scheme A: component columns != input channels");
  DGDF_CHECK_SHAPE(component.rows() == adaptors.depth(),
                   "scheme A: component rows != number of bases");
  return scheme_a_layer2(scheme_a_layer1(x, adaptors, counter, exec), component,
                         counter, exec);
}

template <typename T>
PerPixelDepthwiseFilter<T> reconstruct_scheme_a(const Adaptors<T>& adaptors,
                                                const Matrix<T>& component) {
  DGDF_CHECK_SHAPE(component.rows() == adaptors.depth(),
                   "reconstruct_scheme_a: component rows != number of bases");
  const int c = component.cols(), m = component.rows();
  PerPixelDepthwiseFilter<T> f(adaptors.h(), adaptors.w(), adaptors.k(), c);
  for (int p = 0; p < adaptors.pixels(); ++p)
    for (int d = 0; d < adaptors.taps(); ++d)
      for (int l = 0; l < c; ++l) {
        T acc = T(0);
        for (int j = 0; j < m; ++j) acc += adaptors(p, d, j) * component(j, l);
        f(p, d, l) = acc;
      }
  return f;
}

// ---------------------------------------------------------------------------
// Scheme B

template <typename T>
AttentionMap<T> gen_scheme_b(const Tensor<T>& g, const SchemeBState<T>& s,
                             OpCounter* counter, const ExecOptions& exec) {
  DGDF_CHECK_SHAPE(s.attn_gen.n_out() == s.k * s.k, "scheme B generator width != k^2");
  AttentionMap<T> a = to_field(run_generator(g, s.attn_gen, counter, exec), s.k, 1);
  if (counter) counter->mem_elems += a.size();
  return a;
}

template <typename T>
Tensor<T> scheme_b_apply(const Tensor<T>& x, const AttentionMap<T>& attention,
                         const Matrix<T>& component, OpCounter* counter,
                         const ExecOptions& exec) {
  DGDF_CHECK_SHAPE(attention.depth() == 1, "scheme B: attention must have depth 1");
  DGDF_CHECK_SHAPE(attention.h() == x.h() && attention.w() == x.w(),
                   "scheme B: attention spatial size != input");
  DGDF_CHECK_SHAPE(component.cols() == x.c(), "scheme B: component columns != input channels");
  DGDF_CHECK_SHAPE(component.rows() == attention.taps(), "scheme B: component rows != k^2");
  const PatchGrid grid(attention.k());
  const int c = x.c();
  Tensor<T> y(x.h(), x.w(), c);
  parallel_rows(x.h(), exec, counter, [&](int y0, int y1, OpCounter& cnt) {
    for (int py = y0; py < y1; ++py) {
      for (int px = 0; px < x.w(); ++px) {
        const int p = py * x.w() + px;
        T* out = &y(py, px, 0);
        for (int d = 0; d < grid.taps(); ++d) {
          const int sy = py + grid[d].dy, sx = px + grid[d].dx;
          const bool inside = x.in_bounds(sy, sx);
          const T a = attention(p, d, 0);
          for (int l = 0; l < c; ++l) {
            const T wv = a * component(d, l);
            out[l] += wv * (inside ? x(sy, sx, l) : T(0));
          }
          cnt.muls += c;
          cnt.macs += c;
        }
      }
    }
  });
  return y;
}

template <typename T>
PerPixelDepthwiseFilter<T> reconstruct_scheme_b(const AttentionMap<T>& attention,
                                                const Matrix<T>& component) {
  DGDF_CHECK_SHAPE(component.rows() == attention.taps() && attention.depth() == 1,
                   "reconstruct_scheme_b: component rows != k^2");
  const int c = component.cols();
  PerPixelDepthwiseFilter<T> f(attention.h(), attention.w(), attention.k(), c);
  for (int p = 0; p < attention.pixels(); ++p)
    for (int d = 0; d < attention.taps(); ++d)
      for (int l = 0; l < c; ++l) f(p, d, l) = attention(p, d, 0) * component(d, l);
  return f;
}

// ---------------------------------------------------------------------------
// Factorized GDF

template <typename T>
CrossDepthFilter<T> gen_cross_depth(const Tensor<T>& g, const CrossDepthGenerator<T>& cd,
                                    OpCounter* counter) {
  DGDF_CHECK_SHAPE(g.c() == cd.c && cd.squeeze.rows() == cd.c,
                   "cross-depth generator: channel mismatch");
  const int c = cd.c, s = cd.width();
  DGDF_CHECK_SHAPE(cd.excite.rows() == s && cd.excite.cols() == c * c,
                   "cross-depth generator: excite shape");
  const std::vector<T> pooled = global_avgpool(g);
  std::vector<T> squeezed(s);
  for (int i = 0; i < s; ++i) {
    T acc = cd.squeeze_bias[i];
    for (int l = 0; l < c; ++l) acc += cd.squeeze(l, i) * pooled[l];
    squeezed[i] = acc > T(0) ? acc : T(0);
  }
  CrossDepthFilter<T> w(c, c);
  for (int q = 0; q < c * c; ++q) {
    T acc = cd.excite_bias[q];
    for (int i = 0; i < s; ++i) acc += cd.excite(i, q) * squeezed[i];
    w.values()[q] = acc;
  }
  if (counter) {
    counter->macs += static_cast<std::uint64_t>(c) * s + static_cast<std::uint64_t>(s) * c * c;
    counter->mem_elems += static_cast<std::uint64_t>(s) + w.size();
  }
  return w;
}

template <typename T>
GdfFilters<T> gen_gdf(const Tensor<T>& g, const FactorizedGDFState<T>& s,
                      OpCounter* counter, const ExecOptions& exec) {
  const int c = s.cd_gen.c;
  DGDF_CHECK_SHAPE(s.dw_gen.n_out() == s.k * s.k * c, "GDF generator width != k^2 c");
  GdfFilters<T> out;
  out.depthwise = to_field(run_generator(g, s.dw_gen, counter, exec), s.k, c);
  if (counter) counter->mem_elems += out.depthwise.size();
  out.cross = gen_cross_depth(g, s.cd_gen, counter);
  return out;
}

template <typename T>
Tensor<T> gdf_apply(const Tensor<T>& x, const PerPixelDepthwiseFilter<T>& dw,
                    const CrossDepthFilter<T>& cross, OpCounter* counter,
                    const ExecOptions& exec) {
  DGDF_CHECK_SHAPE(dw.h() == x.h() && dw.w() == x.w() && dw.depth() == x.c(),
                   "gdf_apply: depth-wise filter shape inconsistent with input");
  DGDF_CHECK_SHAPE(cross.rows() == x.c(), "gdf_apply: cross-depth rows != input channels");
  const PatchGrid grid(dw.k());
  const int c = x.c(), c_out = cross.cols();
  Tensor<T> y(x.h(), x.w(), c_out);
  parallel_rows(x.h(), exec, counter, [&](int y0, int y1, OpCounter& cnt) {
    std::vector<T> row(c);
    for (int py = y0; py < y1; ++py) {
      for (int px = 0; px < x.w(); ++px) {
        const int p = py * x.w() + px;
        std::fill(row.begin(), row.end(), T(0));
        for (int d = 0; d < grid.taps(); ++d) {
          const int sy = py + grid[d].dy, sx = px + grid[d].dx;
          const bool inside = x.in_bounds(sy, sx);
          const T* wv = &dw(p, d, 0);
          for (int l = 0; l < c; ++l) row[l] += wv[l] * (inside ? x(sy, sx, l) : T(0));
          cnt.macs += c;
        }
        T* out = &y(py, px, 0);
        for (int co = 0; co < c_out; ++co) {
          T acc = T(0);
          for (int l = 0; l < c; ++l) acc += cross(l, co) * row[l];
          out[co] = acc;
        }
        cnt.macs += static_cast<std::uint64_t>(c) * c_out;
      }
    }
  });
  return y;
}

// ---------------------------------------------------------------------------
// Naive GDF

template <typename T>
PerPixelFullFilter<T> naive_generate(const Tensor<T>& g, const NaiveGDFState<T>& s,
                                     OpCounter* counter, std::uint64_t cap,
                                     const ExecOptions& exec) {
  const int c = g.c();
  const std::uint64_t elems = static_cast<std::uint64_t>(g.pixels()) * s.k * s.k *
                              static_cast<std::uint64_t>(c) * c;
  DGDF_CHECK(elems <= cap, ErrorCode::kResourceGuard,
             "naive filter would hold " + std::to_string(elems) +
                 " elements, above the cap of " + std::to_string(cap));
  DGDF_CHECK_SHAPE(s.gen.n_out() == s.k * s.k * c * c, "naive generator width != k^2 c^2");
  Tensor<T> raw = run_generator(g, s.gen, counter, exec);
  // Channel order ((d * c) + ci) * c + co matches the (p, d, ci, co) layout.
  PerPixelFullFilter<T> f;
  f.h = g.h();
  f.w = g.w();
  f.k = s.k;
  f.c_in = c;
  f.c_out = c;
  f.weights = std::move(raw).release();
  if (counter) counter->mem_elems += f.weights.size();
  return f;
}

template <typename T>
Tensor<T> naive_apply(const Tensor<T>& x, const PerPixelFullFilter<T>& f,
                      OpCounter* counter, const ExecOptions& exec) {
  DGDF_CHECK_SHAPE(f.h == x.h() && f.w == x.w() && f.c_in == x.c(),
                   "naive_apply: filter shape inconsistent with input");
  const PatchGrid grid(f.k);
  Tensor<T> y(x.h(), x.w(), f.c_out);
  parallel_rows(x.h(), exec, counter, [&](int y0, int y1, OpCounter& cnt) {
    for (int py = y0; py < y1; ++py) {
      for (int px = 0; px < x.w(); ++px) {
        const int p = py * x.w() + px;
        T* out = &y(py, px, 0);
        for (int d = 0; d < grid.taps(); ++d) {
          const int sy = py + grid[d].dy, sx = px + grid[d].dx;
          const bool inside = x.in_bounds(sy, sx);
          for (int ci = 0; ci < f.c_in; ++ci) {
            const T xv = inside ? x(sy, sx, ci) : T(0);
            const T* wrow = &f.at(p, d, ci, 0);
            for (int co = 0; co < f.c_out; ++co) out[co] += wrow[co] * xv;
          }
          cnt.macs += static_cast<std::uint64_t>(f.c_in) * f.c_out;
        }
      }
    }
  });
  return y;
}

template <typename T>
Tensor<T> naive_gdf(const Tensor<T>& g, const Tensor<T>& x, const NaiveGDFState<T>& s,
                    OpCounter* gen_counter, OpCounter* app_counter, std::uint64_t cap) {
  DGDF_CHECK_SHAPE(g.h() == x.h() && g.w() == x.w() && g.c() == x.c(),
                   "naive_gdf: guidance and target shapes differ");
  return naive_apply(x, naive_generate(g, s, gen_counter, cap), app_counter);
}

// ---------------------------------------------------------------------------
// Baselines

template <typename T>
Tensor<T> add_fuse(const Tensor<T>& x, const Tensor<T>& g) {
  DGDF_CHECK_SHAPE(x.same_shape(g), "add_fuse: shapes differ");
  return add(x, g);
}

template <typename T>
Tensor<T> concat_fuse(const Tensor<T>& x, const Tensor<T>& g) {
  return concat_channels(x, g);
}

#define DGDF_INSTANTIATE(T)                                                         \
  template struct GeneratorParams<T>;                                              \
  template struct CrossDepthGenerator<T>;                                          \
  template struct SchemeAState<T>;                                                 \
  template struct SchemeBState<T>;                                                 \
  template struct FactorizedGDFState<T>;                                           \
  template struct NaiveGDFState<T>;                                                \
  template Tensor<T> run_generator(const Tensor<T>&, const GeneratorParams<T>&,    \
                                   OpCounter*, const ExecOptions&);                \
  template Adaptors<T> gen_scheme_a(const Tensor<T>&, const SchemeAState<T>&,      \
                                    OpCounter*, const ExecOptions&);               \
  template Tensor<T> scheme_a_layer1(const Tensor<T>&, const Adaptors<T>&,         \
                                     OpCounter*, const ExecOptions&);              \
  template Tensor<T> scheme_a_layer2(const Tensor<T>&, const Matrix<T>&,           \
                                     OpCounter*, const ExecOptions&);              \
  template Tensor<T> scheme_a_apply(const Tensor<T>&, const Adaptors<T>&,          \
                                    const Matrix<T>&, OpCounter*, const ExecOptions&); \
  template PerPixelDepthwiseFilter<T> reconstruct_scheme_a(const Adaptors<T>&,     \
                                                           const Matrix<T>&);      \
  template AttentionMap<T> gen_scheme_b(const Tensor<T>&, const SchemeBState<T>&,  \
                                        OpCounter*, const ExecOptions&);           \
  template Tensor<T> scheme_b_apply(const Tensor<T>&, const AttentionMap<T>&,      \
                                    const Matrix<T>&, OpCounter*, const ExecOptions&); \
  template PerPixelDepthwiseFilter<T> reconstruct_scheme_b(const AttentionMap<T>&, \
                                                           const Matrix<T>&);      \
  template CrossDepthFilter<T> gen_cross_depth(const Tensor<T>&,                   \
                                               const CrossDepthGenerator<T>&, OpCounter*); \
  template GdfFilters<T> gen_gdf(const Tensor<T>&, const FactorizedGDFState<T>&,   \
                                 OpCounter*, const ExecOptions&);                  \
  template Tensor<T> gdf_apply(const Tensor<T>&, const PerPixelDepthwiseFilter<T>&, \
                               const CrossDepthFilter<T>&, OpCounter*, const ExecOptions&); \
  template PerPixelFullFilter<T> naive_generate(const Tensor<T>&,                  \
                                                const NaiveGDFState<T>&, OpCounter*, \
                                                std::uint64_t, const ExecOptions&); \
  template Tensor<T> naive_apply(const Tensor<T>&, const PerPixelFullFilter<T>&,   \
                                 OpCounter*, const ExecOptions&);                  \
  template Tensor<T> naive_gdf(const Tensor<T>&, const Tensor<T>&,                 \
                               const NaiveGDFState<T>&, OpCounter*, OpCounter*,     \
                               std::uint64_t);                                     \
  template Tensor<T> add_fuse(const Tensor<T>&, const Tensor<T>&);                 \
  template Tensor<T> concat_fuse(const Tensor<T>&, const Tensor<T>&);

DGDF_INSTANTIATE(float)
DGDF_INSTANTIATE(double)

#undef DGDF_INSTANTIATE

}  // namespace dgdf
