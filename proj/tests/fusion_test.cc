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

#include <cmath>

#include <gtest/gtest.h>

#include "dgdf/conv_oracle.h"
#include "dgdf/error.h"
#include "dgdf/fusion.h"
#include "oracle.h"

namespace dgdf {
namespace {

const Distribution kU = Distribution::Uniform(-1, 1);

// Owned copy of a container's values; safe to range-for over temporaries.
template <typename C>
std::vector<double> Vals(const C& c) {
  auto v = c.values();
  return {v.begin(), v.end()};
}

std::vector<double> Flat(std::span<const double> s) { return {s.begin(), s.end()}; }

// Generator output computed by the test-side 1x1 conv.
std::vector<double> OracleGenerator(const TensorD& g, const GeneratorParams<double>& gen) {
  return oracle::conv(g.data(), g.h(), g.w(), g.c(), gen.pointwise.weights,
                      gen.pointwise.bias, 1, gen.n_out());
}

// W'[p, d, l] = sum_j A[p, d, j] D[j, l], then depth-wise.
std::vector<double> OracleSchemeA(const TensorD& x, const Adaptors<double>& a,
                                  const Matrix<double>& comp) {
  const int n = x.pixels(), t = a.taps(), m = a.depth(), c = x.c();
  std::vector<double> w(static_cast<std::size_t>(n) * t * c, 0.0);
  for (int p = 0; p < n; ++p)
    for (int d = 0; d < t; ++d)
      for (int l = 0; l < c; ++l)
        for (int j = 0; j < m; ++j)
          w[(p * t + d) * c + l] += a.values()[(p * t + d) * m + j] * comp.values()[j * c + l];
  return oracle::depthwise(x.data(), x.h(), x.w(), c, w, a.k());
}

std::vector<double> OracleSchemeB(const TensorD& x, const AttentionMap<double>& a,
                                  const Matrix<double>& comp) {
  const int n = x.pixels(), t = a.taps(), c = x.c();
  std::vector<double> w(static_cast<std::size_t>(n) * t * c);
  for (int p = 0; p < n; ++p)
    for (int d = 0; d < t; ++d)
      for (int l = 0; l < c; ++l)
        w[(p * t + d) * c + l] = a.values()[p * t + d] * comp.values()[d * c + l];
  return oracle::depthwise(x.data(), x.h(), x.w(), c, w, a.k());
}

TEST(SchemeATest, ZeroGuidanceZeroBias) {
  auto s = SchemeAState<double>::Make(4, 3, 2, 1);
  std::fill(s.adaptor_gen.pointwise.bias.begin(), s.adaptor_gen.pointwise.bias.end(), 0.0);
  auto a = gen_scheme_a(TensorD(5, 6, 4), s);
  EXPECT_EQ(a.size(), 5u * 6 * 9 * 2);
  for (double v : a.values()) EXPECT_EQ(v, 0.0);
}

TEST(SchemeATest, GeneratorMatchesPointwiseOracle) {
  auto s = SchemeAState<double>::Make(3, 3, 4, 2);
  TensorD g = seeded_fill<double>(4, 5, 3, 3, kU);
  auto a = gen_scheme_a(g, s);
  auto want = OracleGenerator(g, s.adaptor_gen);
  // Channel d * m + j of the generator is adaptors(p, d, j).
  for (int p = 0; p < 20; ++p)
    for (int d = 0; d < 9; ++d)
      for (int j = 0; j < 4; ++j)
        EXPECT_NEAR(a(p, d, j), want[p * 36 + d * 4 + j], 1e-14);
}

TEST(SchemeATest, SingleBaseOnesCollapsesToDepthwise) {
  TensorD x = seeded_fill<double>(5, 5, 3, 4, kU);
  Adaptors<double> a(5, 5, 3, 1);
  fill_values<double>(a.values(), 5, kU);
  PerPixelDepthwiseFilter<double> f(5, 5, 3, 3);
  for (int p = 0; p < 25; ++p)
    for (int d = 0; d < 9; ++d)
      for (int l = 0; l < 3; ++l) f(p, d, l) = a(p, d, 0);
  EXPECT_LE(max_abs_diff(scheme_a_apply(x, a, Matrix<double>(1, 3, 1.0)),
                         perpixel_depthwise_ref(x, f)),
            1e-14);
}

TEST(SchemeATest, ZeroComponent) {
  TensorD x = seeded_fill<double>(4, 4, 2, 6, kU);
  Adaptors<double> a(4, 4, 3, 2);
  fill_values<double>(a.values(), 7, kU);
  for (double v : Vals(scheme_a_apply(x, a, Matrix<double>(2, 2)))) EXPECT_EQ(v, 0.0);
}

TEST(SchemeATest, ApplyMatchesReconstructionOracle) {
  TensorD x = seeded_fill<double>(6, 6, 8, 8, kU);
  Adaptors<double> a(6, 6, 3, 4);
  fill_values<double>(a.values(), 9, kU);
  auto comp = seeded_matrix<double>(4, 8, 10, kU);
  auto y = scheme_a_apply(x, a, comp);
  EXPECT_LE(oracle::max_abs(y.data(), OracleSchemeA(x, a, comp)), 1e-10);
  EXPECT_LE(max_abs_diff(y, perpixel_depthwise_ref(x, reconstruct_scheme_a(a, comp))), 1e-10);
}

TEST(SchemeATest, ReconstructSelectsComponentRows) {
  const int c = 3;
  Adaptors<double> a(2, 2, 3, c);
  for (int p = 0; p < 4; ++p)
    for (int d = 0; d < 9; ++d) a(p, d, p % c) = 1.0;
  auto comp = seeded_matrix<double>(c, c, 11, kU);
  auto w = reconstruct_scheme_a(a, comp);
  for (int p = 0; p < 4; ++p)
    for (int d = 0; d < 9; ++d)
      for (int l = 0; l < c; ++l) EXPECT_EQ(w(p, d, l), comp(p % c, l));
  Adaptors<double> r(2, 2, 3, c);
  fill_values<double>(r.values(), 12, kU);
  auto wi = reconstruct_scheme_a(r, Matrix<double>::identity(c));
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(wi.values()[i], r.values()[i]);
}

TEST(SchemeATest, ShapeMismatch) {
  Adaptors<double> a(4, 4, 3, 2);
  EXPECT_THROW(scheme_a_apply(TensorD(4, 4, 3), a, Matrix<double>(2, 2)), Error);
  EXPECT_THROW(scheme_a_apply(TensorD(4, 5, 2), a, Matrix<double>(2, 2)), Error);
}

TEST(SchemeBTest, AttentionValues) {
  auto s = SchemeBState<double>::Make(3, 3, 1);
  std::fill(s.attn_gen.pointwise.bias.begin(), s.attn_gen.pointwise.bias.end(), 0.0);
  for (double v : Vals(gen_scheme_b(TensorD(3, 3, 3), s))) EXPECT_EQ(v, 0.5);
  std::fill(s.attn_gen.pointwise.bias.begin(), s.attn_gen.pointwise.bias.end(), 50.0);
  for (double v : Vals(gen_scheme_b(TensorD(3, 3, 3), s))) EXPECT_NEAR(v, 1.0, 1e-9);
  TensorD g = seeded_fill<double>(3, 4, 3, 2, kU);
  auto a = gen_scheme_b(g, s);
  auto raw = OracleGenerator(g, s.attn_gen);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    EXPECT_NEAR(a.values()[i], 1.0 / (1.0 + std::exp(-raw[i])), 1e-15);
    EXPECT_GT(a.values()[i], 0.0);
    EXPECT_LT(a.values()[i], 1.0 + 1e-15);
  }
}

TEST(SchemeBTest, UnitAttentionIsStaticDepthwise) {
  TensorD x = seeded_fill<double>(5, 4, 3, 3, kU);
  AttentionMap<double> ones(5, 4, 3, 1, 1.0);
  auto comp = seeded_matrix<double>(9, 3, 4, kU);
  StaticFilter<double> f(3, 3, 3, false);
  for (int d = 0; d < 9; ++d)
    for (int l = 0; l < 3; ++l) f.w(d, l, l) = comp(d, l);
  EXPECT_LE(max_abs_diff(scheme_b_apply(x, ones, comp), conv2d_ref(x, f)), 1e-14);
  AttentionMap<double> zeros(5, 4, 3, 1);
  for (double v : Vals(scheme_b_apply(x, zeros, comp))) EXPECT_EQ(v, 0.0);
}

TEST(SchemeBTest, ApplyMatchesReconstructionOracle) {
  TensorD x = seeded_fill<double>(7, 5, 6, 5, kU);
  AttentionMap<double> a(7, 5, 5, 1);
  fill_values<double>(a.values(), 6, Distribution::Uniform(0, 1));
  auto comp = seeded_matrix<double>(25, 6, 7, kU);
  auto y = scheme_b_apply(x, a, comp);
  EXPECT_LE(oracle::max_abs(y.data(), OracleSchemeB(x, a, comp)), 1e-10);
  EXPECT_LE(max_abs_diff(y, perpixel_depthwise_ref(x, reconstruct_scheme_b(a, comp))), 1e-10);
}

TEST(SchemeBTest, SinglePrecision) {
  TensorD x = seeded_fill<double>(8, 8, 16, 8, kU);
  AttentionMap<double> a(8, 8, 3, 1);
  fill_values<double>(a.values(), 9, Distribution::Uniform(0, 1));
  auto comp = seeded_matrix<double>(9, 16, 10, kU);
  auto yf = scheme_b_apply(x.cast<float>(), a.cast<float>(), comp.cast<float>());
  auto want = OracleSchemeB(x, a, comp);
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(yf.values()[i], want[i], 1e-4);
}

// Scheme B with D[d, l] = u[d] v[l] is scheme A with one base A[p, d] u[d]
// and component row v.
TEST(RankOneTest, SchemeBIsSchemeASpecialCase) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TensorD x = seeded_fill<double>(6, 5, 4, seed, kU);
    AttentionMap<double> a(6, 5, 3, 1);
    fill_values<double>(a.values(), seed + 10, Distribution::Uniform(0, 1));
    auto u = seeded_matrix<double>(9, 1, seed + 20, kU);
    auto v = seeded_matrix<double>(1, 4, seed + 30, kU);
    Matrix<double> comp(9, 4);
    for (int d = 0; d < 9; ++d)
      for (int l = 0; l < 4; ++l) comp(d, l) = u(d, 0) * v(0, l);
    Adaptors<double> aa(6, 5, 3, 1);
    for (int p = 0; p < 30; ++p)
      for (int d = 0; d < 9; ++d) aa(p, d, 0) = a(p, d, 0) * u(d, 0);
    EXPECT_LE(max_abs_diff(scheme_b_apply(x, a, comp), scheme_a_apply(x, aa, v)), 1e-10);
  }
}

TEST(GdfTest, ZeroGuidance) {
  auto s = FactorizedGDFState<double>::Make(4, 3, 0.25, 1);
  std::fill(s.dw_gen.pointwise.bias.begin(), s.dw_gen.pointwise.bias.end(), 0.0);
  std::fill(s.cd_gen.squeeze_bias.begin(), s.cd_gen.squeeze_bias.end(), 0.0);
  std::fill(s.cd_gen.excite_bias.begin(), s.cd_gen.excite_bias.end(), 0.0);
  auto f = gen_gdf(TensorD(3, 3, 4), s);
  for (double v : f.depthwise.values()) EXPECT_EQ(v, 0.0);
  for (double v : f.cross.values()) EXPECT_EQ(v, 0.0);
}

TEST(GdfTest, CrossDepthMatchesMatrixPipeline) {
  const int c = 6;
  auto s = FactorizedGDFState<double>::Make(c, 3, 0.5, 2);
  TensorD g = seeded_fill<double>(4, 3, c, 3, kU);
  auto w = gen_gdf(g, s).cross;
  const int sw = s.cd_gen.width();
  ASSERT_EQ(sw, 3);
  std::vector<double> pooled(c, 0.0);
  for (int p = 0; p < 12; ++p)
    for (int l = 0; l < c; ++l) pooled[l] += g.data()[p * c + l] / 12.0;
  std::vector<double> hidden(sw);
  for (int i = 0; i < sw; ++i) {
    double a = s.cd_gen.squeeze_bias[i];
    for (int l = 0; l < c; ++l) a += pooled[l] * s.cd_gen.squeeze.values()[l * sw + i];
    hidden[i] = std::max(a, 0.0);
  }
  for (int q = 0; q < c * c; ++q) {
    double a = s.cd_gen.excite_bias[q];
    for (int i = 0; i < sw; ++i) a += hidden[i] * s.cd_gen.excite.values()[i * c * c + q];
    EXPECT_NEAR(w.values()[q], a, 1e-14);
  }
}

TEST(GdfTest, ApplyEqualsComposedFullFilter) {
  TensorD x = seeded_fill<double>(5, 6, 5, 4, kU);
  PerPixelDepthwiseFilter<double> dw(5, 6, 3, 5);
  fill_values<double>(dw.values(), 5, kU);
  auto cross = seeded_matrix<double>(5, 5, 6, kU);
  auto y = gdf_apply(x, dw, cross);
  std::vector<double> full(static_cast<std::size_t>(30) * 9 * 25);
  for (int p = 0; p < 30; ++p)
    for (int d = 0; d < 9; ++d)
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
          full[((p * 9 + d) * 5 + a) * 5 + b] = dw(p, d, a) * cross(a, b);
  EXPECT_LE(oracle::max_abs(y.data(), oracle::full_dynamic(x.data(), 5, 6, 5, full, 3, 5)),
            1e-10);
  EXPECT_LE(max_abs_diff(gdf_apply(x, dw, Matrix<double>::identity(5)),
                         perpixel_depthwise_ref(x, dw)),
            1e-14);
  PerPixelDepthwiseFilter<double> center(5, 6, 3, 5);
  for (int p = 0; p < 30; ++p)
    for (int l = 0; l < 5; ++l) center(p, 4, l) = 1.0;
  EXPECT_LE(max_abs_diff(gdf_apply(x, center, cross), cross_depth_ref(x, cross)), 1e-14);
}

TEST(NaiveTest, MatchesMaterializedFilter) {
  auto s = NaiveGDFState<double>::Make(3, 3, 1);
  TensorD g = seeded_fill<double>(4, 4, 3, 2, kU);
  TensorD x = seeded_fill<double>(4, 4, 3, 3, kU);
  OpCounter gen;
  auto y = naive_gdf(g, x, s, &gen);
  auto f = OracleGenerator(g, s.gen);
  EXPECT_EQ(f.size(), 16u * 9 * 9);
  EXPECT_EQ(gen.mem_elems, 16u * 9 * 9);
  EXPECT_LE(oracle::max_abs(y.data(), oracle::full_dynamic(x.data(), 4, 4, 3, f, 3, 3)),
            1e-12);
}

TEST(NaiveTest, ZeroGuidanceAndGuard) {
  auto s = NaiveGDFState<double>::Make(2, 3, 1);
  std::fill(s.gen.pointwise.bias.begin(), s.gen.pointwise.bias.end(), 0.0);
  TensorD x = seeded_fill<double>(3, 3, 2, 3, kU);
  for (double v : Vals(naive_gdf(TensorD(3, 3, 2), x, s))) EXPECT_EQ(v, 0.0);
  try {
    naive_gdf(TensorD(3, 3, 2), x, s, nullptr, nullptr, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResourceGuard);
  }
}

TEST(SpatialVarianceTest, DifferentGuidanceDifferentAdaptors) {
  // Identity-like generator: adaptor channel i reads guidance channel i % c.
  auto s = SchemeAState<double>::Make(2, 1, 2, 1);
  std::fill(s.adaptor_gen.pointwise.weights.begin(), s.adaptor_gen.pointwise.weights.end(), 0.0);
  std::fill(s.adaptor_gen.pointwise.bias.begin(), s.adaptor_gen.pointwise.bias.end(), 0.0);
  for (int i = 0; i < 2; ++i) s.adaptor_gen.pointwise.w(0, i, i) = 1.0;
  TensorD g(1, 2, 2);
  g(0, 0, 0) = 1.0;
  g(0, 1, 1) = 2.0;
  auto a = gen_scheme_a(g, s);
  EXPECT_NE(a(0, 0, 0), a(1, 0, 0));
  EXPECT_NE(a(0, 0, 1), a(1, 0, 1));
  TensorD g2 = g;
  g2(0, 0, 0) = -1.0;
  EXPECT_NE(gen_scheme_a(g2, s)(0, 0, 0), a(0, 0, 0));
}

TEST(BaselineTest, AddAndConcat) {
  TensorD x = seeded_fill<double>(3, 3, 2, 1, kU);
  TensorD g = seeded_fill<double>(3, 3, 2, 2, kU);
  EXPECT_TRUE(add_fuse(x, TensorD(3, 3, 2)) == x);
  EXPECT_LE(max_abs_diff(sub(add_fuse(x, g), g), x), 1e-15);
  TensorD h = seeded_fill<double>(3, 3, 5, 3, kU);
  auto cat = concat_fuse(x, h);
  EXPECT_EQ(cat.c(), 7);
  EXPECT_EQ(cat(1, 2, 1), x(1, 2, 1));
  EXPECT_EQ(cat(1, 2, 6), h(1, 2, 4));
  EXPECT_THROW(add_fuse(x, h), Error);
  EXPECT_THROW(concat_fuse(x, TensorD(2, 3, 1)), Error);
}

TEST(FusionMethodTest, NamesRoundTrip) {
  for (auto m : {FusionMethod::kNaive, FusionMethod::kGdf, FusionMethod::kSchemeA,
                 FusionMethod::kSchemeB})
    EXPECT_EQ(ParseFusionMethod(FusionMethodName(m)), m);
  EXPECT_THROW(ParseFusionMethod("bogus"), Error);
  EXPECT_EQ(squeeze_width(64, 0.25), 16);
  EXPECT_EQ(squeeze_width(30, 0.1), 3);
  EXPECT_EQ(squeeze_width(3, 0.25), 1);
}

}  // namespace
}  // namespace dgdf
