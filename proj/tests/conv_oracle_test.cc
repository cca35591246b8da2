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

#include <gtest/gtest.h>

#include "dgdf/conv_oracle.h"
#include "dgdf/error.h"
#include "dgdf/nn_ops.h"
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

StaticFilter<double> RandomFilter(int k, int ci, int co, bool bias, std::uint64_t seed) {
  StaticFilter<double> f(k, ci, co, bias);
  fill_values<double>(f.weights, seed, kU);
  if (bias) fill_values<double>(f.bias, seed + 1, kU);
  return f;
}

TEST(Conv2dRefTest, CenterIdentity) {
  TensorD x = seeded_fill<double>(4, 5, 3, 1, kU);
  StaticFilter<double> f(3, 3, 3, false);
  for (int c = 0; c < 3; ++c) f.w(4, c, c) = 1.0;
  EXPECT_TRUE(conv2d_ref(x, f) == x);
}

TEST(Conv2dRefTest, OnesKernelBorderCounts) {
  TensorD x(4, 4, 1, 1.0);
  StaticFilter<double> f(3, 1, 1, false);
  for (double& v : f.weights) v = 1.0;
  TensorD y = conv2d_ref(x, f);
  EXPECT_EQ(y(0, 0, 0), 4.0);
  EXPECT_EQ(y(0, 3, 0), 4.0);
  EXPECT_EQ(y(0, 1, 0), 6.0);
  EXPECT_EQ(y(2, 0, 0), 6.0);
  EXPECT_EQ(y(1, 1, 0), 9.0);
  EXPECT_EQ(y(2, 2, 0), 9.0);
}

TEST(Conv2dRefTest, MatchesLoopOracle) {
  TensorD x = seeded_fill<double>(6, 7, 3, 2, kU);
  auto f = RandomFilter(3, 3, 2, true, 3);
  TensorD y = conv2d_ref(x, f);
  auto want = oracle::conv(x.data(), 6, 7, 3, f.weights, f.bias, 3, 2);
  EXPECT_LE(oracle::max_abs(y.data(), want), 1e-14);
}

TEST(Conv2dRefTest, FastPathAgrees) {
  for (int k : {1, 3, 5}) {
    TensorD x = seeded_fill<double>(5, 6, 4, 10 + k, kU);
    auto f = RandomFilter(k, 4, 3, true, 20 + k);
    EXPECT_LE(max_abs_diff(conv2d(x, f), conv2d_ref(x, f)), 1e-13) << "k=" << k;
  }
}

TEST(Conv2dRefTest, ShapeMismatch) {
  TensorD x(3, 3, 2);
  StaticFilter<double> f(3, 3, 1, false);
  try {
    conv2d_ref(x, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}

TEST(DynamicConvRefTest, ConstantFilterIsStaticConv) {
  TensorD x = seeded_fill<double>(4, 4, 2, 4, kU);
  auto f = RandomFilter(3, 2, 3, false, 5);
  EXPECT_LE(max_abs_diff(dynamic_conv_ref(x, broadcast_static(f, 4, 4)), conv2d_ref(x, f)),
            1e-14);
}

TEST(DynamicConvRefTest, ZeroFilter) {
  TensorD x = seeded_fill<double>(4, 4, 2, 4, kU);
  PerPixelFullFilter<double> f(4, 4, 3, 2, 2);
  for (double v : Vals(dynamic_conv_ref(x, f))) EXPECT_EQ(v, 0.0);
}

TEST(DynamicConvRefTest, MatchesLoopOracle) {
  TensorD x = seeded_fill<double>(4, 4, 2, 6, kU);
  PerPixelFullFilter<double> f(4, 4, 3, 2, 2);
  fill_values<double>(f.weights, 7, kU);
  auto want = oracle::full_dynamic(x.data(), 4, 4, 2, f.weights, 3, 2);
  EXPECT_LE(oracle::max_abs(dynamic_conv_ref(x, f).data(), want), 1e-14);
}

TEST(DepthwiseRefTest, CenterOne) {
  TensorD x = seeded_fill<double>(5, 5, 3, 8, kU);
  PerPixelDepthwiseFilter<double> f(5, 5, 3, 3);
  for (int p = 0; p < 25; ++p)
    for (int c = 0; c < 3; ++c) f(p, 4, c) = 1.0;
  EXPECT_TRUE(perpixel_depthwise_ref(x, f) == x);
}

TEST(DepthwiseRefTest, ConstantInterior) {
  TensorD x(5, 5, 2, 2.0);
  PerPixelDepthwiseFilter<double> f(5, 5, 3, 2, 0.5);
  TensorD y = perpixel_depthwise_ref(x, f);
  EXPECT_DOUBLE_EQ(y(2, 2, 0), 9.0);
  EXPECT_DOUBLE_EQ(y(2, 2, 1), 9.0);
  EXPECT_DOUBLE_EQ(y(0, 0, 0), 4.0);
}

TEST(DepthwiseRefTest, MatchesLoopOracle) {
  TensorD x = seeded_fill<double>(5, 5, 4, 9, kU);
  PerPixelDepthwiseFilter<double> f(5, 5, 3, 4);
  fill_values<double>(f.values(), 10, kU);
  std::vector<double> fw(f.values().begin(), f.values().end());
  auto want = oracle::depthwise(x.data(), 5, 5, 4, fw, 3);
  EXPECT_LE(oracle::max_abs(perpixel_depthwise_ref(x, f).data(), want), 1e-14);
}

TEST(CrossDepthRefTest, IdentityAndSum) {
  TensorD x = seeded_fill<double>(3, 4, 3, 11, kU);
  EXPECT_TRUE(cross_depth_ref(x, Matrix<double>::identity(3)) == x);
  TensorD s = cross_depth_ref(x, Matrix<double>(3, 2, 1.0));
  for (int y = 0; y < 3; ++y)
    for (int xx = 0; xx < 4; ++xx) {
      const double sum = x(y, xx, 0) + x(y, xx, 1) + x(y, xx, 2);
      EXPECT_NEAR(s(y, xx, 0), sum, 1e-15);
      EXPECT_NEAR(s(y, xx, 1), sum, 1e-15);
    }
}

TEST(CrossDepthRefTest, MatchesLoopOracle) {
  TensorD x = seeded_fill<double>(3, 4, 5, 12, kU);
  auto m = seeded_matrix<double>(5, 3, 13, kU);
  std::vector<double> mw(m.values().begin(), m.values().end());
  auto want = oracle::pointwise(x.data(), 12, 5, mw, 3);
  EXPECT_LE(oracle::max_abs(cross_depth_ref(x, m).data(), want), 1e-14);
  EXPECT_THROW(cross_depth_ref(x, Matrix<double>(4, 3)), Error);
}

TEST(CompositionTest, RankOneFactorization) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TensorD x = seeded_fill<double>(5, 6, 4, 100 + seed, kU);
    PerPixelDepthwiseFilter<double> g(5, 6, 3, 4);
    fill_values<double>(g.values(), 200 + seed, kU);
    auto hm = seeded_matrix<double>(4, 3, 300 + seed, kU);
    TensorD a = dynamic_conv_ref(x, compose_rank1(g, hm));
    TensorD b = cross_depth_ref(perpixel_depthwise_ref(x, g), hm);
    double scale = 0;
    for (double v : a.values()) scale = std::max(scale, std::abs(v));
    EXPECT_LE(max_abs_diff(a, b), 1e-12 * scale);
  }
}

TEST(LinearityTest, InputAndFilter) {
  TensorD x1 = seeded_fill<double>(4, 4, 2, 1, kU);
  TensorD x2 = seeded_fill<double>(4, 4, 2, 2, kU);
  PerPixelDepthwiseFilter<double> f(4, 4, 3, 2);
  fill_values<double>(f.values(), 3, kU);
  TensorD lhs = perpixel_depthwise_ref(axpby(2.0, x1, -0.5, x2), f);
  TensorD rhs = axpby(2.0, perpixel_depthwise_ref(x1, f), -0.5, perpixel_depthwise_ref(x2, f));
  EXPECT_LE(max_abs_diff(lhs, rhs), 1e-14);

  PerPixelDepthwiseFilter<double> f2(4, 4, 3, 2);
  fill_values<double>(f2.values(), 4, kU);
  PerPixelDepthwiseFilter<double> fs(4, 4, 3, 2);
  for (std::size_t i = 0; i < fs.size(); ++i)
    fs.values()[i] = f.values()[i] + 3.0 * f2.values()[i];
  TensorD lf = perpixel_depthwise_ref(x1, fs);
  TensorD rf = axpby(1.0, perpixel_depthwise_ref(x1, f), 3.0, perpixel_depthwise_ref(x1, f2));
  EXPECT_LE(max_abs_diff(lf, rf), 1e-14);
}

}  // namespace
}  // namespace dgdf
