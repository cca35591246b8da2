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

#include "dgdf/error.h"
#include "dgdf/grad.h"
#include "dgdf/metrics.h"
#include "oracle.h"

namespace dgdf {
namespace {

class OpGradTest : public ::testing::TestWithParam<OpTag> {};

TEST_P(OpGradTest, MatchesCentralDifferences) {
  const OpTag tag = GetParam();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const OpInputs in = random_op_inputs(tag, seed);
    for (const RoleCheck& rc : check_op_gradients(tag, in, seed + 1000)) {
      EXPECT_GT(rc.checked, 0u);
      EXPECT_LE(rc.max_rel_err, 1e-4) << OpTagName(tag) << " role " << rc.role << " seed "
                                      << seed;
    }
  }
}

TEST_P(OpGradTest, ZeroUpstreamGivesZero) {
  const OpTag tag = GetParam();
  const OpInputs in = random_op_inputs(tag, 3);
  FlatArray y = forward_op(tag, in);
  GradBundle g = backward(tag, in, FlatArray::zeros(y.shape));
  EXPECT_FALSE(g.empty());
  for (const auto& [role, arr] : g) {
    EXPECT_EQ(arr.shape, in.at(role).shape) << role;
    for (double v : arr.data) EXPECT_EQ(v, 0.0) << OpTagName(tag) << " " << role;
  }
}

TEST_P(OpGradTest, LinearInUpstream) {
  const OpTag tag = GetParam();
  const OpInputs in = random_op_inputs(tag, 4);
  FlatArray y = forward_op(tag, in);
  FlatArray a = FlatArray::zeros(y.shape), b = FlatArray::zeros(y.shape),
            mix = FlatArray::zeros(y.shape);
  for (std::size_t i = 0; i < y.size(); ++i) {
    a.data[i] = std::sin(1.0 + i);
    b.data[i] = std::cos(2.0 * i);
    mix.data[i] = 2.0 * a.data[i] - 3.0 * b.data[i];
  }
  GradBundle ga = backward(tag, in, a), gb = backward(tag, in, b), gm = backward(tag, in, mix);
  for (const auto& [role, arr] : gm)
    for (std::size_t i = 0; i < arr.size(); ++i)
      EXPECT_NEAR(arr.data[i], 2.0 * ga[role].data[i] - 3.0 * gb[role].data[i], 1e-10);
}

INSTANTIATE_TEST_SUITE_P(AllOps, OpGradTest, ::testing::ValuesIn(AllOpTags()),
                         [](const auto& info) { return std::string(OpTagName(info.param)); });

TEST(OpTagTest, ParseRoundTrip) {
  for (OpTag t : AllOpTags()) EXPECT_EQ(ParseOpTag(OpTagName(t)), t);
  try {
    ParseOpTag("no_such_op");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownOp);
  }
}

TEST(BackwardTest, RejectsWrongUpstreamShape) {
  const OpInputs in = random_op_inputs(OpTag::kConv2d, 1);
  EXPECT_THROW(backward(OpTag::kConv2d, in, FlatArray::zeros({1, 1, 1})), Error);
}

// Attention of ones: dX is the adjoint of a static depth-wise conv, i.e. a
// correlation with the flipped kernel.
TEST(BackwardTest, SchemeBUnitAttentionAdjoint) {
  const int h = 5, w = 4, c = 3;
  TensorD x = seeded_fill<double>(h, w, c, 1, Distribution::Uniform(-1, 1));
  AttentionMap<double> ones(h, w, 3, 1, 1.0);
  auto comp = seeded_matrix<double>(9, c, 2, Distribution::Uniform(-1, 1));
  TensorD dy = seeded_fill<double>(h, w, c, 3, Distribution::Uniform(-1, 1));
  auto g = scheme_b_apply_backward(x, ones, comp, dy);
  std::vector<double> flipped(static_cast<std::size_t>(h) * w * 9 * c);
  for (int p = 0; p < h * w; ++p)
    for (int d = 0; d < 9; ++d)
      for (int l = 0; l < c; ++l) flipped[(p * 9 + d) * c + l] = comp(8 - d, l);
  auto want = oracle::depthwise(dy.data(), h, w, c, flipped, 3);
  EXPECT_LE(oracle::max_abs(g.dx.data(), want), 1e-14);
}

TEST(FiniteDiffTest, Square) {
  std::vector<double> theta = {3.0};
  auto g = finite_diff([](std::span<const double> t) { return t[0] * t[0]; }, theta, 1e-3);
  EXPECT_NEAR(g[0], 6.0, 1e-6);
}

TEST(FiniteDiffTest, ConstantIsZero) {
  std::vector<double> theta = {1.0, -2.0, 0.5};
  auto g = finite_diff([](std::span<const double>) { return 7.0; }, theta, 1e-5);
  for (double v : g) EXPECT_EQ(v, 0.0);
}

TEST(FiniteDiffTest, NonFiniteThrows) {
  std::vector<double> theta = {0.0};
  try {
    finite_diff([](std::span<const double> t) { return t[0] > 0 ? 1.0 : std::nan(""); }, theta,
                1e-5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
  }
}

TEST(FiniteDiffTest, MaskedL2OnePixel) {
  const double gt = 2000.0;
  std::vector<double> theta = {2300.0};
  auto loss = [&](std::span<const double> t) {
    return masked_l2(DepthMap(1, 1, 1, std::vector<double>{t[0]}),
                     DepthMap(1, 1, 1, std::vector<double>{gt}))
        .loss;
  };
  auto num = finite_diff(loss, theta, 1e-3);
  const double hand = 2.0 * (theta[0] - gt);
  EXPECT_LE(relative_error(hand, num[0]), 1e-8);
  auto r = masked_l2(DepthMap(1, 1, 1, std::vector<double>{theta[0]}),
                     DepthMap(1, 1, 1, std::vector<double>{gt}));
  EXPECT_DOUBLE_EQ(r.dpred.values()[0], hand);
}

// The tighter per-case bound for smooth ops on a single random instance.
TEST(FiniteDiffTest, SmoothOpsTightBound) {
  for (OpTag tag : {OpTag::kConv2d, OpTag::kPerPixelDepthwise, OpTag::kCrossDepth,
                    OpTag::kSchemeAApply, OpTag::kSchemeBApply, OpTag::kGdfApply,
                    OpTag::kGenSchemeB}) {
    for (const RoleCheck& rc : check_op_gradients(tag, random_op_inputs(tag, 77), 78))
      EXPECT_LE(rc.max_rel_err, 1e-6) << OpTagName(tag) << " " << rc.role;
  }
}

TEST(FdCoordinatesTest, FullOrSampled) {
  EXPECT_EQ(fd_coordinates(10, 1).size(), 10u);
  auto s = fd_coordinates(1000, 1);
  ASSERT_EQ(s.size(), 10u);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1], s[i]);
  EXPECT_EQ(s, fd_coordinates(1000, 1));
}

TEST(RelativeErrorTest, Floor) {
  EXPECT_EQ(relative_error(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(relative_error(1e-9, 0.0), 1e-9 / 1e-8);
  EXPECT_DOUBLE_EQ(relative_error(2.0, 1.0), 0.5);
}

}  // namespace
}  // namespace dgdf
