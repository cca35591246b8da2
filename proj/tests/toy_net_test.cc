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

#include <filesystem>

#include <gtest/gtest.h>

#include "dgdf/cost_model.h"
#include "dgdf/error.h"
#include "dgdf/tensor_io.h"
#include "dgdf/toy_net.h"

namespace dgdf {
namespace {

ToyNetConfig Config(ToyFusion f, int iterations = 10) {
  ToyNetConfig c;
  c.fusion = f;
  c.iterations = iterations;
  c.seed = 3;
  return c;
}

TEST(ToyNetTest, SameSeedSameParameters) {
  for (ToyFusion f : AllToyFusions()) {
    ToyNet a = build_toy_net(Config(f));
    ToyNet b = build_toy_net(Config(f));
    auto va = param_views(a), vb = param_views(b);
    ASSERT_EQ(va.size(), vb.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
      EXPECT_EQ(va[i].name, vb[i].name);
      EXPECT_TRUE(std::equal(va[i].data.begin(), va[i].data.end(), vb[i].data.begin()));
    }
  }
}

TEST(ToyNetTest, SchemeAMinusSchemeBWeights) {
  ToyNetConfig ca = Config(ToyFusion::kSchemeA), cb = Config(ToyFusion::kSchemeB);
  const auto wa = param_count(build_toy_net(ca)).weights;
  const auto wb = param_count(build_toy_net(cb)).weights;
  std::int64_t want = 0;
  for (int c : ca.widths) {
    want += static_cast<std::int64_t>(
        cost_formula(FusionMethod::kSchemeA, 1, c, ca.k, ca.m).total().params);
    want -= static_cast<std::int64_t>(
        cost_formula(FusionMethod::kSchemeB, 1, c, cb.k).total().params);
  }
  EXPECT_EQ(static_cast<std::int64_t>(wa) - static_cast<std::int64_t>(wb), want);
  EXPECT_EQ(want, 528);
}

TEST(ToyNetTest, ForwardShape) {
  auto data = make_toy_dataset(1, 1, 32, 32, 0.3);
  for (ToyFusion f : AllToyFusions()) {
    ToyNet net = build_toy_net(Config(f));
    DepthMap out = toy_forward(net, data[0].rgb, data[0].sparse);
    EXPECT_EQ(out.h(), 32);
    EXPECT_EQ(out.w(), 32);
    EXPECT_EQ(out.c(), 1);
    EXPECT_TRUE(all_finite<double>(out.values()));
  }
}

TEST(ToyNetTest, DatasetDensity) {
  auto data = make_toy_dataset(5, 3, 16, 16, 0.3);
  ASSERT_EQ(data.size(), 3u);
  for (const auto& s : data) {
    int valid = 0;
    for (double v : s.sparse.values()) valid += v > 0;
    EXPECT_EQ(valid, 77);  // round(0.3 * 256)
  }
}

TEST(ToyNetTest, ZeroLearningRateConstantTrace) {
  ToyNetConfig c = Config(ToyFusion::kSchemeB, 5);
  c.lr = 0.0;
  ToyNet net = build_toy_net(c);
  auto data = make_toy_dataset(2, 2, 16, 16, 0.3);
  auto trace = train_toy(net, data, data);
  ASSERT_EQ(trace.losses.size(), 6u);
  for (double l : trace.losses) EXPECT_EQ(l, trace.losses[0]);
}

TEST(ToyNetTest, ShortRunDecreasesLoss) {
  for (ToyFusion f : AllToyFusions()) {
    ToyNet net = build_toy_net(Config(f, 30));
    auto data = make_toy_dataset(2, 3, 16, 16, 0.3);
    auto trace = train_toy(net, data, data);
    EXPECT_LT(trace.losses.back(), trace.losses.front()) << ToyFusionName(f);
  }
}

TEST(ToyNetTest, GradientsMatchFiniteDifferences) {
  auto data = make_toy_dataset(9, 1, 8, 8, 0.5);
  for (ToyFusion f : AllToyFusions()) {
    ToyNet net = build_toy_net(Config(f));
    auto gc = check_toy_gradients(net, data, 4);
    EXPECT_LE(gc.global_rel_err, 1e-4) << ToyFusionName(f);
    EXPECT_LE(gc.worst_role_rel_err, 1e-2) << ToyFusionName(f);
    EXPECT_GT(gc.checked, 0u);
  }
}

TEST(ToyNetTest, CheckpointRoundTrip) {
  ToyNet net = build_toy_net(Config(ToyFusion::kGdf));
  const auto dir = (std::filesystem::temp_directory_path() / "dgdf_toy_ckpt").string();
  std::filesystem::create_directories(dir);
  write_bundle(dir, "net", toy_to_bundle(net));
  ToyNet back = toy_from_bundle(read_bundle(dir + "/net.manifest"));
  EXPECT_EQ(back.config.fusion, ToyFusion::kGdf);
  auto va = param_views(net), vb = param_views(back);
  ASSERT_EQ(va.size(), vb.size());
  for (std::size_t i = 0; i < va.size(); ++i)
    EXPECT_TRUE(std::equal(va[i].data.begin(), va[i].data.end(), vb[i].data.begin()));
  auto data = make_toy_dataset(1, 1, 16, 16, 0.3);
  EXPECT_TRUE(toy_forward(net, data[0].rgb, data[0].sparse) ==
              toy_forward(back, data[0].rgb, data[0].sparse));
  std::filesystem::remove_all(dir);
}

TEST(ToyNetTest, ConfigValidation) {
  try {
    ParseToyFusion("mul");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
  }
  ToyNetConfig c;
  c.widths = {8};
  EXPECT_THROW(c.validate(), Error);
  c = ToyNetConfig{};
  c.k = 2;
  EXPECT_THROW(c.validate(), Error);
}

}  // namespace
}  // namespace dgdf
