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

#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "dgdf/cost_model.h"
#include "dgdf/error.h"
#include "dgdf/fusion.h"

namespace dgdf {
namespace {

const Distribution kU = Distribution::Uniform(-1, 1);

TEST(CostFormulaTest, SchemeBHandValues) {
  auto r = cost_formula(FusionMethod::kSchemeB, 16, 4, 3);
  EXPECT_EQ(r.total().params, 72u);
  EXPECT_EQ(r.gen.flops, 1152u);
  EXPECT_EQ(r.gen.mem_elems, 144u);
  EXPECT_EQ(r.app.flops, 1728u);
  EXPECT_EQ(r.app.mem_elems, 0u);
}

TEST(CostFormulaTest, SchemeAHandValues) {
  auto r = cost_formula(FusionMethod::kSchemeA, 16, 4, 3, 2);
  EXPECT_EQ(r.total().params, 80u);
  EXPECT_EQ(r.gen.flops, 2304u);
  EXPECT_EQ(r.gen.mem_elems, 288u);
  EXPECT_EQ(r.app.flops, 2560u);
  EXPECT_EQ(r.app.mem_elems, 128u);
}

TEST(CostFormulaTest, NaiveHandValues) {
  auto r = cost_formula(FusionMethod::kNaive, 16, 4, 3);
  EXPECT_EQ(r.total().params, 576u);
  EXPECT_EQ(r.gen.flops, 18432u);
  EXPECT_EQ(r.gen.mem_elems, 2304u);
  EXPECT_EQ(r.app.flops, 4608u);
}

// C=4, K=3, sigma=0.25 -> one squeeze unit: params 144 + 4 + 16.
TEST(CostFormulaTest, GdfHandValues) {
  auto r = cost_formula(FusionMethod::kGdf, 16, 4, 3, 1, 0.25);
  EXPECT_EQ(r.total().params, 164u);
  EXPECT_EQ(r.gen.flops, 2 * 16 * 144 + 2 * (4 + 16u));
  EXPECT_EQ(r.gen.mem_elems, 16 * 36 + 1 + 16u);
  EXPECT_EQ(r.gen_spatial_mem, 16 * 36u);
  EXPECT_EQ(r.app.flops, 1152u + 512u);
}

TEST(CostFormulaTest, RejectsBadInput) {
  const std::vector<std::function<void()>> cases = {
      [] { cost_formula(FusionMethod::kSchemeA, 0, 4, 3); },
      [] { cost_formula(FusionMethod::kSchemeA, 16, 0, 3); },
      [] { cost_formula(FusionMethod::kSchemeA, 16, 4, 3, 0); },
      [] { cost_formula(FusionMethod::kGdf, 16, 4, 3, 1, 0.0); },
      [] { cost_formula(FusionMethod::kGdf, 16, 4, 3, 1, 1.5); }};
  for (const auto& bad : cases) {
    try {
      bad();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
    }
  }
}

TEST(CountersTest, GdfCrossDepthStage) {
  const int h = 4, w = 4, c = 4, k = 3;
  TensorD x = seeded_fill<double>(h, w, c, 1, kU);
  PerPixelDepthwiseFilter<double> dw(h, w, k, c);
  fill_values<double>(dw.values(), 2, kU);
  OpCounter cnt;
  gdf_apply(x, dw, seeded_matrix<double>(c, c, 3, kU), &cnt);
  const std::uint64_t depthwise_flops = 2ull * h * w * c * k * k;
  EXPECT_EQ(cnt.flops() - depthwise_flops, 512u);
}

TEST(CountersTest, SchemeAIntermediate) {
  TensorD x = seeded_fill<double>(4, 4, 4, 1, kU);
  Adaptors<double> a(4, 4, 3, 2);
  fill_values<double>(a.values(), 2, kU);
  OpCounter cnt;
  auto inter = scheme_a_layer1(x, a, &cnt);
  EXPECT_EQ(inter.size(), 128u);
  EXPECT_EQ(cnt.mem_elems, 128u);
}

TEST(InstrumentTest, MatchesFormulaOnSmallGrid) {
  for (auto method : {FusionMethod::kNaive, FusionMethod::kGdf, FusionMethod::kSchemeA,
                      FusionMethod::kSchemeB})
    for (int c : {2, 5})
      for (int k : {1, 3})
        for (int m : {1, 3}) {
          auto got = instrument_forward(method, 4, 3, c, k, m, 0.25, 9);
          auto want = cost_formula(method, 12, c, k, m, 0.25);
          EXPECT_EQ(got.gen, want.gen) << FusionMethodName(method) << " c" << c << " k" << k;
          EXPECT_EQ(got.app, want.app) << FusionMethodName(method) << " c" << c << " k" << k;
          EXPECT_EQ(got.gen_spatial_mem, want.gen_spatial_mem);
        }
}

TEST(InstrumentTest, NaiveGuard) {
  try {
    instrument_forward(FusionMethod::kNaive, 8, 8, 8, 3, 1, 0.25, 1, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResourceGuard);
  }
}

TEST(CostCsvTest, HeaderAndRow) {
  EXPECT_EQ(cost_csv_header(),
            "method,n,c,k,m,sigma,gen_params,gen_flops,gen_mem_elems,app_params,app_flops,"
            "app_mem_elems,total_params,total_flops,total_mem_elems");
  auto row = cost_csv_row(cost_formula(FusionMethod::kSchemeB, 16, 4, 3));
  EXPECT_EQ(row.substr(0, 9), "scheme_b,");
  EXPECT_NE(row.find(",1152,144,"), std::string::npos);
}

}  // namespace
}  // namespace dgdf
