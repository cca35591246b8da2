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

#include "dgdf/cost_model.h"

#include <sstream>

namespace dgdf {

CostReport cost_formula(FusionMethod method, std::uint64_t n, int c, int k, int m,
                        double sigma) {
  DGDF_CHECK(n >= 1 && c >= 1 && k >= 1 && m >= 1, ErrorCode::kInvalidInput,
             "cost_formula: N, C, K, M must be >= 1");
  DGDF_CHECK(sigma > 0.0 && sigma <= 1.0, ErrorCode::kInvalidInput,
             "cost_formula: sigma must lie in (0, 1]");
  const std::uint64_t C = c, K2 = static_cast<std::uint64_t>(k) * k, M = m, N = n;
  CostReport r;
  r.method = method;
  r.n = n;
  r.c = c;
  r.k = k;
  r.m = m;
  r.sigma = sigma;
  switch (method) {
    case FusionMethod::kNaive:
      r.gen = {C * C * C * K2, 2 * N * C * C * C * K2, N * C * C * K2};
      r.app = {0, 2 * N * C * C * K2, 0};
      r.gen_spatial_mem = N * C * C * K2;
      break;
    case FusionMethod::kGdf: {
      const std::uint64_t s = squeeze_width(c, sigma);
      r.gen = {C * C * K2 + s * C + s * C * C, 2 * N * C * C * K2 + 2 * (s * C + s * C * C),
               N * C * K2 + s + C * C};
      r.app = {0, 2 * N * C * K2 + 2 * N * C * C, 0};
      r.gen_spatial_mem = N * C * K2;
      break;
    }
    case FusionMethod::kSchemeA:
      r.gen = {C * K2 * M, 2 * N * C * K2 * M, N * K2 * M};
      r.app = {C * M, 2 * N * C * K2 * M + 2 * N * C * M, N * C * M};
      r.gen_spatial_mem = N * K2 * M;
      break;
    case FusionMethod::kSchemeB:
      r.gen = {C * K2, 2 * N * C * K2, N * K2};
      r.app = {C * K2, 3 * N * C * K2, 0};
      r.gen_spatial_mem = N * K2;
      break;
  }
  return r;
}

CostReport instrument_forward(FusionMethod method, int h, int w, int c, int k, int m,
                              double sigma, std::uint64_t seed, std::uint64_t naive_cap) {
  const TensorD g = seeded_fill<double>(h, w, c, derive_seed(seed, 1), Distribution::Uniform(-1.0, 1.0));
  const TensorD x = seeded_fill<double>(h, w, c, derive_seed(seed, 2), Distribution::Uniform(-1.0, 1.0));
  const std::uint64_t state_seed = derive_seed(seed, 3);
  OpCounter gc, ac;
  CostReport r;
  r.method = method;
  r.n = static_cast<std::uint64_t>(h) * w;
  r.c = c;
  r.k = k;
  r.m = m;
  r.sigma = sigma;
  switch (method) {
    case FusionMethod::kNaive: {
      auto s = NaiveGDFState<double>::Make(c, k, state_seed);
      naive_gdf(g, x, s, &gc, &ac, naive_cap);
      r.gen.params = s.gen.weight_count();
      r.gen_spatial_mem = gc.mem_elems;
      break;
    }
    case FusionMethod::kGdf: {
      auto s = FactorizedGDFState<double>::Make(c, k, sigma, state_seed);
      GdfFilters<double> f;
      f.depthwise = gen_gdf(g, s, &gc).depthwise;
      // Re-run the SE branch alone to split the spatial share out of gc.
      OpCounter se;
      f.cross = gen_cross_depth(g, s.cd_gen, &se);
      gdf_apply(x, f.depthwise, f.cross, &ac);
      r.gen.params = s.dw_gen.weight_count() + s.cd_gen.weight_count();
      r.gen_spatial_mem = gc.mem_elems - se.mem_elems;
      break;
    }
    case FusionMethod::kSchemeA: {
      auto s = SchemeAState<double>::Make(c, k, m, state_seed);
      auto a = gen_scheme_a(g, s, &gc);
      scheme_a_apply(x, a, s.component, &ac);
      r.gen.params = s.adaptor_gen.weight_count();
      r.app.params = s.component.size();
      r.gen_spatial_mem = gc.mem_elems;
      break;
    }
    case FusionMethod::kSchemeB: {
      auto s = SchemeBState<double>::Make(c, k, state_seed);
      auto a = gen_scheme_b(g, s, &gc);
      scheme_b_apply(x, a, s.component, &ac);
      r.gen.params = s.attn_gen.weight_count();
      r.app.params = s.component.size();
      r.gen_spatial_mem = gc.mem_elems;
      break;
    }
  }
  r.gen.flops = gc.flops();
  r.gen.mem_elems = gc.mem_elems;
  r.app.flops = ac.flops();
  r.app.mem_elems = ac.mem_elems;
  return r;
}

std::string cost_csv_header() {
  return "method,n,c,k,m,sigma,gen_params,gen_flops,gen_mem_elems,app_params,app_flops,"
         "app_mem_elems,total_params,total_flops,total_mem_elems";
}

std::string cost_csv_row(const CostReport& r) {
  const CostPart t = r.total();
  std::ostringstream os;
  os << FusionMethodName(r.method) << ',' << r.n << ',' << r.c << ',' << r.k << ',' << r.m
     << ',' << r.sigma << ',' << r.gen.params << ',' << r.gen.flops << ',' << r.gen.mem_elems
     << ',' << r.app.params << ',' << r.app.flops << ',' << r.app.mem_elems << ',' << t.params
     << ',' << t.flops << ',' << t.mem_elems;
  return os.str();
}

}  // namespace dgdf
