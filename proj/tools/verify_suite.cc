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

#include "verify_suite.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>

#include "dgdf/conv_oracle.h"
#include "dgdf/cost_model.h"
#include "dgdf/data_synth.h"
#include "dgdf/fusion.h"
#include "dgdf/grad.h"
#include "dgdf/metrics.h"
#include "dgdf/rng.h"
#include "dgdf/toy_net.h"

namespace dgdf {
namespace {

std::string fmt(const char* f, double v) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

struct Dims {
  int h, w, c, k, m;
};

Dims random_dims(Rng& rng) {
  static const int kKs[] = {1, 3, 5};
  return {rng.uniform_int(1, 8), rng.uniform_int(1, 8), rng.uniform_int(1, 16),
          kKs[rng.below(3)], rng.uniform_int(1, 8)};
}

TensorD uniform_tensor(int h, int w, int c, std::uint64_t seed) {
  return seeded_fill<double>(h, w, c, seed, Distribution::Uniform(-1.0, 1.0));
}

KernelField<double> uniform_field(int h, int w, int k, int depth, std::uint64_t seed) {
  KernelField<double> f(h, w, k, depth);
  fill_values<double>(f.values(), seed, Distribution::Uniform(-1.0, 1.0));
  return f;
}

PropertyResult scheme_a_equivalence(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 201));
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Dims d = random_dims(rng);
    const std::uint64_t s = rng.next();
    const TensorD x = uniform_tensor(d.h, d.w, d.c, derive_seed(s, 1));
    const auto a = uniform_field(d.h, d.w, d.k, d.m, derive_seed(s, 2));
    const auto comp = seeded_matrix<double>(d.m, d.c, derive_seed(s, 3), Distribution::Uniform(-1, 1));
    worst = std::max(worst, max_abs_diff(scheme_a_apply(x, a, comp),
                                         perpixel_depthwise_ref(x, reconstruct_scheme_a(a, comp))));
  }
  return {"scheme_a_two_layer_vs_oracle", worst <= 1e-10, fmt("max_abs_diff=%.3e", worst)};
}

PropertyResult scheme_b_equivalence(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 202));
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Dims d = random_dims(rng);
    const std::uint64_t s = rng.next();
    const TensorD x = uniform_tensor(d.h, d.w, d.c, derive_seed(s, 1));
    auto a = uniform_field(d.h, d.w, d.k, 1, derive_seed(s, 2));
    const auto comp = seeded_matrix<double>(d.k * d.k, d.c, derive_seed(s, 3), Distribution::Uniform(-1, 1));
    worst = std::max(worst, max_abs_diff(scheme_b_apply(x, a, comp),
                                         perpixel_depthwise_ref(x, reconstruct_scheme_b(a, comp))));
  }
  return {"scheme_b_fused_vs_oracle", worst <= 1e-10, fmt("max_abs_diff=%.3e", worst)};
}

PropertyResult gdf_factorization(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 203));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Dims d = random_dims(rng);
    const int c_out = rng.uniform_int(1, 16);
    const std::uint64_t s = rng.next();
    const TensorD x = uniform_tensor(d.h, d.w, d.c, derive_seed(s, 1));
    const auto dw = uniform_field(d.h, d.w, d.k, d.c, derive_seed(s, 2));
    const auto cross = seeded_matrix<double>(d.c, c_out, derive_seed(s, 3), Distribution::Uniform(-1, 1));
    worst = std::max(worst, max_abs_diff(gdf_apply(x, dw, cross),
                                         dynamic_conv_ref(x, compose_rank1(dw, cross))));
  }
  return {"gdf_factorization_law", worst <= 1e-10, fmt("max_abs_diff=%.3e", worst)};
}

PropertyResult rank1_special_case(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 204));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Dims d = random_dims(rng);
    const std::uint64_t s = rng.next();
    const TensorD x = uniform_tensor(d.h, d.w, d.c, derive_seed(s, 1));
    const auto att = uniform_field(d.h, d.w, d.k, 1, derive_seed(s, 2));
    const int taps = d.k * d.k;
    std::vector<double> u(taps), v(d.c);
    fill_values<double>(std::span<double>(u), derive_seed(s, 3), Distribution::Uniform(-1, 1));
    fill_values<double>(std::span<double>(v), derive_seed(s, 4), Distribution::Uniform(-1, 1));
    Matrix<double> comp_b(taps, d.c);
    for (int t = 0; t < taps; ++t)
      for (int l = 0; l < d.c; ++l) comp_b(t, l) = u[t] * v[l];
    KernelField<double> adapt(d.h, d.w, d.k, 1);
    for (int p = 0; p < d.h * d.w; ++p)
      for (int t = 0; t < taps; ++t) adapt(p, t, 0) = att(p, t, 0) * u[t];
    Matrix<double> comp_a(1, d.c, v);
    worst = std::max(worst, max_abs_diff(scheme_b_apply(x, att, comp_b),
                                         scheme_a_apply(x, adapt, comp_a)));
  }
  return {"scheme_b_rank1_equals_scheme_a_m1", worst <= 1e-10, fmt("max_abs_diff=%.3e", worst)};
}

PropertyResult op_gradients(std::uint64_t seed) {
  double worst = 0.0;
  std::string worst_op;
  for (OpTag t : AllOpTags()) {
    for (int i = 0; i < 20; ++i) {
      const std::uint64_t s = derive_seed(seed, 300 + i);
      for (const RoleCheck& rc : check_op_gradients(t, random_op_inputs(t, s), s)) {
        if (rc.max_rel_err > worst) {
          worst = rc.max_rel_err;
          worst_op = std::string(OpTagName(t)) + "." + rc.role;
        }
      }
    }
  }
  return {"op_gradients_vs_finite_differences", worst <= 1e-4,
          fmt("max_rel_err=%.3e", worst) + " at " + worst_op};
}

PropertyResult network_gradients(std::uint64_t seed) {
  double worst = 0.0, worst_role = 0.0;
  std::size_t skipped = 0, checked = 0;
  for (ToyFusion f : AllToyFusions()) {
    for (int i = 0; i < 4; ++i) {
      ToyNetConfig cfg;
      cfg.fusion = f;
      cfg.seed = derive_seed(seed, 400 + i);
      const ToyNet net = build_toy_net(cfg);
      const auto batch = make_toy_dataset(derive_seed(seed, 500 + i), 1, 8, 8, 0.3);
      const ToyGradCheck r = check_toy_gradients(net, batch, derive_seed(seed, 600 + i));
      worst = std::max(worst, r.global_rel_err);
      worst_role = std::max(worst_role, r.worst_role_rel_err);
      skipped += r.kink_skipped;
      checked += r.checked;
    }
  }
  const bool ok = worst <= 1e-4 && worst_role <= 1e-2 && skipped * 20 <= checked;
  return {"toy_net_gradients_vs_finite_differences", ok,
          fmt("global_rel_err=%.3e", worst) + fmt(" worst_tensor=%.3e", worst_role) +
              " kink_skipped=" + std::to_string(skipped) + "/" + std::to_string(checked + skipped)};
}

PropertyResult cost_instrumentation(std::uint64_t seed) {
  int cases = 0, bad = 0;
  std::string first_bad;
  const int sides[] = {4, 8};  // N = 16, 64
  for (FusionMethod method : {FusionMethod::kNaive, FusionMethod::kGdf, FusionMethod::kSchemeA,
                              FusionMethod::kSchemeB})
    for (int side : sides)
      for (int c : {2, 4, 8})
        for (int k : {1, 3})
          for (int m : {1, 2, 4}) {
            const CostReport f = cost_formula(method, side * side, c, k, m, 0.25);
            const CostReport r = instrument_forward(method, side, side, c, k, m, 0.25,
                                                    derive_seed(seed, ++cases));
            if (!(f.gen == r.gen && f.app == r.app && f.gen_spatial_mem == r.gen_spatial_mem)) {
              if (bad++ == 0) first_bad = cost_csv_row(r);
            }
          }
  return {"cost_counters_equal_formula", bad == 0,
          "cases=" + std::to_string(cases) + " mismatches=" + std::to_string(bad) +
              (bad ? " first=" + first_bad : "")};
}

PropertyResult cost_ordering(std::uint64_t) {
  const std::uint64_t n = 4096;
  const auto b = cost_formula(FusionMethod::kSchemeB, n, 64, 3, 8);
  const auto a = cost_formula(FusionMethod::kSchemeA, n, 64, 3, 8);
  const auto g = cost_formula(FusionMethod::kGdf, n, 64, 3, 8);
  const auto v = cost_formula(FusionMethod::kNaive, n, 64, 3, 8);
  const bool ok = b.gen_spatial_mem * 64 == g.gen_spatial_mem &&
                  b.gen_spatial_mem * 8 == a.gen_spatial_mem &&
                  b.total().params < a.total().params && a.total().params < g.total().params &&
                  g.total().params < v.total().params;
  return {"large_scale_ordering", ok,
          "params b/a/gdf/naive=" + std::to_string(b.total().params) + "/" +
              std::to_string(a.total().params) + "/" + std::to_string(g.total().params) + "/" +
              std::to_string(v.total().params)};
}

PropertyResult metrics_example(std::uint64_t) {
  const DepthMap gt(1, 2, 1, std::vector<double>{2000, 4000});
  const DepthMap pred(1, 2, 1, std::vector<double>{1000, 5000});
  const MetricsReport r = metrics(pred, gt);
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  const bool ok = near(r.rmse_mm, 1000) && near(r.mae_mm, 1000) && near(r.rel, 0.375) &&
                  r.imae_per_km && near(*r.imae_per_km, 275) && r.delta1 == 0.0 &&
                  r.delta2 == 50.0 && r.delta3 == 50.0;
  return {"metrics_worked_example", ok, metrics_csv_row(r)};
}

PropertyResult sparsify_counts(std::uint64_t seed) {
  int bad = 0, cases = 0;
  for (int v : {37, 100, 1000}) {
    DepthMap d(1, v, 1, 1500.0);
    for (int i = 1; i <= 10; ++i) {
      const double r = i / 10.0;
      const DepthMap s = sparsify(d, r, derive_seed(seed, 700 + cases++));
      const auto kept = std::count_if(s.values().begin(), s.values().end(),
                                      [](double x) { return x > 0.0; });
      if (kept != std::llround(r * v)) ++bad;
    }
  }
  return {"sparsify_exact_counts", bad == 0,
          "cases=" + std::to_string(cases) + " mismatches=" + std::to_string(bad)};
}

}  // namespace

std::vector<PropertyResult> run_verify_suite(std::uint64_t seed, int threads) {
  const std::vector<std::function<PropertyResult(std::uint64_t)>> props = {
      scheme_a_equivalence, scheme_b_equivalence, gdf_factorization, rank1_special_case,
      op_gradients,         network_gradients,    cost_instrumentation, cost_ordering,
      metrics_example,      sparsify_counts};
  std::vector<PropertyResult> out(props.size());
  auto run_one = [&](std::size_t i) {
    try {
      out[i] = props[i](seed);
    } catch (const std::exception& e) {
      out[i] = {"property_" + std::to_string(i), false, std::string("exception: ") + e.what()};
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(props.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < props.size();) run_one(i);
    });
  for (std::size_t i; (i = next++) < props.size();) run_one(i);
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace dgdf
