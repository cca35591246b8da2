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

#include "dgdf/toy_net.h"

#include <cmath>
#include <cstdio>

#include "dgdf/data_synth.h"
#include "dgdf/nn_ops.h"

namespace dgdf {
namespace {

// Biases start slightly positive: with a zero bias, pixels where the sparse
// input is empty would sit exactly on the ReLU kink.
StaticFilter<double> conv_layer(int k, int c_in, int c_out, std::uint64_t seed) {
  StaticFilter<double> f(k, c_in, c_out, /*with_bias=*/true);
  fill_values<double>(std::span<double>(f.weights), derive_seed(seed, 1),
                      Distribution::FanInUniform(k * k * c_in));
  fill_values<double>(std::span<double>(f.bias), derive_seed(seed, 2),
                      Distribution::Uniform(0.01, 0.1));
  return f;
}

FusionBlock make_block(const ToyNetConfig& cfg, int c, std::uint64_t seed) {
  FusionBlock b;
  b.kind = cfg.fusion;
  b.c = c;
  switch (cfg.fusion) {
    case ToyFusion::kAdd:
      break;
    case ToyFusion::kConcat:
      b.proj = conv_layer(1, 2 * c, c, seed);
      break;
    case ToyFusion::kGdf:
      b.gdf = FactorizedGDFState<double>::Make(c, cfg.k, cfg.sigma, seed);
      // Start the cross-depth matrix near identity; with a zero excite bias it
      // starts near zero and starves everything upstream of gradient.
      for (int l = 0; l < c; ++l) b.gdf.cd_gen.excite_bias[static_cast<std::size_t>(l) * c + l] = 1.0;
      break;
    case ToyFusion::kSchemeA:
      b.scheme_a = SchemeAState<double>::Make(c, cfg.k, cfg.m, seed);
      break;
    case ToyFusion::kSchemeB:
      b.scheme_b = SchemeBState<double>::Make(c, cfg.k, seed);
      break;
  }
  return b;
}

void add_filter(std::vector<ParamView>& v, const std::string& name, StaticFilter<double>& f) {
  v.push_back({name + ".weight", std::span<double>(f.weights), false});
  if (f.has_bias()) v.push_back({name + ".bias", std::span<double>(f.bias), true});
}

void add_block(std::vector<ParamView>& v, const std::string& name, FusionBlock& b) {
  switch (b.kind) {
    case ToyFusion::kAdd:
      break;
    case ToyFusion::kConcat:
      add_filter(v, name + ".proj", b.proj);
      break;
    case ToyFusion::kGdf:
      add_filter(v, name + ".dw_gen", b.gdf.dw_gen.pointwise);
      v.push_back({name + ".squeeze", b.gdf.cd_gen.squeeze.values(), false});
      v.push_back({name + ".squeeze_bias", std::span<double>(b.gdf.cd_gen.squeeze_bias), true});
      v.push_back({name + ".excite", b.gdf.cd_gen.excite.values(), false});
      v.push_back({name + ".excite_bias", std::span<double>(b.gdf.cd_gen.excite_bias), true});
      break;
    case ToyFusion::kSchemeA:
      add_filter(v, name + ".adaptor_gen", b.scheme_a.adaptor_gen.pointwise);
      v.push_back({name + ".component", b.scheme_a.component.values(), false});
      break;
    case ToyFusion::kSchemeB:
      add_filter(v, name + ".attn_gen", b.scheme_b.attn_gen.pointwise);
      v.push_back({name + ".component", b.scheme_b.component.values(), false});
      break;
  }
}

// Buffers saved by the forward pass of one fusion block.
struct FuseCache {
  TensorD cat;
  GdfFilters<double> gdf;
  Adaptors<double> adaptors;
  AttentionMap<double> attention;
};

TensorD fuse_forward(const FusionBlock& b, const TensorD& x, const TensorD& g, FuseCache& fc) {
  switch (b.kind) {
    case ToyFusion::kAdd:
      return add_fuse(x, g);
    case ToyFusion::kConcat:
      fc.cat = concat_channels(x, g);
      return conv2d(fc.cat, b.proj);
    case ToyFusion::kGdf:
      fc.gdf = gen_gdf(g, b.gdf);
      return gdf_apply(x, fc.gdf.depthwise, fc.gdf.cross);
    case ToyFusion::kSchemeA:
      fc.adaptors = gen_scheme_a(g, b.scheme_a);
      return scheme_a_apply(x, fc.adaptors, b.scheme_a.component);
    case ToyFusion::kSchemeB:
      fc.attention = gen_scheme_b(g, b.scheme_b);
      return scheme_b_apply(x, fc.attention, b.scheme_b.component);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown fusion kind");
}

void accumulate(std::span<double> dst, std::span<const double> src) {
  DGDF_CHECK_SHAPE(dst.size() == src.size(), "gradient accumulation length mismatch");
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void accumulate(StaticFilter<double>& dst, const StaticFilter<double>& src) {
  accumulate(std::span<double>(dst.weights), std::span<const double>(src.weights));
  if (dst.has_bias()) accumulate(std::span<double>(dst.bias), std::span<const double>(src.bias));
}

// Returns (dx, dg) and adds parameter gradients into gb.
std::pair<TensorD, TensorD> fuse_backward(const FusionBlock& b, const TensorD& x,
                                          const TensorD& g, const FuseCache& fc,
                                          const TensorD& dy, FusionBlock& gb) {
  switch (b.kind) {
    case ToyFusion::kAdd:
      return {dy, dy};
    case ToyFusion::kConcat: {
      ConvGrads<double> cg = conv2d_backward(fc.cat, b.proj, dy);
      accumulate(gb.proj, cg.dfilter);
      return concat_backward(cg.dx, b.c);
    }
    case ToyFusion::kGdf: {
      auto ag = gdf_apply_backward(x, fc.gdf.depthwise, fc.gdf.cross, dy);
      auto gg = gen_gdf_backward(g, b.gdf, ag.ddepthwise, ag.dcross);
      accumulate(gb.gdf.dw_gen.pointwise, gg.dw_gen.dpointwise);
      auto& cd = gb.gdf.cd_gen;
      accumulate(cd.squeeze.values(), gg.cd_gen.dsqueeze.values());
      accumulate(std::span<double>(cd.squeeze_bias), std::span<const double>(gg.cd_gen.dsqueeze_bias));
      accumulate(cd.excite.values(), gg.cd_gen.dexcite.values());
      accumulate(std::span<double>(cd.excite_bias), std::span<const double>(gg.cd_gen.dexcite_bias));
      return {std::move(ag.dx), std::move(gg.dg)};
    }
    case ToyFusion::kSchemeA: {
      auto ag = scheme_a_apply_backward(x, fc.adaptors, b.scheme_a.component, dy);
      auto gg = gen_scheme_a_backward(g, b.scheme_a, ag.dadaptors);
      accumulate(gb.scheme_a.adaptor_gen.pointwise, gg.dpointwise);
      accumulate(gb.scheme_a.component.values(), ag.dcomponent.values());
      return {std::move(ag.dx), std::move(gg.dg)};
    }
    case ToyFusion::kSchemeB: {
      auto ag = scheme_b_apply_backward(x, fc.attention, b.scheme_b.component, dy);
      auto gg = gen_scheme_b_backward(g, b.scheme_b, ag.dattention);
      accumulate(gb.scheme_b.attn_gen.pointwise, gg.dpointwise);
      accumulate(gb.scheme_b.component.values(), ag.dcomponent.values());
      return {std::move(ag.dx), std::move(gg.dg)};
    }
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown fusion kind");
}

struct ForwardCache {
  TensorD rgb, din;
  TensorD g0_pre, g0, pg0, g1_pre, g1;
  TensorD x0_pre, x0, f0, pf0, x1_pre, x1, f1, uf1, d_pre, d, s;
  FuseCache fc0, fc1;
  TensorD out;  // normalized depth
};

void run_forward(const ToyNet& net, const TensorD& rgb, const DepthMap& sparse,
                 ForwardCache& fc) {
  DGDF_CHECK_SHAPE(rgb.c() == 3 && sparse.c() == 1 && rgb.h() == sparse.h() &&
                       rgb.w() == sparse.w(),
                   "toy net expects rgb (h, w, 3) and depth (h, w, 1)");
  DGDF_CHECK_SHAPE(rgb.h() % 2 == 0 && rgb.w() % 2 == 0, "toy net needs even h and w");
  fc.rgb = rgb;
  fc.din = scale(sparse, 1.0 / kDepthScaleMm);
  fc.g0_pre = conv2d(fc.rgb, net.rgb0);
  fc.g0 = relu(fc.g0_pre);
  fc.pg0 = avgpool2x2(fc.g0);
  fc.g1_pre = conv2d(fc.pg0, net.rgb1);
  fc.g1 = relu(fc.g1_pre);
  fc.x0_pre = conv2d(fc.din, net.dep0);
  fc.x0 = relu(fc.x0_pre);
  fc.f0 = fuse_forward(net.fuse0, fc.x0, fc.g0, fc.fc0);
  fc.pf0 = avgpool2x2(fc.f0);
  fc.x1_pre = conv2d(fc.pf0, net.dep1);
  fc.x1 = relu(fc.x1_pre);
  fc.f1 = fuse_forward(net.fuse1, fc.x1, fc.g1, fc.fc1);
  fc.uf1 = upsample_nearest2x(fc.f1);
  fc.d_pre = conv2d(fc.uf1, net.dec);
  fc.d = relu(fc.d_pre);
  fc.s = add(fc.d, fc.f0);
  fc.out = conv2d(fc.s, net.out);
}

// dout is the gradient with respect to the normalized output.
void run_backward(const ToyNet& net, const ForwardCache& fc, const TensorD& dout, ToyNet& gr) {
  ConvGrads<double> c_out = conv2d_backward(fc.s, net.out, dout);
  accumulate(gr.out, c_out.dfilter);
  const TensorD& ds = c_out.dx;
  ConvGrads<double> c_dec = conv2d_backward(fc.uf1, net.dec, relu_backward(fc.d_pre, ds));
  accumulate(gr.dec, c_dec.dfilter);
  const TensorD df1 = upsample_nearest2x_backward(c_dec.dx);
  auto [dx1, dg1] = fuse_backward(net.fuse1, fc.x1, fc.g1, fc.fc1, df1, gr.fuse1);
  ConvGrads<double> c_dep1 = conv2d_backward(fc.pf0, net.dep1, relu_backward(fc.x1_pre, dx1));
  accumulate(gr.dep1, c_dep1.dfilter);
  // f0 feeds both the skip connection and the lower scale.
  const TensorD df0 = add(ds, avgpool2x2_backward(c_dep1.dx));
  auto [dx0, dg0_fuse] = fuse_backward(net.fuse0, fc.x0, fc.g0, fc.fc0, df0, gr.fuse0);
  ConvGrads<double> c_dep0 = conv2d_backward(fc.din, net.dep0, relu_backward(fc.x0_pre, dx0));
  accumulate(gr.dep0, c_dep0.dfilter);
  ConvGrads<double> c_rgb1 = conv2d_backward(fc.pg0, net.rgb1, relu_backward(fc.g1_pre, dg1));
  accumulate(gr.rgb1, c_rgb1.dfilter);
  const TensorD dg0 = add(dg0_fuse, avgpool2x2_backward(c_rgb1.dx));
  ConvGrads<double> c_rgb0 = conv2d_backward(fc.rgb, net.rgb0, relu_backward(fc.g0_pre, dg0));
  accumulate(gr.rgb0, c_rgb0.dfilter);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* ToyFusionName(ToyFusion f) {
  switch (f) {
    case ToyFusion::kAdd: return "add";
    case ToyFusion::kConcat: return "concat";
    case ToyFusion::kGdf: return "gdf";
    case ToyFusion::kSchemeA: return "scheme_a";
    case ToyFusion::kSchemeB: return "scheme_b";
  }
  return "unknown";
}

std::vector<ToyFusion> AllToyFusions() {
  return {ToyFusion::kAdd, ToyFusion::kConcat, ToyFusion::kGdf, ToyFusion::kSchemeA,
          ToyFusion::kSchemeB};
}

ToyFusion ParseToyFusion(const std::string& name) {
  for (ToyFusion f : AllToyFusions())
    if (name == ToyFusionName(f)) return f;
  throw Error(ErrorCode::kInvalidConfig, "unknown fusion kind '" + name + "'");
}

void ToyNetConfig::validate() const {
  DGDF_CHECK(widths.size() == 2, ErrorCode::kInvalidConfig, "toy net has exactly two scales");
  for (int c : widths) DGDF_CHECK(c >= 1, ErrorCode::kInvalidConfig, "widths must be >= 1");
  DGDF_CHECK(k >= 1 && k % 2 == 1, ErrorCode::kInvalidConfig, "k must be odd and >= 1");
  DGDF_CHECK(m >= 1, ErrorCode::kInvalidConfig, "m must be >= 1");
  DGDF_CHECK(sigma > 0.0 && sigma <= 1.0, ErrorCode::kInvalidConfig, "sigma must be in (0, 1]");
  DGDF_CHECK(std::isfinite(lr) && lr >= 0.0, ErrorCode::kInvalidConfig, "lr must be >= 0");
  DGDF_CHECK(momentum >= 0.0 && momentum < 1.0, ErrorCode::kInvalidConfig,
             "momentum must be in [0, 1)");
  DGDF_CHECK(iterations >= 0, ErrorCode::kInvalidConfig, "iterations must be >= 0");
}

ToyNet build_toy_net(const ToyNetConfig& cfg) {
  cfg.validate();
  const int c0 = cfg.widths[0], c1 = cfg.widths[1];
  ToyNet net;
  net.config = cfg;
  net.rgb0 = conv_layer(3, 3, c0, derive_seed(cfg.seed, 1));
  net.rgb1 = conv_layer(3, c0, c1, derive_seed(cfg.seed, 2));
  net.dep0 = conv_layer(3, 1, c0, derive_seed(cfg.seed, 3));
  net.dep1 = conv_layer(3, c0, c1, derive_seed(cfg.seed, 4));
  net.dec = conv_layer(3, c1, c0, derive_seed(cfg.seed, 5));
  net.out = conv_layer(1, c0, 1, derive_seed(cfg.seed, 6));
  net.fuse0 = make_block(cfg, c0, derive_seed(cfg.seed, 7));
  net.fuse1 = make_block(cfg, c1, derive_seed(cfg.seed, 8));
  return net;
}

std::vector<ParamView> param_views(ToyNet& net) {
  std::vector<ParamView> v;
  add_filter(v, "rgb0", net.rgb0);
  add_filter(v, "rgb1", net.rgb1);
  add_filter(v, "dep0", net.dep0);
  add_filter(v, "dep1", net.dep1);
  add_block(v, "fuse0", net.fuse0);
  add_block(v, "fuse1", net.fuse1);
  add_filter(v, "dec", net.dec);
  add_filter(v, "out", net.out);
  return v;
}

ParamCount param_count(const ToyNet& net) {
  ParamCount pc;
  for (const ParamView& p : param_views(const_cast<ToyNet&>(net)))
    (p.bias ? pc.biases : pc.weights) += p.data.size();
  return pc;
}

ToyNet zeros_like(const ToyNet& net) {
  ToyNet z = net;
  for (ParamView& p : param_views(z)) std::fill(p.data.begin(), p.data.end(), 0.0);
  return z;
}

std::vector<ToySample> make_toy_dataset(std::uint64_t seed, int n, int h, int w,
                                        double density) {
  DGDF_CHECK(n >= 1, ErrorCode::kInvalidConfig, "dataset needs at least one scene");
  std::vector<ToySample> out;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t s = derive_seed(seed, 100 + i);
    SceneSample scene = synth_scene(s, h, w, 4);
    ToySample t;
    t.rgb = std::move(scene.guidance);
    t.sparse = sparsify(scene.dense_depth, density, derive_seed(s, 1));
    t.gt = std::move(scene.dense_depth);
    out.push_back(std::move(t));
  }
  return out;
}

DepthMap toy_forward(const ToyNet& net, const TensorD& rgb, const DepthMap& sparse) {
  ForwardCache fc;
  run_forward(net, rgb, sparse, fc);
  return scale(fc.out, kDepthScaleMm);
}

namespace {

void append_pattern(const TensorD& pre, std::vector<std::uint8_t>& out) {
  for (double v : pre.values()) out.push_back(v > 0.0);
}

// Sign of the squeeze ReLU inputs inside a GDF block.
void append_se_pattern(const FusionBlock& b, const TensorD& g, std::vector<std::uint8_t>& out) {
  if (b.kind != ToyFusion::kGdf) return;
  const auto& cd = b.gdf.cd_gen;
  const std::vector<double> pooled = global_avgpool(g);
  for (int i = 0; i < cd.width(); ++i) {
    double acc = cd.squeeze_bias[i];
    for (int l = 0; l < cd.c; ++l) acc += cd.squeeze(l, i) * pooled[l];
    out.push_back(acc > 0.0);
  }
}

}  // namespace

double toy_loss(const ToyNet& net, const std::vector<ToySample>& batch, ToyNet* grads,
                std::vector<std::uint8_t>* relu_pattern) {
  DGDF_CHECK(!batch.empty(), ErrorCode::kInvalidInput, "empty batch");
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const ToySample& s : batch) {
    ForwardCache fc;
    run_forward(net, s.rgb, s.sparse, fc);
    if (relu_pattern) {
      for (const TensorD* t : {&fc.g0_pre, &fc.g1_pre, &fc.x0_pre, &fc.x1_pre, &fc.d_pre})
        append_pattern(*t, *relu_pattern);
      append_se_pattern(net.fuse0, fc.g0, *relu_pattern);
      append_se_pattern(net.fuse1, fc.g1, *relu_pattern);
    }
    const MaskedL2 l = masked_l2(scale(fc.out, kDepthScaleMm), s.gt);
    const double norm = 1.0 / (l.valid * kDepthScaleMm * kDepthScaleMm);
    total += l.loss * norm * inv_n;
    if (grads) {
      // d/d(out_norm) = d/d(out_mm) * 1e4.
      run_backward(net, fc, scale(l.dpred, norm * inv_n * kDepthScaleMm), *grads);
    }
  }
  return total;
}

TrainTrace train_toy(ToyNet& net, const std::vector<ToySample>& train_set,
                     const std::vector<ToySample>& held_out, Aggregation aggregation) {
  const ToyNetConfig& cfg = net.config;
  cfg.validate();
  DGDF_CHECK(!train_set.empty(), ErrorCode::kInvalidInput, "no training scenes");
  TrainTrace trace;
  trace.aggregation = aggregation;
  ToyNet velocity = zeros_like(net);
  auto params = param_views(net);
  auto vel = param_views(velocity);
  for (int it = 0; it <= cfg.iterations; ++it) {
    const bool last = it == cfg.iterations;
    ToyNet grads = zeros_like(net);
    const double loss = toy_loss(net, train_set, last ? nullptr : &grads);
    trace.losses.push_back(loss);
    if (!std::isfinite(loss))
      throw DivergenceError("loss became non-finite at iteration " + std::to_string(it),
                            std::move(trace));
    if (last) break;
    auto gv = param_views(grads);
    for (std::size_t t = 0; t < params.size(); ++t) {
      for (std::size_t i = 0; i < params[t].data.size(); ++i) {
        double& v = vel[t].data[i];
        v = cfg.momentum * v + gv[t].data[i];
        params[t].data[i] -= cfg.lr * v;
      }
    }
  }
  if (!held_out.empty()) {
    std::vector<std::pair<DepthMap, DepthMap>> pairs;
    for (const ToySample& s : held_out) pairs.emplace_back(toy_forward(net, s.rgb, s.sparse), s.gt);
    trace.held_out = aggregate_metrics(pairs, aggregation);
  }
  return trace;
}

ToyGradCheck check_toy_gradients(const ToyNet& net, const std::vector<ToySample>& batch,
                                 std::uint64_t seed, double eps) {
  DGDF_CHECK(eps > 0.0, ErrorCode::kInvalidInput, "check_toy_gradients: eps must be > 0");
  ToyNet grads = zeros_like(net);
  std::vector<std::uint8_t> base;
  toy_loss(net, batch, &grads, &base);
  ToyNet work = net;
  auto wv = param_views(work);
  auto gv = param_views(grads);
  ToyGradCheck out;
  std::vector<double> all_a, all_n;
  for (std::size_t t = 0; t < wv.size(); ++t) {
    std::span<double> target = wv[t].data;
    const auto coords = fd_coordinates(target.size(), derive_seed(seed, t));
    RoleCheck rc{wv[t].name, 0};
    std::vector<double> analytic, numeric;
    for (std::size_t i : coords) {
      const double orig = target[i];
      std::vector<std::uint8_t> up_pattern, down_pattern;
      target[i] = orig + eps;
      const double up = toy_loss(work, batch, nullptr, &up_pattern);
      target[i] = orig - eps;
      const double down = toy_loss(work, batch, nullptr, &down_pattern);
      target[i] = orig;
      DGDF_CHECK(std::isfinite(up) && std::isfinite(down), ErrorCode::kNonFinite,
                 "check_toy_gradients: loss evaluation is not finite");
      // Central differences are meaningless across a kink.
      if (up_pattern != base || down_pattern != base) {
        ++rc.kink_skipped;
        continue;
      }
      analytic.push_back(gv[t].data[i]);
      numeric.push_back((up - down) / (2.0 * eps));
    }
    rc.checked = analytic.size();
    score_role(rc, analytic, numeric);
    all_a.insert(all_a.end(), analytic.begin(), analytic.end());
    all_n.insert(all_n.end(), numeric.begin(), numeric.end());
    out.checked += rc.checked;
    out.kink_skipped += rc.kink_skipped;
    out.worst_role_rel_err = std::max(out.worst_role_rel_err, rc.norm_rel_err);
    out.roles.push_back(rc);
  }
  RoleCheck global{"all", all_a.size()};
  score_role(global, all_a, all_n);
  out.global_rel_err = global.norm_rel_err;
  return out;
}

TensorBundle toy_to_bundle(const ToyNet& net) {
  const ToyNetConfig& c = net.config;
  TensorBundle b;
  b.attrs["fusion"] = ToyFusionName(c.fusion);
  b.attrs["width0"] = std::to_string(c.widths[0]);
  b.attrs["width1"] = std::to_string(c.widths[1]);
  b.attrs["k"] = std::to_string(c.k);
  b.attrs["m"] = std::to_string(c.m);
  b.attrs["sigma"] = format_double(c.sigma);
  b.attrs["seed"] = std::to_string(c.seed);
  b.attrs["lr"] = format_double(c.lr);
  b.attrs["momentum"] = format_double(c.momentum);
  b.attrs["iterations"] = std::to_string(c.iterations);
  for (const ParamView& p : param_views(const_cast<ToyNet&>(net)))
    b.tensors.emplace_back(p.name, TensorD(1, 1, static_cast<int>(p.data.size()),
                                           std::vector<double>(p.data.begin(), p.data.end())));
  return b;
}

ToyNet toy_from_bundle(const TensorBundle& b) {
  auto attr = [&](const char* key) -> const std::string& {
    auto it = b.attrs.find(key);
    DGDF_CHECK(it != b.attrs.end(), ErrorCode::kInvalidConfig,
               std::string("checkpoint lacks attr '") + key + "'");
    return it->second;
  };
  ToyNetConfig c;
  c.fusion = ParseToyFusion(attr("fusion"));
  c.widths = {b.attr_int("width0"), b.attr_int("width1")};
  c.k = b.attr_int("k");
  c.m = b.attr_int("m");
  c.sigma = std::stod(attr("sigma"));
  c.seed = std::stoull(attr("seed"));
  c.lr = std::stod(attr("lr"));
  c.momentum = std::stod(attr("momentum"));
  c.iterations = b.attr_int("iterations");
  ToyNet net = build_toy_net(c);
  for (ParamView& p : param_views(net)) {
    const TensorD& t = b.get(p.name);
    DGDF_CHECK_SHAPE(t.size() == p.data.size(), "checkpoint tensor '" + p.name + "' has the wrong size");
    std::copy(t.values().begin(), t.values().end(), p.data.begin());
  }
  return net;
}

}  // namespace dgdf
