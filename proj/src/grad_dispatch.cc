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

// Role-keyed forward/backward dispatch and the finite-difference checker.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dgdf/grad.h"
#include "dgdf/metrics.h"
#include "dgdf/nn_ops.h"

namespace dgdf {
namespace {

std::size_t shape_size(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

int isqrt_exact(int v) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v))));
  DGDF_CHECK_SHAPE(r * r == v, "tap axis length is not a square");
  return r;
}

void expect_rank(const FlatArray& a, std::size_t rank, const char* what) {
  DGDF_CHECK_SHAPE(a.shape.size() == rank && shape_size(a.shape) == a.data.size(),
                   std::string("operand '") + what + "' has the wrong rank or length");
}

TensorD as_tensor(const FlatArray& a, const char* what) {
  expect_rank(a, 3, what);
  return TensorD(a.shape[0], a.shape[1], a.shape[2], a.data);
}

FlatArray flat(const TensorD& t) {
  return {{t.h(), t.w(), t.c()}, std::vector<double>(t.values().begin(), t.values().end())};
}

FlatArray flat(const Matrix<double>& m) {
  return {{m.rows(), m.cols()}, std::vector<double>(m.values().begin(), m.values().end())};
}

FlatArray flat(const KernelField<double>& f) {
  return {{f.h(), f.w(), f.taps(), f.depth()},
          std::vector<double>(f.values().begin(), f.values().end())};
}

FlatArray flat_vec(const std::vector<double>& v) {
  return {{static_cast<int>(v.size())}, v};
}

FlatArray flat_weights(const StaticFilter<double>& f) {
  return {{f.taps(), f.c_in, f.c_out}, f.weights};
}

Matrix<double> as_matrix_impl(const FlatArray& a, const char* what) {
  expect_rank(a, 2, what);
  return Matrix<double>(a.shape[0], a.shape[1], a.data);
}

KernelField<double> as_field(const FlatArray& a, const char* what) {
  expect_rank(a, 4, what);
  return KernelField<double>(a.shape[0], a.shape[1], isqrt_exact(a.shape[2]), a.shape[3],
                             a.data);
}

StaticFilter<double> as_filter(const FlatArray& w, const FlatArray* b) {
  expect_rank(w, 3, "weight");
  StaticFilter<double> f(isqrt_exact(w.shape[0]), w.shape[1], w.shape[2], b != nullptr);
  f.weights = w.data;
  if (b) {
    expect_rank(*b, 1, "bias");
    DGDF_CHECK_SHAPE(b->shape[0] == f.c_out, "bias length != c_out");
    f.bias = b->data;
  }
  return f;
}

GeneratorParams<double> as_generator(const OpInputs& in, Activation act) {
  GeneratorParams<double> g;
  g.activation = act;
  g.pointwise = as_filter(in.at("weight"), &in.at("bias"));
  DGDF_CHECK_SHAPE(g.pointwise.k == 1, "generator weight must be 1x1");
  return g;
}

CrossDepthGenerator<double> as_cross_gen(const OpInputs& in) {
  CrossDepthGenerator<double> cd;
  cd.squeeze = as_matrix_impl(in.at("squeeze"), "squeeze");
  cd.excite = as_matrix_impl(in.at("excite"), "excite");
  cd.c = cd.squeeze.rows();
  cd.squeeze_bias = in.at("squeeze_bias").data;
  cd.excite_bias = in.at("excite_bias").data;
  DGDF_CHECK_SHAPE(static_cast<int>(cd.squeeze_bias.size()) == cd.squeeze.cols() &&
                       static_cast<int>(cd.excite_bias.size()) == cd.excite.cols(),
                   "cross-depth generator bias lengths");
  return cd;
}

TensorD field_tensor(const KernelField<double>& f) {
  return TensorD(f.h(), f.w(), f.taps() * f.depth(),
                 std::vector<double>(f.values().begin(), f.values().end()));
}

GradBundle generator_bundle(const GeneratorGrads<double>& g) {
  return {{"g", flat(g.dg)},
          {"weight", flat_weights(g.dpointwise)},
          {"bias", flat_vec(g.dpointwise.bias)}};
}

}  // namespace

FlatArray FlatArray::zeros(std::vector<int> shape) {
  FlatArray a;
  a.data.assign(shape_size(shape), 0.0);
  a.shape = std::move(shape);
  return a;
}

const FlatArray& OpInputs::at(const std::string& role) const {
  auto it = arrays.find(role);
  DGDF_CHECK(it != arrays.end(), ErrorCode::kInvalidInput, "missing operand '" + role + "'");
  return it->second;
}

int OpInputs::attr(const std::string& key) const {
  auto it = attrs.find(key);
  DGDF_CHECK(it != attrs.end(), ErrorCode::kInvalidInput, "missing attribute '" + key + "'");
  return it->second;
}

const char* OpTagName(OpTag tag) {
  switch (tag) {
    case OpTag::kConv2d: return "conv2d";
    case OpTag::kPerPixelDepthwise: return "perpixel_depthwise";
    case OpTag::kCrossDepth: return "cross_depth";
    case OpTag::kSchemeAApply: return "scheme_a_apply";
    case OpTag::kSchemeBApply: return "scheme_b_apply";
    case OpTag::kGenSchemeA: return "gen_scheme_a";
    case OpTag::kGenSchemeB: return "gen_scheme_b";
    case OpTag::kGenDepthwise: return "gen_gdf_depthwise";
    case OpTag::kGenCrossDepth: return "gen_gdf_cross_depth";
    case OpTag::kGdfApply: return "gdf_apply";
    case OpTag::kSigmoid: return "sigmoid";
    case OpTag::kRelu: return "relu";
    case OpTag::kGlobalAvgPool: return "global_avgpool";
    case OpTag::kAvgPool2x2: return "avgpool2x2";
    case OpTag::kUpsample2x: return "upsample2x";
    case OpTag::kConcat: return "concat";
    case OpTag::kAdd: return "add";
    case OpTag::kMaskedL2: return "masked_l2";
  }
  return "unknown";
}

std::vector<OpTag> AllOpTags() {
  return {OpTag::kConv2d,       OpTag::kPerPixelDepthwise, OpTag::kCrossDepth,
          OpTag::kSchemeAApply, OpTag::kSchemeBApply,      OpTag::kGenSchemeA,
          OpTag::kGenSchemeB,   OpTag::kGenDepthwise,      OpTag::kGenCrossDepth,
          OpTag::kGdfApply,     OpTag::kSigmoid,           OpTag::kRelu,
          OpTag::kGlobalAvgPool, OpTag::kAvgPool2x2,       OpTag::kUpsample2x,
          OpTag::kConcat,       OpTag::kAdd,               OpTag::kMaskedL2};
}

OpTag ParseOpTag(const std::string& name) {
  for (OpTag t : AllOpTags())
    if (name == OpTagName(t)) return t;
  throw Error(ErrorCode::kUnknownOp, "unknown op '" + name + "'");
}

FlatArray forward_op(OpTag tag, const OpInputs& in) {
  switch (tag) {
    case OpTag::kConv2d:
      return flat(conv2d(as_tensor(in.at("x"), "x"), as_filter(in.at("weight"), &in.at("bias"))));
    case OpTag::kPerPixelDepthwise:
      return flat(perpixel_depthwise_ref(as_tensor(in.at("x"), "x"),
                                         as_field(in.at("filter"), "filter")));
    case OpTag::kCrossDepth:
      return flat(cross_depth_ref(as_tensor(in.at("x"), "x"),
                                  as_matrix_impl(in.at("filter"), "filter")));
    case OpTag::kSchemeAApply:
      return flat(scheme_a_apply(as_tensor(in.at("x"), "x"), as_field(in.at("adaptors"), "adaptors"),
                                 as_matrix_impl(in.at("component"), "component")));
    case OpTag::kSchemeBApply:
      return flat(scheme_b_apply(as_tensor(in.at("x"), "x"),
                                 as_field(in.at("attention"), "attention"),
                                 as_matrix_impl(in.at("component"), "component")));
    case OpTag::kGenSchemeA: {
      SchemeAState<double> s;
      s.k = in.attr("k");
      s.m = in.attr("m");
      s.adaptor_gen = as_generator(in, Activation::kNone);
      return flat(gen_scheme_a(as_tensor(in.at("g"), "g"), s));
    }
    case OpTag::kGenSchemeB: {
      SchemeBState<double> s;
      s.k = in.attr("k");
      s.attn_gen = as_generator(in, Activation::kSigmoid);
      return flat(gen_scheme_b(as_tensor(in.at("g"), "g"), s));
    }
    case OpTag::kGenDepthwise: {
      const TensorD g = as_tensor(in.at("g"), "g");
      const int k = in.attr("k");
      TensorD out = run_generator(g, as_generator(in, Activation::kNone));
      DGDF_CHECK_SHAPE(out.c() == k * k * g.c(), "depth-wise generator width != k^2 c");
      return flat(KernelField<double>(g.h(), g.w(), k, g.c(), std::move(out).release()));
    }
    case OpTag::kGenCrossDepth:
      return flat(gen_cross_depth(as_tensor(in.at("g"), "g"), as_cross_gen(in)));
    case OpTag::kGdfApply:
      return flat(gdf_apply(as_tensor(in.at("x"), "x"), as_field(in.at("depthwise"), "depthwise"),
                            as_matrix_impl(in.at("cross"), "cross")));
    case OpTag::kSigmoid:
      return flat(sigmoid(as_tensor(in.at("x"), "x")));
    case OpTag::kRelu:
      return flat(relu(as_tensor(in.at("x"), "x")));
    case OpTag::kGlobalAvgPool:
      return flat_vec(global_avgpool(as_tensor(in.at("x"), "x")));
    case OpTag::kAvgPool2x2:
      return flat(avgpool2x2(as_tensor(in.at("x"), "x")));
    case OpTag::kUpsample2x:
      return flat(upsample_nearest2x(as_tensor(in.at("x"), "x")));
    case OpTag::kConcat:
      return flat(concat_channels(as_tensor(in.at("a"), "a"), as_tensor(in.at("b"), "b")));
    case OpTag::kAdd:
      return flat(add_fuse(as_tensor(in.at("a"), "a"), as_tensor(in.at("b"), "b")));
    case OpTag::kMaskedL2:
      return flat_vec({masked_l2(as_tensor(in.at("pred"), "pred"), as_tensor(in.at("gt"), "gt")).loss});
  }
  throw Error(ErrorCode::kUnknownOp, "unknown op tag");
}

GradBundle backward(OpTag tag, const OpInputs& in, const FlatArray& dy_flat) {
  const FlatArray expected_out = forward_op(tag, in);
  DGDF_CHECK_SHAPE(dy_flat.shape == expected_out.shape && dy_flat.data.size() == expected_out.size(),
                   std::string("upstream gradient shape does not match ") + OpTagName(tag) +
                       " output");
  auto dy_tensor = [&]() {
    return TensorD(dy_flat.shape[0], dy_flat.shape[1], dy_flat.shape[2], dy_flat.data);
  };
  auto dy_field = [&]() { return as_field(dy_flat, "dy"); };
  switch (tag) {
    case OpTag::kConv2d: {
      auto g = conv2d_backward(as_tensor(in.at("x"), "x"), as_filter(in.at("weight"), &in.at("bias")),
                               dy_tensor());
      return {{"x", flat(g.dx)}, {"weight", flat_weights(g.dfilter)}, {"bias", flat_vec(g.dfilter.bias)}};
    }
    case OpTag::kPerPixelDepthwise: {
      auto g = perpixel_depthwise_backward(as_tensor(in.at("x"), "x"),
                                           as_field(in.at("filter"), "filter"), dy_tensor());
      return {{"x", flat(g.dx)}, {"filter", flat(g.dfilter)}};
    }
    case OpTag::kCrossDepth: {
      auto g = cross_depth_backward(as_tensor(in.at("x"), "x"),
                                    as_matrix_impl(in.at("filter"), "filter"), dy_tensor());
      return {{"x", flat(g.dx)}, {"filter", flat(g.dfilter)}};
    }
    case OpTag::kSchemeAApply: {
      auto g = scheme_a_apply_backward(as_tensor(in.at("x"), "x"),
                                       as_field(in.at("adaptors"), "adaptors"),
                                       as_matrix_impl(in.at("component"), "component"), dy_tensor());
      return {{"x", flat(g.dx)}, {"adaptors", flat(g.dadaptors)}, {"component", flat(g.dcomponent)}};
    }
    case OpTag::kSchemeBApply: {
      auto g = scheme_b_apply_backward(as_tensor(in.at("x"), "x"),
                                       as_field(in.at("attention"), "attention"),
                                       as_matrix_impl(in.at("component"), "component"), dy_tensor());
      return {{"x", flat(g.dx)}, {"attention", flat(g.dattention)}, {"component", flat(g.dcomponent)}};
    }
    case OpTag::kGenSchemeA:
      return generator_bundle(generator_backward(as_tensor(in.at("g"), "g"),
                                                 as_generator(in, Activation::kNone),
                                                 field_tensor(dy_field())));
    case OpTag::kGenSchemeB:
      return generator_bundle(generator_backward(as_tensor(in.at("g"), "g"),
                                                 as_generator(in, Activation::kSigmoid),
                                                 field_tensor(dy_field())));
    case OpTag::kGenDepthwise:
      return generator_bundle(generator_backward(as_tensor(in.at("g"), "g"),
                                                 as_generator(in, Activation::kNone),
                                                 field_tensor(dy_field())));
    case OpTag::kGenCrossDepth: {
      auto g = gen_cross_depth_backward(as_tensor(in.at("g"), "g"), as_cross_gen(in),
                                        as_matrix_impl(dy_flat, "dy"));
      return {{"g", flat(g.dg)},
              {"squeeze", flat(g.dsqueeze)},
              {"squeeze_bias", flat_vec(g.dsqueeze_bias)},
              {"excite", flat(g.dexcite)},
              {"excite_bias", flat_vec(g.dexcite_bias)}};
    }
    case OpTag::kGdfApply: {
      auto g = gdf_apply_backward(as_tensor(in.at("x"), "x"), as_field(in.at("depthwise"), "depthwise"),
                                  as_matrix_impl(in.at("cross"), "cross"), dy_tensor());
      return {{"x", flat(g.dx)}, {"depthwise", flat(g.ddepthwise)}, {"cross", flat(g.dcross)}};
    }
    case OpTag::kSigmoid:
      return {{"x", flat(sigmoid_backward(as_tensor(in.at("x"), "x"), dy_tensor()))}};
    case OpTag::kRelu:
      return {{"x", flat(relu_backward(as_tensor(in.at("x"), "x"), dy_tensor()))}};
    case OpTag::kGlobalAvgPool: {
      const FlatArray& x = in.at("x");
      return {{"x", flat(global_avgpool_backward<double>(x.shape[0], x.shape[1], dy_flat.data))}};
    }
    case OpTag::kAvgPool2x2:
      return {{"x", flat(avgpool2x2_backward(dy_tensor()))}};
    case OpTag::kUpsample2x:
      return {{"x", flat(upsample_nearest2x_backward(dy_tensor()))}};
    case OpTag::kConcat: {
      auto [da, db] = concat_backward(dy_tensor(), in.at("a").shape[2]);
      return {{"a", flat(da)}, {"b", flat(db)}};
    }
    case OpTag::kAdd:
      return {{"a", flat(dy_tensor())}, {"b", flat(dy_tensor())}};
    case OpTag::kMaskedL2: {
      MaskedL2 l = masked_l2(as_tensor(in.at("pred"), "pred"), as_tensor(in.at("gt"), "gt"));
      return {{"pred", flat(scale(l.dpred, dy_flat.data[0]))}};
    }
  }
  throw Error(ErrorCode::kUnknownOp, "unknown op tag");
}

// ---------------------------------------------------------------------------
// Random operands

namespace {

FlatArray random_array(std::vector<int> shape, Rng& rng, double lo, double hi) {
  FlatArray a = FlatArray::zeros(std::move(shape));
  for (double& v : a.data) v = rng.uniform(lo, hi);
  return a;
}

FlatArray fan_in_array(std::vector<int> shape, int fan_in, Rng& rng) {
  const double b = std::sqrt(1.0 / fan_in);
  return random_array(std::move(shape), rng, -b, b);
}

}  // namespace

OpInputs random_op_inputs(OpTag tag, std::uint64_t seed) {
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(tag) + 1000));
  const int k = 3;
  int h = rng.uniform_int(2, 6), w = rng.uniform_int(2, 6);
  const int c = rng.uniform_int(1, 8);
  const int m = rng.uniform_int(1, 4);
  const int c_out = rng.uniform_int(1, 8);
  OpInputs in;
  auto features = [&](const char* role, int ch) {
    in.arrays[role] = random_array({h, w, ch}, rng, -1.0, 1.0);
  };
  auto generator = [&](int n_out) {
    in.arrays["weight"] = fan_in_array({1, c, n_out}, c, rng);
    in.arrays["bias"] = random_array({n_out}, rng, -0.5, 0.5);
  };
  switch (tag) {
    case OpTag::kConv2d:
      features("x", c);
      in.arrays["weight"] = fan_in_array({k * k, c, c_out}, k * k * c, rng);
      in.arrays["bias"] = random_array({c_out}, rng, -0.5, 0.5);
      break;
    case OpTag::kPerPixelDepthwise:
      features("x", c);
      in.arrays["filter"] = random_array({h, w, k * k, c}, rng, -1.0, 1.0);
      break;
    case OpTag::kCrossDepth:
      features("x", c);
      in.arrays["filter"] = random_array({c, c_out}, rng, -1.0, 1.0);
      break;
    case OpTag::kSchemeAApply:
      features("x", c);
      in.arrays["adaptors"] = random_array({h, w, k * k, m}, rng, -1.0, 1.0);
      in.arrays["component"] = fan_in_array({m, c}, m, rng);
      break;
    case OpTag::kSchemeBApply:
      features("x", c);
      in.arrays["attention"] = random_array({h, w, k * k, 1}, rng, 0.0, 1.0);
      in.arrays["component"] = fan_in_array({k * k, c}, k * k, rng);
      break;
    case OpTag::kGenSchemeA:
      features("g", c);
      generator(k * k * m);
      in.attrs = {{"k", k}, {"m", m}};
      break;
    case OpTag::kGenSchemeB:
      // |pre-activation| <= c * (1/sqrt(c)) + 0.5 <= 3.33 for c <= 8.
      features("g", c);
      generator(k * k);
      in.attrs = {{"k", k}};
      break;
    case OpTag::kGenDepthwise:
      features("g", c);
      generator(k * k * c);
      in.attrs = {{"k", k}};
      break;
    case OpTag::kGenCrossDepth: {
      features("g", c);
      const int s = squeeze_width(c, 0.25);
      in.arrays["squeeze"] = fan_in_array({c, s}, c, rng);
      in.arrays["squeeze_bias"] = random_array({s}, rng, -0.5, 0.5);
      in.arrays["excite"] = fan_in_array({s, c * c}, s, rng);
      in.arrays["excite_bias"] = random_array({c * c}, rng, -0.5, 0.5);
      break;
    }
    case OpTag::kGdfApply:
      features("x", c);
      in.arrays["depthwise"] = random_array({h, w, k * k, c}, rng, -1.0, 1.0);
      in.arrays["cross"] = random_array({c, c_out}, rng, -1.0, 1.0);
      break;
    case OpTag::kSigmoid:
      in.arrays["x"] = random_array({h, w, c}, rng, -4.0, 4.0);
      break;
    case OpTag::kRelu: {
      FlatArray x = random_array({h, w, c}, rng, 0.05, 1.0);
      for (double& v : x.data)
        if (rng.uniform01() < 0.5) v = -v;
      in.arrays["x"] = std::move(x);
      break;
    }
    case OpTag::kGlobalAvgPool:
      features("x", c);
      break;
    case OpTag::kAvgPool2x2:
      h = 2 * ((h + 1) / 2);
      w = 2 * ((w + 1) / 2);
      features("x", c);
      break;
    case OpTag::kUpsample2x:
      features("x", c);
      break;
    case OpTag::kConcat:
      features("a", c);
      features("b", c_out);
      break;
    case OpTag::kAdd:
      features("a", c);
      features("b", c);
      break;
    case OpTag::kMaskedL2: {
      // Metre-scale values: FD round-off on a quadratic grows with the
      // value scale, the adjoint does not care about units.
      FlatArray gt = random_array({h, w, 1}, rng, 0.5, 5.0);
      for (std::size_t i = 1; i < gt.data.size(); ++i)
        if (rng.uniform01() < 0.3) gt.data[i] = 0.0;
      in.arrays["gt"] = std::move(gt);
      in.arrays["pred"] = random_array({h, w, 1}, rng, 0.5, 5.0);
      break;
    }
  }
  return in;
}

// ---------------------------------------------------------------------------
// Finite differences

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

std::vector<std::size_t> fd_coordinates(std::size_t n, std::uint64_t seed,
                                        std::size_t full_limit, std::size_t samples) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n <= full_limit) return idx;
  Rng rng(seed);
  rng.shuffle(idx);
  idx.resize(std::min(samples, n));
  std::sort(idx.begin(), idx.end());
  return idx;
}

FdGradient finite_diff(const ScalarFn& loss, std::span<const double> theta, double eps,
                       std::span<const std::size_t> coords) {
  DGDF_CHECK(eps > 0.0, ErrorCode::kInvalidInput, "finite_diff: eps must be > 0");
  std::vector<double> t(theta.begin(), theta.end());
  FdGradient out;
  out.coords.assign(coords.begin(), coords.end());
  out.values.reserve(coords.size());
  for (std::size_t i : coords) {
    DGDF_CHECK(i < t.size(), ErrorCode::kIndexOutOfRange, "finite_diff: coordinate out of range");
    const double orig = t[i];
    t[i] = orig + eps;
    const double up = loss(t);
    t[i] = orig - eps;
    const double down = loss(t);
    t[i] = orig;
    DGDF_CHECK(std::isfinite(up) && std::isfinite(down), ErrorCode::kNonFinite,
               "finite_diff: loss evaluation is not finite");
    out.values.push_back((up - down) / (2.0 * eps));
  }
  return out;
}

std::vector<double> finite_diff(const ScalarFn& loss, std::span<const double> theta, double eps) {
  std::vector<std::size_t> all(theta.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return finite_diff(loss, theta, eps, all).values;
}

void score_role(RoleCheck& rc, std::span<const double> analytic, std::span<const double> numeric) {
  DGDF_CHECK_SHAPE(analytic.size() == numeric.size(), "score_role: length mismatch");
  double diff = 0.0, na = 0.0, nn = 0.0;
  rc.max_rel_err = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    rc.max_rel_err = std::max(rc.max_rel_err, relative_error(analytic[i], numeric[i]));
    diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
    na += analytic[i] * analytic[i];
    nn += numeric[i] * numeric[i];
  }
  rc.norm_rel_err = std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nn), kRelErrFloor});
}

std::vector<RoleCheck> check_op_gradients(OpTag tag, const OpInputs& in, std::uint64_t seed,
                                          double eps) {
  FlatArray dy = forward_op(tag, in);
  Rng rng(derive_seed(seed, 77));
  for (double& v : dy.data) v = rng.uniform(-1.0, 1.0);
  const GradBundle grads = backward(tag, in, dy);

  std::vector<RoleCheck> out;
  std::uint64_t stream = 0;
  for (const auto& [role, g] : grads) {
    const FlatArray& operand = in.at(role);
    DGDF_CHECK_SHAPE(g.shape == operand.shape, "gradient for '" + role + "' has the wrong shape");
    OpInputs work = in;
    ScalarFn loss = [&](std::span<const double> theta) {
      work.arrays[role].data.assign(theta.begin(), theta.end());
      const FlatArray y = forward_op(tag, work);
      double acc = 0.0;
      for (std::size_t i = 0; i < y.data.size(); ++i) acc += dy.data[i] * y.data[i];
      return acc;
    };
    const auto coords = fd_coordinates(operand.size(), derive_seed(seed, ++stream));
    const FdGradient fd = finite_diff(loss, operand.data, eps, coords);
    std::vector<double> analytic;
    for (std::size_t i : coords) analytic.push_back(g.data[i]);
    RoleCheck rc{role, coords.size()};
    score_role(rc, analytic, fd.values);
    out.push_back(rc);
  }
  return out;
}

}  // namespace dgdf
