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

// Hand-written adjoints of every differentiable forward op, plus a central
// finite-difference verifier. There is no tape: composites (the toy network)
// chain these explicitly.

#ifndef DGDF_GRAD_H_
#define DGDF_GRAD_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dgdf/conv_oracle.h"
#include "dgdf/fusion.h"
#include "dgdf/tensor.h"

namespace dgdf {

// ---------------------------------------------------------------------------
// Typed adjoints. Each returns gradients shaped exactly like the forward
// operands they differentiate.

template <typename T>
struct ConvGrads {
  Tensor<T> dx;
  StaticFilter<T> dfilter;  // weights and, if present, bias
};

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& x, const StaticFilter<T>& f,
                             const Tensor<T>& dy);

template <typename T>
struct DepthwiseGrads {
  Tensor<T> dx;
  PerPixelDepthwiseFilter<T> dfilter;
};

template <typename T>
DepthwiseGrads<T> perpixel_depthwise_backward(const Tensor<T>& x,
                                              const PerPixelDepthwiseFilter<T>& f,
                                              const Tensor<T>& dy);

template <typename T>
struct CrossDepthGrads {
  Tensor<T> dx;
  CrossDepthFilter<T> dfilter;
};

template <typename T>
CrossDepthGrads<T> cross_depth_backward(const Tensor<T>& x, const CrossDepthFilter<T>& f,
                                        const Tensor<T>& dy);

template <typename T>
struct SchemeAApplyGrads {
  Tensor<T> dx;
  Adaptors<T> dadaptors;
  Matrix<T> dcomponent;
};

template <typename T>
SchemeAApplyGrads<T> scheme_a_apply_backward(const Tensor<T>& x, const Adaptors<T>& adaptors,
                                             const Matrix<T>& component, const Tensor<T>& dy);

template <typename T>
struct SchemeBApplyGrads {
  Tensor<T> dx;
  AttentionMap<T> dattention;
  Matrix<T> dcomponent;
};

template <typename T>
SchemeBApplyGrads<T> scheme_b_apply_backward(const Tensor<T>& x,
                                             const AttentionMap<T>& attention,
                                             const Matrix<T>& component, const Tensor<T>& dy);

template <typename T>
struct GdfApplyGrads {
  Tensor<T> dx;
  PerPixelDepthwiseFilter<T> ddepthwise;
  CrossDepthFilter<T> dcross;
};

template <typename T>
GdfApplyGrads<T> gdf_apply_backward(const Tensor<T>& x, const PerPixelDepthwiseFilter<T>& dw,
                                    const CrossDepthFilter<T>& cross, const Tensor<T>& dy);

template <typename T>
struct GeneratorGrads {
  Tensor<T> dg;
  StaticFilter<T> dpointwise;
  StaticFilter<T> dhidden;  // only meaningful for two-layer generators
};

// dout is shaped like the generator output (h, w, n_out), post-activation.
template <typename T>
GeneratorGrads<T> generator_backward(const Tensor<T>& g, const GeneratorParams<T>& gen,
                                     const Tensor<T>& dout);

// Adaptor/attention gradients share the generator output layout.
template <typename T>
GeneratorGrads<T> gen_scheme_a_backward(const Tensor<T>& g, const SchemeAState<T>& s,
                                        const Adaptors<T>& dadaptors);

template <typename T>
GeneratorGrads<T> gen_scheme_b_backward(const Tensor<T>& g, const SchemeBState<T>& s,
                                        const AttentionMap<T>& dattention);

template <typename T>
struct CrossDepthGenGrads {
  Tensor<T> dg;
  Matrix<T> dsqueeze;
  std::vector<T> dsqueeze_bias;
  Matrix<T> dexcite;
  std::vector<T> dexcite_bias;
};

template <typename T>
CrossDepthGenGrads<T> gen_cross_depth_backward(const Tensor<T>& g,
                                               const CrossDepthGenerator<T>& cd,
                                               const CrossDepthFilter<T>& dcross);

template <typename T>
struct GdfGenGrads {
  Tensor<T> dg;
  GeneratorGrads<T> dw_gen;
  CrossDepthGenGrads<T> cd_gen;
};

template <typename T>
GdfGenGrads<T> gen_gdf_backward(const Tensor<T>& g, const FactorizedGDFState<T>& s,
                                const PerPixelDepthwiseFilter<T>& ddepthwise,
                                const CrossDepthFilter<T>& dcross);

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& x, const Tensor<T>& dy);

// Takes the forward input, not the output.
template <typename T>
Tensor<T> sigmoid_backward(const Tensor<T>& x, const Tensor<T>& dy);

template <typename T>
Tensor<T> global_avgpool_backward(int h, int w, std::span<const T> dpooled);

template <typename T>
Tensor<T> avgpool2x2_backward(const Tensor<T>& dy);

template <typename T>
Tensor<T> upsample_nearest2x_backward(const Tensor<T>& dy);

template <typename T>
std::pair<Tensor<T>, Tensor<T>> concat_backward(const Tensor<T>& dy, int c_first);

// ---------------------------------------------------------------------------
// Role-keyed interface. Operands, outputs and gradients travel as flat
// double arrays with explicit shapes; a gradient is keyed by the role of the
// operand it differentiates and has that operand's shape.

struct FlatArray {
  std::vector<int> shape;
  std::vector<double> data;

  std::size_t size() const { return data.size(); }
  static FlatArray zeros(std::vector<int> shape);
};

using GradBundle = std::map<std::string, FlatArray>;

enum class OpTag {
  kConv2d,             // x, weight(k^2,ci,co), bias(co)
  kPerPixelDepthwise,  // x, filter(h,w,k^2,c)
  kCrossDepth,         // x, filter(ci,co)
  kSchemeAApply,       // x, adaptors(h,w,k^2,m), component(m,c)
  kSchemeBApply,       // x, attention(h,w,k^2,1), component(k^2,c)
  kGenSchemeA,         // g, weight(1,c,k^2 m), bias(k^2 m); attrs k, m
  kGenSchemeB,         // g, weight(1,c,k^2), bias(k^2); attr k
  kGenDepthwise,       // g, weight(1,c,k^2 c), bias(k^2 c); attr k
  kGenCrossDepth,      // g, squeeze(c,s), squeeze_bias(s), excite(s,c^2), excite_bias(c^2)
  kGdfApply,           // x, depthwise(h,w,k^2,c), cross(c,co)
  kSigmoid,            // x
  kRelu,               // x
  kGlobalAvgPool,      // x
  kAvgPool2x2,         // x
  kUpsample2x,         // x
  kConcat,             // a, b
  kAdd,                // a, b
  kMaskedL2,           // pred(h,w,1), gt(h,w,1); gradient for pred only
};

const char* OpTagName(OpTag tag);
OpTag ParseOpTag(const std::string& name);
std::vector<OpTag> AllOpTags();

struct OpInputs {
  std::map<std::string, FlatArray> arrays;
  std::map<std::string, int> attrs;

  const FlatArray& at(const std::string& role) const;
  int attr(const std::string& key) const;
};

FlatArray forward_op(OpTag tag, const OpInputs& in);
GradBundle backward(OpTag tag, const OpInputs& in, const FlatArray& dy);

// Seeded random operands for an op, sized within h, w <= 6, c <= 8, k = 3,
// m <= 4. Sigmoid pre-activations stay inside [-4, 4] and ReLU inputs stay
// away from the kink.
OpInputs random_op_inputs(OpTag tag, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Finite differences

inline constexpr double kFdEpsilon = 1e-5;
inline constexpr double kRelErrFloor = 1e-8;

// |a - b| / max(|a|, |b|, floor).
double relative_error(double analytic, double numeric, double floor = kRelErrFloor);

// All coordinates when n <= full_limit, otherwise `samples` distinct seeded
// coordinates.
std::vector<std::size_t> fd_coordinates(std::size_t n, std::uint64_t seed,
                                        std::size_t full_limit = 64,
                                        std::size_t samples = 10);

using ScalarFn = std::function<double(std::span<const double>)>;

struct FdGradient {
  std::vector<std::size_t> coords;
  std::vector<double> values;
};

// Central differences (L(t + eps e) - L(t - eps e)) / 2 eps at the given
// coordinates. Throws NonFinite if any evaluation is NaN or Inf.
FdGradient finite_diff(const ScalarFn& loss, std::span<const double> theta, double eps,
                       std::span<const std::size_t> coords);

// Every coordinate.
std::vector<double> finite_diff(const ScalarFn& loss, std::span<const double> theta,
                                double eps);

struct RoleCheck {
  std::string role;
  std::size_t checked = 0;
  // Worst per-coordinate relative_error.
  double max_rel_err = 0.0;
  // ||a - n|| / max(||a||, ||n||, floor) over the checked coordinates.
  double norm_rel_err = 0.0;
  // Coordinates dropped because the stencil crossed a ReLU kink.
  std::size_t kink_skipped = 0;
};

// Fills max_rel_err and norm_rel_err from paired analytic/numeric values.
void score_role(RoleCheck& rc, std::span<const double> analytic, std::span<const double> numeric);

// Checks backward(tag) against finite differences of <dY, forward(tag)> for
// every role in the gradient bundle, with a seeded random dY.
std::vector<RoleCheck> check_op_gradients(OpTag tag, const OpInputs& in,
                                          std::uint64_t seed, double eps = kFdEpsilon);

}  // namespace dgdf

#endif  // DGDF_GRAD_H_
