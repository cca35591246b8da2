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

// RGB-guided fusion blocks. Every method splits into a generation step that
// reads the guidance features G and an application step that filters the
// target features X:
//
//   naive GDF   : full per-pixel filter (k^2 c^2 per pixel) from a 1x1 conv.
//   GDF         : per-pixel depth-wise filter + SE-generated cross-depth mix.
//   scheme A    : adaptors (hw, k^2, m) x learned component (m, c), applied as
//                 a two-layer convolution with a c*m channel intermediate.
//   scheme B    : sigmoid attention (hw, k^2) x learned static depth-wise
//                 kernel (k^2, c), applied in one fused pass.
//
// The fast paths accept an optional OpCounter used by the cost model to check
// the closed-form cost table against executed work.

#ifndef DGDF_FUSION_H_
#define DGDF_FUSION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dgdf/conv_oracle.h"
#include "dgdf/counter.h"
#include "dgdf/parallel.h"
#include "dgdf/tensor.h"

namespace dgdf {

enum class FusionMethod { kNaive, kGdf, kSchemeA, kSchemeB };

const char* FusionMethodName(FusionMethod m);
FusionMethod ParseFusionMethod(const std::string& name);

enum class Activation { kNone, kSigmoid };

// kTwoLayer prepends a 3x3 conv + ReLU (c -> c) to the 1x1 layer. It is not
// part of the closed-form cost accounting.
enum class GeneratorKind { kPointwise, kTwoLayer };

// Number of squeeze units, ceil(sigma * c). The small slack keeps products
// like 0.1 * 30 from rounding up an extra unit.
int squeeze_width(int c, double sigma);

template <typename T>
struct GeneratorParams {
  GeneratorKind kind = GeneratorKind::kPointwise;
  StaticFilter<T> hidden;     // 3x3, c_in -> c_in, only for kTwoLayer
  StaticFilter<T> pointwise;  // 1x1, c_in -> n_out, with bias
  Activation activation = Activation::kNone;

  int c_in() const { return pointwise.c_in; }
  int n_out() const { return pointwise.c_out; }
  // Learnable weights, biases excluded.
  std::size_t weight_count() const;

  static GeneratorParams Make(int c_in, int n_out, Activation act,
                              std::uint64_t seed,
                              GeneratorKind kind = GeneratorKind::kPointwise);
};

// SE-style generator of the c x c cross-depth matrix: global average pool,
// squeeze (c -> s) + ReLU, excite (s -> c^2), reshape.
template <typename T>
struct CrossDepthGenerator {
  int c = 1;
  double sigma = 0.25;
  Matrix<T> squeeze;  // (c, s)
  std::vector<T> squeeze_bias;
  Matrix<T> excite;   // (s, c^2)
  std::vector<T> excite_bias;

  int width() const { return squeeze.cols(); }
  std::size_t weight_count() const { return squeeze.size() + excite.size(); }

  static CrossDepthGenerator Make(int c, double sigma, std::uint64_t seed);
};

template <typename T>
struct SchemeAState {
  int k = 3;
  int m = 1;
  GeneratorParams<T> adaptor_gen;  // c -> k^2 m, linear
  Matrix<T> component;             // (m, c)

  static SchemeAState Make(int c, int k, int m, std::uint64_t seed,
                           GeneratorKind kind = GeneratorKind::kPointwise);
};

template <typename T>
struct SchemeBState {
  int k = 3;
  GeneratorParams<T> attn_gen;  // c -> k^2, sigmoid
  Matrix<T> component;          // (k^2, c)

  static SchemeBState Make(int c, int k, std::uint64_t seed,
                           GeneratorKind kind = GeneratorKind::kPointwise);
};

template <typename T>
struct FactorizedGDFState {
  int k = 3;
  GeneratorParams<T> dw_gen;  // c -> k^2 c, linear
  CrossDepthGenerator<T> cd_gen;

  static FactorizedGDFState Make(int c, int k, double sigma, std::uint64_t seed,
                                 GeneratorKind kind = GeneratorKind::kPointwise);
};

template <typename T>
struct NaiveGDFState {
  int k = 3;
  GeneratorParams<T> gen;  // c -> k^2 c^2, linear

  static NaiveGDFState Make(int c, int k, std::uint64_t seed);
};

template <typename T>
struct GdfFilters {
  PerPixelDepthwiseFilter<T> depthwise;  // W'
  CrossDepthFilter<T> cross;             // W''
};

inline constexpr std::uint64_t kDefaultNaiveCap = std::uint64_t{1} << 26;

// Runs the generator network and its activation. Output is (h, w, n_out).
template <typename T>
Tensor<T> run_generator(const Tensor<T>& g, const GeneratorParams<T>& gen,
                        OpCounter* counter = nullptr, const ExecOptions& exec = {});

// ---- scheme A ----

// adaptors[p, d, j] = generator channel d * m + j at p.
template <typename T>
Adaptors<T> gen_scheme_a(const Tensor<T>& g, const SchemeAState<T>& s,
                         OpCounter* counter = nullptr, const ExecOptions& exec = {});

// First layer: I[p, l * m + j] = sum_d adaptors[p, d, j] * X[p + d, l].
template <typename T>
Tensor<T> scheme_a_layer1(const Tensor<T>& x, const Adaptors<T>& adaptors,
                          OpCounter* counter = nullptr, const ExecOptions& exec = {});

// Second layer: Y[p, l] = sum_j D[j, l] * I[p, l * m + j].
template <typename T>
Tensor<T> scheme_a_layer2(const Tensor<T>& inter, const Matrix<T>& component,
                          OpCounter* counter = nullptr, const ExecOptions& exec = {});

// Two-layer fast path. The intermediate (h*w*c*m elements) is counted as
// application memory.
template <typename T>
Tensor<T> scheme_a_apply(const Tensor<T>& x, const Adaptors<T>& adaptors,
                         const Matrix<T>& component, OpCounter* counter = nullptr,
                         const ExecOptions& exec = {});

// W'[p, d, l] = sum_j adaptors[p, d, j] * D[j, l].
template <typename T>
PerPixelDepthwiseFilter<T> reconstruct_scheme_a(const Adaptors<T>& adaptors,
                                                const Matrix<T>& component);

// ---- scheme B ----

template <typename T>
AttentionMap<T> gen_scheme_b(const Tensor<T>& g, const SchemeBState<T>& s,
                             OpCounter* counter = nullptr, const ExecOptions& exec = {});

// Y[p, l] = sum_d A[p, d] * D[d, l] * X[p + d, l], one pass, no intermediate.
template <typename T>
Tensor<T> scheme_b_apply(const Tensor<T>& x, const AttentionMap<T>& attention,
                         const Matrix<T>& component, OpCounter* counter = nullptr,
                         const ExecOptions& exec = {});

// W'[p, d, l] = A[p, d] * D[d, l].
template <typename T>
PerPixelDepthwiseFilter<T> reconstruct_scheme_b(const AttentionMap<T>& attention,
                                                const Matrix<T>& component);

// ---- factorized guided dynamic filters ----

// SE branch only. Counts the squeeze and excite outputs as generated memory.
template <typename T>
CrossDepthFilter<T> gen_cross_depth(const Tensor<T>& g, const CrossDepthGenerator<T>& cd,
                                    OpCounter* counter = nullptr);

template <typename T>
GdfFilters<T> gen_gdf(const Tensor<T>& g, const FactorizedGDFState<T>& s,
                      OpCounter* counter = nullptr, const ExecOptions& exec = {});

// Depth-wise then cross-depth, fused per pixel: only a c-element scratch row
// lives between the two stages.
template <typename T>
Tensor<T> gdf_apply(const Tensor<T>& x, const PerPixelDepthwiseFilter<T>& dw,
                    const CrossDepthFilter<T>& cross, OpCounter* counter = nullptr,
                    const ExecOptions& exec = {});

// ---- naive guided dynamic filters ----

template <typename T>
PerPixelFullFilter<T> naive_generate(const Tensor<T>& g, const NaiveGDFState<T>& s,
                                     OpCounter* counter = nullptr,
                                     std::uint64_t cap = kDefaultNaiveCap,
                                     const ExecOptions& exec = {});

template <typename T>
Tensor<T> naive_apply(const Tensor<T>& x, const PerPixelFullFilter<T>& f,
                      OpCounter* counter = nullptr, const ExecOptions& exec = {});

template <typename T>
Tensor<T> naive_gdf(const Tensor<T>& g, const Tensor<T>& x, const NaiveGDFState<T>& s,
                    OpCounter* gen_counter = nullptr, OpCounter* app_counter = nullptr,
                    std::uint64_t cap = kDefaultNaiveCap);

// ---- baselines ----

template <typename T>
Tensor<T> add_fuse(const Tensor<T>& x, const Tensor<T>& g);

template <typename T>
Tensor<T> concat_fuse(const Tensor<T>& x, const Tensor<T>& g);

}  // namespace dgdf

#endif  // DGDF_FUSION_H_
