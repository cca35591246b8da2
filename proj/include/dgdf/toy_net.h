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

// Two-scale RGB/depth encoder-decoder with a swappable fusion block, and a
// full-batch SGD-with-momentum trainer.
//
//   g0 = relu(conv3(rgb))           x0 = relu(conv3(depth / 1e4))
//   g1 = relu(conv3(pool(g0)))      f0 = fuse0(x0, g0)
//                                   x1 = relu(conv3(pool(f0)))
//                                   f1 = fuse1(x1, g1)
//   d  = relu(conv3(upsample(f1)))
//   out = conv1(d + f0) * 1e4       (millimetres)

#ifndef DGDF_TOY_NET_H_
#define DGDF_TOY_NET_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dgdf/conv_oracle.h"
#include "dgdf/fusion.h"
#include "dgdf/grad.h"
#include "dgdf/metrics.h"
#include "dgdf/tensor_io.h"

namespace dgdf {

enum class ToyFusion { kAdd, kConcat, kGdf, kSchemeA, kSchemeB };

const char* ToyFusionName(ToyFusion f);
ToyFusion ParseToyFusion(const std::string& name);  // throws InvalidConfig
std::vector<ToyFusion> AllToyFusions();

inline constexpr double kDepthScaleMm = 1e4;

struct ToyNetConfig {
  ToyFusion fusion = ToyFusion::kSchemeB;
  std::vector<int> widths = {8, 16};  // one per scale, exactly two scales
  int k = 3;
  int m = 4;            // scheme A bases
  double sigma = 0.25;  // GDF squeeze ratio
  std::uint64_t seed = 1;
  double lr = 0.02;
  double momentum = 0.9;
  int iterations = 200;

  void validate() const;  // throws InvalidConfig
};

// One fusion block. Only the members of the selected kind are populated.
struct FusionBlock {
  ToyFusion kind = ToyFusion::kAdd;
  int c = 0;
  StaticFilter<double> proj;  // concat: 1x1, 2c -> c
  FactorizedGDFState<double> gdf;
  SchemeAState<double> scheme_a;
  SchemeBState<double> scheme_b;
};

struct ToyNet {
  ToyNetConfig config;
  StaticFilter<double> rgb0, rgb1, dep0, dep1, dec, out;
  FusionBlock fuse0, fuse1;
};

ToyNet build_toy_net(const ToyNetConfig& config);

// Named views over every learnable tensor, in a fixed order. Views of two
// nets built from the same config line up one to one.
struct ParamView {
  std::string name;
  std::span<double> data;
  bool bias = false;
};

std::vector<ParamView> param_views(ToyNet& net);

struct ParamCount {
  std::size_t weights = 0;
  std::size_t biases = 0;
  std::size_t total() const { return weights + biases; }
};

ParamCount param_count(const ToyNet& net);

// Copy of `net` with every parameter set to zero; used as a gradient buffer.
ToyNet zeros_like(const ToyNet& net);

struct ToySample {
  TensorD rgb;       // h x w x 3
  DepthMap sparse;   // network input, mm
  DepthMap gt;       // supervision, mm
};

// n scenes of h x w with 4 boxes each, input sparsified to `density`.
std::vector<ToySample> make_toy_dataset(std::uint64_t seed, int n, int h, int w,
                                        double density);

// Prediction in millimetres, h x w x 1. h and w must be even.
DepthMap toy_forward(const ToyNet& net, const TensorD& rgb, const DepthMap& sparse);

// Mean over samples of masked_l2 / (V * 1e8), i.e. the per-pixel mean squared
// error of depth in units of 10 m. Accumulates the gradient into *grads when
// non-null (grads must come from zeros_like). When relu_pattern is non-null
// the sign of every ReLU input (trunk and GDF squeeze) is appended to it.
double toy_loss(const ToyNet& net, const std::vector<ToySample>& batch, ToyNet* grads = nullptr,
                std::vector<std::uint8_t>* relu_pattern = nullptr);

struct TrainTrace {
  std::vector<double> losses;  // loss before each update, then the final loss
  MetricsReport held_out;
  Aggregation aggregation = Aggregation::kPixelUnion;
};

// Thrown when the loss stops being finite; carries the trace so far.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, TrainTrace trace)
      : Error(ErrorCode::kDivergenceGuard, what), trace_(std::move(trace)) {}
  const TrainTrace& trace() const { return trace_; }

 private:
  TrainTrace trace_;
};

TrainTrace train_toy(ToyNet& net, const std::vector<ToySample>& train_set,
                     const std::vector<ToySample>& held_out,
                     Aggregation aggregation = Aggregation::kPixelUnion);

// Central finite differences of toy_loss against its analytic gradient, on
// fd_coordinates of every parameter tensor. Coordinates whose +-eps stencil
// flips any ReLU are skipped and counted in kink_skipped.
struct ToyGradCheck {
  std::vector<RoleCheck> roles;
  // Norm relative error of the whole checked gradient vector. Some tensors
  // carry gradients near 1e-7 of an O(1) loss, where per-tensor central
  // differences sit at the round-off floor; the global figure does not.
  double global_rel_err = 0.0;
  double worst_role_rel_err = 0.0;  // max over roles of norm_rel_err
  std::size_t checked = 0;
  std::size_t kink_skipped = 0;
};

ToyGradCheck check_toy_gradients(const ToyNet& net, const std::vector<ToySample>& batch,
                                 std::uint64_t seed, double eps = kFdEpsilon);

// Checkpoints are DGDF1 bundles: one (1, 1, n) tensor per parameter view plus
// the config as attributes.
TensorBundle toy_to_bundle(const ToyNet& net);
ToyNet toy_from_bundle(const TensorBundle& bundle);

}  // namespace dgdf

#endif  // DGDF_TOY_NET_H_
