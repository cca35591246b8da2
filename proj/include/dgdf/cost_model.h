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

// Closed-form parameter / FLOP / memory costs of the four fusion blocks and
// an instrumented mode that measures the same quantities on a real forward
// pass. N is the pixel count, C the channel count, K the kernel size and M
// the number of scheme A bases.

#ifndef DGDF_COST_MODEL_H_
#define DGDF_COST_MODEL_H_

#include <cstdint>
#include <string>

#include "dgdf/fusion.h"

namespace dgdf {

struct CostPart {
  std::uint64_t params = 0;
  std::uint64_t flops = 0;
  std::uint64_t mem_elems = 0;

  CostPart operator+(const CostPart& o) const {
    return {params + o.params, flops + o.flops, mem_elems + o.mem_elems};
  }
  bool operator==(const CostPart&) const = default;
};

struct CostReport {
  FusionMethod method = FusionMethod::kSchemeB;
  std::uint64_t n = 0;
  int c = 0;
  int k = 0;
  int m = 0;
  double sigma = 0.25;
  CostPart gen;
  CostPart app;
  // Part of gen.mem_elems that scales with N: the per-pixel filter, adaptor or
  // attention buffer. For GDF this leaves out the SE vectors.
  std::uint64_t gen_spatial_mem = 0;

  CostPart total() const { return gen + app; }
};

// Throws InvalidInput for non-positive dims or sigma outside (0, 1].
CostReport cost_formula(FusionMethod method, std::uint64_t n, int c, int k, int m = 1,
                        double sigma = 0.25);

// Runs generation and application on seeded h x w x c inputs with counters
// attached. Params are the learnable weights of the block (biases excluded).
// Throws ResourceGuard when a naive run would exceed `naive_cap` elements.
CostReport instrument_forward(FusionMethod method, int h, int w, int c, int k, int m,
                              double sigma, std::uint64_t seed,
                              std::uint64_t naive_cap = kDefaultNaiveCap);

std::string cost_csv_header();
std::string cost_csv_row(const CostReport& r);

}  // namespace dgdf

#endif  // DGDF_COST_MODEL_H_
