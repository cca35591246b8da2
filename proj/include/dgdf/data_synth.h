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

// Synthetic guidance/depth scenes, exact-count sparsification and 16-bit PGM
// depth I/O.

#ifndef DGDF_DATA_SYNTH_H_
#define DGDF_DATA_SYNTH_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dgdf/metrics.h"
#include "dgdf/tensor.h"

namespace dgdf {

inline constexpr double kBackgroundFarMm = 40000.0;   // top row
inline constexpr double kBackgroundNearMm = 5000.0;   // bottom row
inline constexpr double kMinObjectDepthMm = 1000.0;
inline constexpr double kMinObjectGapMm = 1000.0;     // object to background

// Half-open pixel box [y0, y1) x [x0, x1) that never touches the border.
struct SceneRect {
  int y0 = 0, x0 = 0, y1 = 0, x1 = 0;
  double depth_mm = 0.0;
  std::array<double, 3> color{};
};

struct SceneSample {
  TensorD guidance;   // h x w x 3 in [0, 1]
  DepthMap dense_depth;
  std::uint64_t seed = 0;
  std::vector<SceneRect> rects;  // in paint order, far to near
};

// Background ramp from 40 m (top) to 5 m (bottom) plus n_rects fronto-parallel
// boxes at distinct depths. Guidance mixes box colour with a depth shading, so
// every depth edge is also a guidance edge.
SceneSample synth_scene(std::uint64_t seed, int h, int w, int n_rects);

// Keeps exactly round(r * V) of the V valid pixels, chosen uniformly without
// replacement. Halves round away from zero.
DepthMap sparsify(const DepthMap& depth, double ratio, std::uint64_t seed);

std::int64_t retained_count(std::int64_t valid, double ratio);

// Binary "P5" PGM with maxval 65535 and big-endian samples.
struct Pgm16 {
  int h = 0;
  int w = 0;
  std::vector<std::uint16_t> raw;
};

Pgm16 decode_pgm16(const std::string& bytes);
std::string encode_pgm16(const Pgm16& img);
Pgm16 read_pgm16_raw(const std::string& path);
void write_pgm16_raw(const std::string& path, const Pgm16& img);

// Raw samples are depth in metres times 256; raw 0 means no measurement.
inline constexpr double kMmPerRawUnit = 1000.0 / 256.0;

DepthMap pgm_to_depth(const Pgm16& img);
// Rounds to the nearest raw unit. Throws InvalidInput above 65535 raw.
Pgm16 depth_to_pgm(const DepthMap& d);

DepthMap read_pgm16(const std::string& path);
void write_pgm16(const std::string& path, const DepthMap& d);

}  // namespace dgdf

#endif  // DGDF_DATA_SYNTH_H_
