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

#include "dgdf/data_synth.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "dgdf/rng.h"
#include "dgdf/tensor_io.h"

namespace dgdf {
namespace {

double background_mm(int y, int h) {
  const double t = static_cast<double>(y) / (h - 1);
  return kBackgroundFarMm + (kBackgroundNearMm - kBackgroundFarMm) * t;
}

constexpr std::array<double, 3> kBackgroundColor = {0.45, 0.55, 0.35};

// Guidance value: box colour plus a shading that falls with depth.
double shade(double color, double depth_mm) {
  return 0.6 * color + 0.4 * (1.0 - depth_mm / kBackgroundFarMm);
}

}  // namespace

SceneSample synth_scene(std::uint64_t seed, int h, int w, int n_rects) {
  DGDF_CHECK(h >= 8 && w >= 8, ErrorCode::kInvalidShape, "synth_scene: h and w must be >= 8");
  DGDF_CHECK(n_rects >= 1 && n_rects <= 16, ErrorCode::kInvalidShape,
             "synth_scene: n_rects must be in [1, 16]");
  Rng rng(derive_seed(seed, 11));
  SceneSample s;
  s.seed = seed;
  s.dense_depth = DepthMap(h, w, 1);
  s.guidance = TensorD(h, w, 3);

  for (int i = 0; i < n_rects; ++i) {
    SceneRect r;
    // Sizes between an eighth and a half of each side; one pixel of margin.
    const int rh = rng.uniform_int(std::max(2, h / 8), std::max(2, h / 2));
    const int rw = rng.uniform_int(std::max(2, w / 8), std::max(2, w / 2));
    r.y0 = rng.uniform_int(1, h - 1 - rh);
    r.x0 = rng.uniform_int(1, w - 1 - rw);
    r.y1 = r.y0 + rh;
    r.x1 = r.x0 + rw;
    // Nearest background under the box is its bottom row.
    const double far_limit = background_mm(r.y1 - 1, h) - kMinObjectGapMm;
    bool distinct = false;
    while (!distinct) {
      r.depth_mm = std::round(rng.uniform(kMinObjectDepthMm, far_limit));
      distinct = std::none_of(s.rects.begin(), s.rects.end(),
                              [&](const SceneRect& o) { return o.depth_mm == r.depth_mm; });
    }
    for (double& c : r.color) c = rng.uniform01();
    s.rects.push_back(r);
  }
  std::stable_sort(s.rects.begin(), s.rects.end(),
                   [](const SceneRect& a, const SceneRect& b) { return a.depth_mm > b.depth_mm; });

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double d = background_mm(y, h);
      std::array<double, 3> col = kBackgroundColor;
      for (const SceneRect& r : s.rects) {
        if (y >= r.y0 && y < r.y1 && x >= r.x0 && x < r.x1) {
          d = r.depth_mm;
          col = r.color;
        }
      }
      s.dense_depth(y, x, 0) = d;
      for (int ch = 0; ch < 3; ++ch) s.guidance(y, x, ch) = shade(col[ch], d);
    }
  }
  return s;
}

std::int64_t retained_count(std::int64_t valid, double ratio) {
  return static_cast<std::int64_t>(std::llround(ratio * static_cast<double>(valid)));
}

DepthMap sparsify(const DepthMap& depth, double ratio, std::uint64_t seed) {
  DGDF_CHECK_SHAPE(depth.c() == 1, "sparsify: depth map must have one channel");
  DGDF_CHECK(ratio > 0.0 && ratio <= 1.0, ErrorCode::kInvalidRatio,
             "sparsify: ratio must lie in (0, 1]");
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < depth.size(); ++i)
    if (depth.values()[i] > 0.0) valid.push_back(i);
  DGDF_CHECK(!valid.empty(), ErrorCode::kEmptyMask, "sparsify: no valid pixel");
  const std::int64_t keep = retained_count(static_cast<std::int64_t>(valid.size()), ratio);
  DGDF_CHECK(keep > 0, ErrorCode::kDegenerateResult, "sparsify: round(r * V) is 0");
  Rng rng(seed);
  rng.shuffle(valid);
  DepthMap out(depth.h(), depth.w(), 1);
  for (std::int64_t i = 0; i < keep; ++i) out.values()[valid[i]] = depth.values()[valid[i]];
  return out;
}

// ---------------------------------------------------------------------------
// PGM

namespace {

// Reads one header token, skipping whitespace and '#' comments.
std::string next_token(const std::string& b, std::size_t& pos) {
  for (;;) {
    while (pos < b.size() && std::isspace(static_cast<unsigned char>(b[pos]))) ++pos;
    if (pos < b.size() && b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < b.size() && !std::isspace(static_cast<unsigned char>(b[pos]))) ++pos;
  DGDF_CHECK(pos > start, ErrorCode::kMalformedHeader, "PGM header ends early");
  return b.substr(start, pos - start);
}

int header_int(const std::string& b, std::size_t& pos, const char* what) {
  const std::string tok = next_token(b, pos);
  DGDF_CHECK(tok.size() <= 9 && std::all_of(tok.begin(), tok.end(),
                                            [](unsigned char ch) { return std::isdigit(ch); }),
             ErrorCode::kMalformedHeader, std::string("PGM ") + what + " is not a number");
  return std::stoi(tok);
}

}  // namespace

Pgm16 decode_pgm16(const std::string& bytes) {
  std::size_t pos = 0;
  DGDF_CHECK(next_token(bytes, pos) == "P5", ErrorCode::kMalformedHeader,
             "PGM magic is not P5");
  Pgm16 img;
  img.w = header_int(bytes, pos, "width");
  img.h = header_int(bytes, pos, "height");
  const int maxval = header_int(bytes, pos, "maxval");
  DGDF_CHECK(img.w >= 1 && img.h >= 1, ErrorCode::kMalformedHeader, "PGM dims must be >= 1");
  DGDF_CHECK(maxval == 65535, ErrorCode::kMalformedHeader, "PGM maxval must be 65535");
  DGDF_CHECK(pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos])),
             ErrorCode::kMalformedHeader, "PGM header lacks its terminating whitespace");
  ++pos;
  const std::size_t n = static_cast<std::size_t>(img.h) * img.w;
  DGDF_CHECK(bytes.size() - pos >= 2 * n, ErrorCode::kTruncatedData, "PGM raster truncated");
  img.raw.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto hi = static_cast<unsigned char>(bytes[pos + 2 * i]);
    const auto lo = static_cast<unsigned char>(bytes[pos + 2 * i + 1]);
    img.raw[i] = static_cast<std::uint16_t>((hi << 8) | lo);
  }
  return img;
}

std::string encode_pgm16(const Pgm16& img) {
  DGDF_CHECK_SHAPE(img.raw.size() == static_cast<std::size_t>(img.h) * img.w,
                   "PGM raster length does not match h*w");
  std::string out = "P5\n" + std::to_string(img.w) + " " + std::to_string(img.h) + "\n65535\n";
  out.reserve(out.size() + 2 * img.raw.size());
  for (std::uint16_t v : img.raw) {
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xFF));
  }
  return out;
}

Pgm16 read_pgm16_raw(const std::string& path) { return decode_pgm16(read_file(path)); }

void write_pgm16_raw(const std::string& path, const Pgm16& img) {
  write_file(path, encode_pgm16(img));
}

DepthMap pgm_to_depth(const Pgm16& img) {
  DepthMap d(img.h, img.w, 1);
  for (std::size_t i = 0; i < img.raw.size(); ++i) d.values()[i] = img.raw[i] * kMmPerRawUnit;
  return d;
}

Pgm16 depth_to_pgm(const DepthMap& d) {
  check_depth_map(d);
  Pgm16 img;
  img.h = d.h();
  img.w = d.w();
  img.raw.reserve(d.size());
  for (double v : d.values()) {
    const double raw = std::round(v / kMmPerRawUnit);
    DGDF_CHECK(raw <= 65535.0, ErrorCode::kInvalidInput, "depth exceeds the 16-bit PGM range");
    img.raw.push_back(static_cast<std::uint16_t>(raw));
  }
  return img;
}

DepthMap read_pgm16(const std::string& path) { return pgm_to_depth(read_pgm16_raw(path)); }

void write_pgm16(const std::string& path, const DepthMap& d) {
  write_pgm16_raw(path, depth_to_pgm(d));
}

}  // namespace dgdf
