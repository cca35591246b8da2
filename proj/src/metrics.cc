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

#include "dgdf/metrics.h"

#include <cmath>
#include <cstdio>

namespace dgdf {
namespace {

constexpr double kInversePerKm = 1e6;  // 1/mm -> 1/km

// Running sums over a set of valid pixels.
struct Accum {
  double sq = 0, abs = 0, isq = 0, iabs = 0, rel = 0;
  long d1 = 0, d2 = 0, d3 = 0;
  long n = 0;
  bool inverse_ok = true;

  void add(double pred, double gt) {
    const double e = gt - pred;
    sq += e * e;
    abs += std::abs(e);
    rel += std::abs(e / gt);
    if (pred > 0.0) {
      const double ie = kInversePerKm / gt - kInversePerKm / pred;
      isq += ie * ie;
      iabs += std::abs(ie);
      const double ratio = std::max(gt / pred, pred / gt);
      if (ratio < 1.25) ++d1;
      if (ratio < 1.25 * 1.25) ++d2;
      if (ratio < 1.25 * 1.25 * 1.25) ++d3;
    } else {
      inverse_ok = false;
    }
    ++n;
  }

  MetricsReport report() const {
    MetricsReport r;
    const double nn = static_cast<double>(n);
    r.valid = static_cast<int>(n);
    r.rmse_mm = std::sqrt(sq / nn);
    r.mae_mm = abs / nn;
    if (inverse_ok) {
      r.irmse_per_km = std::sqrt(isq / nn);
      r.imae_per_km = iabs / nn;
    }
    r.rel = rel / nn;
    r.delta1 = 100.0 * static_cast<double>(d1) / nn;
    r.delta2 = 100.0 * static_cast<double>(d2) / nn;
    r.delta3 = 100.0 * static_cast<double>(d3) / nn;
    return r;
  }
};

void check_pair(const DepthMap& pred, const DepthMap& gt) {
  DGDF_CHECK_SHAPE(pred.c() == 1 && gt.c() == 1, "depth maps must have one channel");
  DGDF_CHECK_SHAPE(pred.same_shape(gt), "prediction and ground truth shapes differ");
}

Accum accumulate(const DepthMap& pred, const DepthMap& gt) {
  check_pair(pred, gt);
  Accum a;
  for (std::size_t i = 0; i < gt.size(); ++i)
    if (gt.values()[i] > 0.0) a.add(pred.values()[i], gt.values()[i]);
  DGDF_CHECK(a.n > 0, ErrorCode::kEmptyMask, "ground truth has no valid pixel");
  return a;
}

}  // namespace

void check_depth_map(const DepthMap& d) {
  DGDF_CHECK_SHAPE(d.c() == 1, "depth map must have one channel");
  for (double v : d.values())
    DGDF_CHECK(std::isfinite(v) && v >= 0.0, ErrorCode::kInvalidInput,
               "depth values must be finite and >= 0");
}

MaskedL2 masked_l2(const DepthMap& pred, const DepthMap& gt) {
  check_pair(pred, gt);
  MaskedL2 out;
  out.dpred = DepthMap(pred.h(), pred.w(), 1);
  auto p = pred.values();
  auto g = gt.values();
  auto dp = out.dpred.values();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] > 0.0) {
      const double e = p[i] - g[i];
      out.loss += e * e;
      dp[i] = 2.0 * e;
      ++out.valid;
    }
  }
  DGDF_CHECK(out.valid > 0, ErrorCode::kEmptyMask, "ground truth has no valid pixel");
  return out;
}

MetricsReport metrics(const DepthMap& pred, const DepthMap& gt) {
  return accumulate(pred, gt).report();
}

const char* AggregationName(Aggregation a) {
  return a == Aggregation::kPixelUnion ? "pixel_union" : "per_image_mean";
}

MetricsReport aggregate_metrics(const std::vector<std::pair<DepthMap, DepthMap>>& pairs,
                                Aggregation mode) {
  DGDF_CHECK(!pairs.empty(), ErrorCode::kEmptyMask, "no images to aggregate");
  if (mode == Aggregation::kPixelUnion) {
    Accum total;
    for (const auto& [pred, gt] : pairs) {
      check_pair(pred, gt);
      for (std::size_t i = 0; i < gt.size(); ++i)
        if (gt.values()[i] > 0.0) total.add(pred.values()[i], gt.values()[i]);
    }
    DGDF_CHECK(total.n > 0, ErrorCode::kEmptyMask, "no valid pixel in any image");
    return total.report();
  }
  MetricsReport mean;
  double irmse = 0, imae = 0;
  bool inverse_ok = true;
  for (const auto& [pred, gt] : pairs) {
    const MetricsReport r = metrics(pred, gt);
    mean.rmse_mm += r.rmse_mm;
    mean.mae_mm += r.mae_mm;
    mean.rel += r.rel;
    mean.delta1 += r.delta1;
    mean.delta2 += r.delta2;
    mean.delta3 += r.delta3;
    mean.valid += r.valid;
    if (r.irmse_per_km) {
      irmse += *r.irmse_per_km;
      imae += *r.imae_per_km;
    } else {
      inverse_ok = false;
    }
  }
  const double n = static_cast<double>(pairs.size());
  mean.rmse_mm /= n;
  mean.mae_mm /= n;
  mean.rel /= n;
  mean.delta1 /= n;
  mean.delta2 /= n;
  mean.delta3 /= n;
  if (inverse_ok) {
    mean.irmse_per_km = irmse / n;
    mean.imae_per_km = imae / n;
  }
  return mean;
}

std::string metrics_csv_header() { return "rmse_mm,mae_mm,irmse_km,imae_km,rel,d1,d2,d3"; }

std::string metrics_csv_row(const MetricsReport& r) {
  char buf[256];
  auto opt = [](const std::optional<double>& v) { return v ? *v : std::nan(""); };
  std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f,%.4f,%.4f,%.4f", r.rmse_mm,
                r.mae_mm, opt(r.irmse_per_km), opt(r.imae_per_km), r.rel, r.delta1,
                r.delta2, r.delta3);
  return buf;
}

}  // namespace dgdf
