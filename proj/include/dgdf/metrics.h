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

#ifndef DGDF_METRICS_H_
#define DGDF_METRICS_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgdf/tensor.h"

namespace dgdf {

// Single-channel depth in millimetres; 0 marks a missing measurement.
using DepthMap = TensorD;

void check_depth_map(const DepthMap& d);

struct MaskedL2 {
  double loss = 0.0;  // sum of squared errors over valid pixels, mm^2
  DepthMap dpred;     // 2 (pred - gt) on valid pixels, 0 elsewhere
  int valid = 0;
};

// Valid pixels are those with gt > 0. Throws EmptyMask when there are none.
MaskedL2 masked_l2(const DepthMap& pred, const DepthMap& gt);

struct MetricsReport {
  double rmse_mm = 0.0;
  double mae_mm = 0.0;
  // Inverse-depth metrics in 1/km (1e6 / d_mm). Empty when some valid pixel
  // has a non-positive prediction.
  std::optional<double> irmse_per_km;
  std::optional<double> imae_per_km;
  double rel = 0.0;
  // Percent of valid pixels with max(gt/pred, pred/gt) < 1.25^tau. Pixels with
  // a non-positive prediction never count as inliers.
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  int valid = 0;
};

MetricsReport metrics(const DepthMap& pred, const DepthMap& gt);

enum class Aggregation { kPixelUnion, kPerImageMean };

const char* AggregationName(Aggregation a);

// Dataset-level metrics: either pooled over the union of valid pixels of all
// images, or computed per image and then averaged.
MetricsReport aggregate_metrics(const std::vector<std::pair<DepthMap, DepthMap>>& pairs,
                                Aggregation mode);

// CSV header "rmse_mm,mae_mm,irmse_km,imae_km,rel,d1,d2,d3" and one row.
// Missing inverse metrics are written as "nan".
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& r);

}  // namespace dgdf

#endif  // DGDF_METRICS_H_
