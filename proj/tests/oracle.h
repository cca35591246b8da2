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

// Test-only oracles. They work on flat std::vector<double> buffers with their
// own index arithmetic and do not call into the library, so a shared indexing
// bug cannot make both sides agree.

#ifndef DGDF_TESTS_ORACLE_H_
#define DGDF_TESTS_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline double at3(const Vec& x, int h, int w, int c, int y, int xx, int ch) {
  if (y < 0 || y >= h || xx < 0 || xx >= w) return 0.0;
  return x[(y * w + xx) * c + ch];
}

// weights[((ky * k + kx) * ci + a) * co + b]
inline Vec conv(const Vec& x, int h, int w, int ci, const Vec& weights, const Vec& bias,
                int k, int co) {
  Vec y(static_cast<std::size_t>(h) * w * co, 0.0);
  const int r = k / 2;
  for (int py = 0; py < h; ++py)
    for (int px = 0; px < w; ++px)
      for (int b = 0; b < co; ++b) {
        double s = bias.empty() ? 0.0 : bias[b];
        for (int ky = 0; ky < k; ++ky)
          for (int kx = 0; kx < k; ++kx)
            for (int a = 0; a < ci; ++a)
              s += weights[((ky * k + kx) * ci + a) * co + b] *
                   at3(x, h, w, ci, py + ky - r, px + kx - r, a);
        y[(py * w + px) * co + b] = s;
      }
  return y;
}

// f[(((p * k*k) + t) * ci + a) * co + b]
inline Vec full_dynamic(const Vec& x, int h, int w, int ci, const Vec& f, int k, int co) {
  Vec y(static_cast<std::size_t>(h) * w * co, 0.0);
  const int r = k / 2;
  for (int py = 0; py < h; ++py)
    for (int px = 0; px < w; ++px) {
      const int p = py * w + px;
      for (int b = 0; b < co; ++b) {
        double s = 0.0;
        for (int ky = 0; ky < k; ++ky)
          for (int kx = 0; kx < k; ++kx) {
            const int t = ky * k + kx;
            for (int a = 0; a < ci; ++a)
              s += f[((static_cast<std::size_t>(p) * k * k + t) * ci + a) * co + b] *
                   at3(x, h, w, ci, py + ky - r, px + kx - r, a);
          }
        y[p * co + b] = s;
      }
    }
  return y;
}

// f[(p * k*k + t) * c + a]
inline Vec depthwise(const Vec& x, int h, int w, int c, const Vec& f, int k) {
  Vec y(static_cast<std::size_t>(h) * w * c, 0.0);
  const int r = k / 2;
  for (int py = 0; py < h; ++py)
    for (int px = 0; px < w; ++px) {
      const int p = py * w + px;
      for (int a = 0; a < c; ++a) {
        double s = 0.0;
        for (int ky = 0; ky < k; ++ky)
          for (int kx = 0; kx < k; ++kx)
            s += f[(static_cast<std::size_t>(p) * k * k + ky * k + kx) * c + a] *
                 at3(x, h, w, c, py + ky - r, px + kx - r, a);
        y[p * c + a] = s;
      }
    }
  return y;
}

// m[a * co + b]
inline Vec pointwise(const Vec& x, int n, int ci, const Vec& m, int co) {
  Vec y(static_cast<std::size_t>(n) * co, 0.0);
  for (int p = 0; p < n; ++p)
    for (int b = 0; b < co; ++b) {
      double s = 0.0;
      for (int a = 0; a < ci; ++a) s += m[a * co + b] * x[p * ci + a];
      y[p * co + b] = s;
    }
  return y;
}

inline double max_abs(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Error metrics written out directly from their definitions. Depths in mm,
// inverse depths in 1/km.
struct Metrics {
  double rmse = 0, mae = 0, irmse = 0, imae = 0, rel = 0, d1 = 0, d2 = 0, d3 = 0;
};

inline Metrics metrics(const Vec& pred, const Vec& gt) {
  Metrics m;
  double n = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!(gt[i] > 0)) continue;
    n += 1;
    const double d = pred[i] - gt[i];
    m.rmse += d * d;
    m.mae += std::fabs(d);
    const double inv = 1e6 / pred[i] - 1e6 / gt[i];
    m.irmse += inv * inv;
    m.imae += std::fabs(inv);
    m.rel += std::fabs(d) / gt[i];
    const double q = pred[i] / gt[i] > gt[i] / pred[i] ? pred[i] / gt[i] : gt[i] / pred[i];
    if (q < 1.25) m.d1 += 1;
    if (q < 1.5625) m.d2 += 1;
    if (q < 1.953125) m.d3 += 1;
  }
  m.rmse = std::sqrt(m.rmse / n);
  m.mae /= n;
  m.irmse = std::sqrt(m.irmse / n);
  m.imae /= n;
  m.rel /= n;
  m.d1 = 100 * m.d1 / n;
  m.d2 = 100 * m.d2 / n;
  m.d3 = 100 * m.d3 / n;
  return m;
}

inline double rel(double a, double b) {
  const double s = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / s;
}

}  // namespace oracle

#endif  // DGDF_TESTS_ORACLE_H_
