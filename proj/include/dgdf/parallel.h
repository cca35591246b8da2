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

#ifndef DGDF_PARALLEL_H_
#define DGDF_PARALLEL_H_

#include <algorithm>
#include <thread>
#include <vector>

#include "dgdf/counter.h"

namespace dgdf {

struct ExecOptions {
  // Number of worker threads splitting output rows. 1 runs inline.
  int threads = 1;
};

// Splits [0, rows) into contiguous chunks. Each chunk gets its own counter so
// there is no shared mutable state; counters are merged after the join. Every
// output element is reduced by exactly one thread in a fixed order, so results
// are bit-identical to the single-threaded run.
template <typename Fn>
void parallel_rows(int rows, const ExecOptions& exec, OpCounter* counter, Fn&& fn) {
  const int n = std::max(1, std::min(exec.threads, rows));
  if (n == 1) {
    OpCounter local;
    fn(0, rows, local);
    if (counter) *counter += local;
    return;
  }
  std::vector<OpCounter> locals(n);
  std::vector<std::thread> workers;
  workers.reserve(n);
  for (int t = 0; t < n; ++t) {
    const int y0 = rows * t / n;
    const int y1 = rows * (t + 1) / n;
    workers.emplace_back([&, t, y0, y1] { fn(y0, y1, locals[t]); });
  }
  for (auto& w : workers) w.join();
  if (counter)
    for (const auto& l : locals) *counter += l;
}

}  // namespace dgdf

#endif  // DGDF_PARALLEL_H_
