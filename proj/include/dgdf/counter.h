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

#ifndef DGDF_COUNTER_H_
#define DGDF_COUNTER_H_

#include <cstdint>

namespace dgdf {

// Per-call accumulator filled by the fast paths when a non-null pointer is
// passed. A MAC is 2 FLOPs; a lone multiply (scheme B's attention scaling) is
// 1 FLOP. Activations, bias additions and pooling sums are not counted.
struct OpCounter {
  std::uint64_t macs = 0;
  std::uint64_t muls = 0;
  // Elements of dynamically generated or intermediate buffers.
  std::uint64_t mem_elems = 0;

  std::uint64_t flops() const { return 2 * macs + muls; }

  OpCounter& operator+=(const OpCounter& o) {
    macs += o.macs;
    muls += o.muls;
    mem_elems += o.mem_elems;
    return *this;
  }
};

}  // namespace dgdf

#endif  // DGDF_COUNTER_H_
