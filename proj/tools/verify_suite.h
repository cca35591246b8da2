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

#ifndef DGDF_TOOLS_VERIFY_SUITE_H_
#define DGDF_TOOLS_VERIFY_SUITE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace dgdf {

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;  // deterministic for a given seed (no timings)
};

// Oracle equivalence, gradient, cost-instrumentation, metrics and sampling
// properties. `threads` > 1 runs independent properties concurrently; the
// report order does not change.
std::vector<PropertyResult> run_verify_suite(std::uint64_t seed, int threads);

}  // namespace dgdf

#endif  // DGDF_TOOLS_VERIFY_SUITE_H_
