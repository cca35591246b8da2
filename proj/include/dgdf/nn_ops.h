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

// Building blocks shared by the filter generators and the toy network.

#ifndef DGDF_NN_OPS_H_
#define DGDF_NN_OPS_H_

#include <vector>

#include "dgdf/conv_oracle.h"
#include "dgdf/counter.h"
#include "dgdf/parallel.h"
#include "dgdf/tensor.h"

namespace dgdf {

// Same contract as conv2d_ref, with a tap-outer loop order. Counts
// k^2 * c_in * c_out MACs per pixel.
template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const StaticFilter<T>& f,
                 OpCounter* counter = nullptr, const ExecOptions& exec = {});

template <typename T>
Tensor<T> relu(const Tensor<T>& x);

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x);

template <typename T>
std::vector<T> global_avgpool(const Tensor<T>& x);

// 2x2 average pooling, stride 2. Requires even h and w.
template <typename T>
Tensor<T> avgpool2x2(const Tensor<T>& x);

template <typename T>
Tensor<T> upsample_nearest2x(const Tensor<T>& x);

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);

}  // namespace dgdf

#endif  // DGDF_NN_OPS_H_
