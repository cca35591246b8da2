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

#ifndef DGDF_TENSOR_IO_H_
#define DGDF_TENSOR_IO_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dgdf/tensor.h"

namespace dgdf {

// DGDF1 container:
//   "DGDF" | version u8 (0x01) | dtype u8 (0x01 f32, 0x02 f64) |
//   h, w, c as u32 LE | h*w*c elements LE, row-major (h, w, c).
enum class DType : std::uint8_t { kF32 = 0x01, kF64 = 0x02 };

inline constexpr std::uint8_t kDgdfVersion = 0x01;

// Whole-file helpers; throw Io on failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

template <typename T>
std::string encode_tensor(const Tensor<T>& t);

// Decodes either dtype and converts to T.
template <typename T>
Tensor<T> decode_tensor(const std::string& bytes);

DType peek_dtype(const std::string& bytes);

template <typename T>
void write_tensor(const std::string& path, const Tensor<T>& t);

template <typename T>
Tensor<T> read_tensor(const std::string& path);

// A set of named tensors stored as one DGDF1 file per tensor next to a text
// manifest:
//   DGDF1-MANIFEST
//   attr <key> <value>
//   tensor <role> <relative file>
struct TensorBundle {
  std::map<std::string, std::string> attrs;
  std::vector<std::pair<std::string, TensorD>> tensors;

  const TensorD& get(const std::string& role) const;
  bool has(const std::string& role) const;
  int attr_int(const std::string& key) const;
};

// Writes <dir>/<stem>.manifest and <dir>/<stem>.<role>.dgdf. Tensors are
// stored as f64 unless `single` is set.
void write_bundle(const std::string& dir, const std::string& stem,
                  const TensorBundle& bundle, bool single = false);
TensorBundle read_bundle(const std::string& manifest_path);

}  // namespace dgdf

#endif  // DGDF_TENSOR_IO_H_
