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

#include "dgdf/tensor_io.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <type_traits>

namespace dgdf {
namespace {

constexpr char kMagic[4] = {'D', 'G', 'D', 'F'};
constexpr std::size_t kHeaderBytes = 4 + 1 + 1 + 3 * 4;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(const std::string& in, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  return v;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  DGDF_CHECK(f.good(), ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  DGDF_CHECK(f.good(), ErrorCode::kIo, "cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  DGDF_CHECK(f.good(), ErrorCode::kIo, "write failed: " + path);
}

DType peek_dtype(const std::string& bytes) {
  DGDF_CHECK(bytes.size() >= kHeaderBytes, ErrorCode::kTruncatedData,
             "DGDF1 header truncated");
  DGDF_CHECK(std::memcmp(bytes.data(), kMagic, 4) == 0,
             ErrorCode::kMalformedHeader, "bad DGDF magic");
  DGDF_CHECK(static_cast<std::uint8_t>(bytes[4]) == kDgdfVersion,
             ErrorCode::kMalformedHeader, "unsupported DGDF version");
  const auto dt = static_cast<std::uint8_t>(bytes[5]);
  DGDF_CHECK(dt == 0x01 || dt == 0x02, ErrorCode::kMalformedHeader,
             "unknown DGDF dtype");
  return static_cast<DType>(dt);
}

template <typename T>
std::string encode_tensor(const Tensor<T>& t) {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
  std::string out(kMagic, 4);
  out.push_back(static_cast<char>(kDgdfVersion));
  out.push_back(static_cast<char>(std::is_same_v<T, float> ? DType::kF32 : DType::kF64));
  put_u32(out, static_cast<std::uint32_t>(t.h()));
  put_u32(out, static_cast<std::uint32_t>(t.w()));
  put_u32(out, static_cast<std::uint32_t>(t.c()));
  out.reserve(out.size() + t.size() * sizeof(T));
  for (T v : t.values()) {
    if constexpr (std::is_same_v<T, float>) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, 4);
      put_u32(out, bits);
    } else {
      std::uint64_t bits;
      std::memcpy(&bits, &v, 8);
      put_u64(out, bits);
    }
  }
  return out;
}

template <typename T>
Tensor<T> decode_tensor(const std::string& bytes) {
  const DType dt = peek_dtype(bytes);
  const auto h = static_cast<std::uint32_t>(get_le(bytes, 6, 4));
  const auto w = static_cast<std::uint32_t>(get_le(bytes, 10, 4));
  const auto c = static_cast<std::uint32_t>(get_le(bytes, 14, 4));
  DGDF_CHECK(h >= 1 && w >= 1 && c >= 1, ErrorCode::kMalformedHeader,
             "DGDF1 dims must be >= 1");
  const std::size_t n = static_cast<std::size_t>(h) * w * c;
  const std::size_t elem = dt == DType::kF32 ? 4 : 8;
  DGDF_CHECK(bytes.size() >= kHeaderBytes + n * elem, ErrorCode::kTruncatedData,
             "DGDF1 payload truncated");
  std::vector<T> data(n);
  std::size_t pos = kHeaderBytes;
  for (std::size_t i = 0; i < n; ++i, pos += elem) {
    if (dt == DType::kF32) {
      const auto bits = static_cast<std::uint32_t>(get_le(bytes, pos, 4));
      float v;
      std::memcpy(&v, &bits, 4);
      data[i] = static_cast<T>(v);
    } else {
      const std::uint64_t bits = get_le(bytes, pos, 8);
      double v;
      std::memcpy(&v, &bits, 8);
      data[i] = static_cast<T>(v);
    }
  }
  return Tensor<T>(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c),
                   std::move(data));
}

template <typename T>
void write_tensor(const std::string& path, const Tensor<T>& t) {
  write_file(path, encode_tensor(t));
}

template <typename T>
Tensor<T> read_tensor(const std::string& path) {
  return decode_tensor<T>(read_file(path));
}

template std::string encode_tensor<float>(const Tensor<float>&);
template std::string encode_tensor<double>(const Tensor<double>&);
template Tensor<float> decode_tensor<float>(const std::string&);
template Tensor<double> decode_tensor<double>(const std::string&);
template void write_tensor<float>(const std::string&, const Tensor<float>&);
template void write_tensor<double>(const std::string&, const Tensor<double>&);
template Tensor<float> read_tensor<float>(const std::string&);
template Tensor<double> read_tensor<double>(const std::string&);

const TensorD& TensorBundle::get(const std::string& role) const {
  for (const auto& [r, t] : tensors)
    if (r == role) return t;
  throw Error(ErrorCode::kInvalidInput, "bundle has no tensor '" + role + "'");
}

bool TensorBundle::has(const std::string& role) const {
  for (const auto& [r, t] : tensors)
    if (r == role) return true;
  return false;
}

int TensorBundle::attr_int(const std::string& key) const {
  auto it = attrs.find(key);
  DGDF_CHECK(it != attrs.end(), ErrorCode::kInvalidInput,
             "bundle has no attr '" + key + "'");
  return std::stoi(it->second);
}

void write_bundle(const std::string& dir, const std::string& stem,
                  const TensorBundle& bundle, bool single) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  DGDF_CHECK(!ec, ErrorCode::kIo, "cannot create " + dir);
  std::ostringstream manifest;
  manifest << "DGDF1-MANIFEST\n";
  for (const auto& [k, v] : bundle.attrs) manifest << "attr " << k << ' ' << v << '\n';
  for (const auto& [role, t] : bundle.tensors) {
    const std::string file = stem + "." + role + ".dgdf";
    if (single)
      write_tensor((fs::path(dir) / file).string(), t.cast<float>());
    else
      write_tensor((fs::path(dir) / file).string(), t);
    manifest << "tensor " << role << ' ' << file << '\n';
  }
  write_file((fs::path(dir) / (stem + ".manifest")).string(), manifest.str());
}

TensorBundle read_bundle(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  std::istringstream in(read_file(manifest_path));
  std::string line;
  std::getline(in, line);
  DGDF_CHECK(line == "DGDF1-MANIFEST", ErrorCode::kMalformedHeader,
             "not a DGDF1 manifest: " + manifest_path);
  const fs::path base = fs::path(manifest_path).parent_path();
  TensorBundle b;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind, key, value;
    ls >> kind >> key >> value;
    DGDF_CHECK(!key.empty() && !value.empty(), ErrorCode::kMalformedHeader,
               "bad manifest line: " + line);
    if (kind == "attr") {
      b.attrs[key] = value;
    } else if (kind == "tensor") {
      b.tensors.emplace_back(key, read_tensor<double>((base / value).string()));
    } else {
      throw Error(ErrorCode::kMalformedHeader, "bad manifest line: " + line);
    }
  }
  return b;
}

}  // namespace dgdf
