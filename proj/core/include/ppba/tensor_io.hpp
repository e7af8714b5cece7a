// Copyright 2026 The PPBA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PPBA_TENSOR_IO_HPP_
#define PPBA_TENSOR_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ppba/tensor.hpp"

namespace ppba {

// Raw tensor file: "TNSR", u32le ndim, ndim x u32le dims, then row-major
// f32le payload of exactly prod(dims) values.
struct RawTensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> values;
};

std::vector<std::uint8_t> encode_tnsr(const RawTensor& t);
RawTensor decode_tnsr(std::span<const std::uint8_t> bytes);
void write_tnsr(const std::filesystem::path& path, const RawTensor& t);
RawTensor read_tnsr(const std::filesystem::path& path);

// CHW image helpers. TNSR images must be 3-D [C,H,W]; 8-bit PNG (gray, gray
// + alpha, RGB, RGBA; alpha dropped) is mapped to [0,1] by /255. Values
// outside [0,1] are rejected with ValidationError.
void write_tnsr_image(const std::filesystem::path& path, const ImageTensor& x);
ImageTensor read_png_image(const std::filesystem::path& path);
ImageTensor load_image(const std::filesystem::path& path);

// Sorted *.png / *.tnsr files of a directory.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace ppba

#endif  // PPBA_TENSOR_IO_HPP_
