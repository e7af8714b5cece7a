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

#include "ppba/tensor_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

#include "ppba/errors.hpp"

namespace ppba {
namespace {

constexpr char kMagic[4] = {'T', 'N', 'S', 'R'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 |
         static_cast<std::uint32_t>(b[at + 3]) << 24;
}

void check_unit_range(const ImageTensor& x, const std::string& origin) {
  for (double v : x.values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError(origin + ": pixel values must lie in [0,1]");
    }
  }
}

}  // namespace

std::vector<std::uint8_t> encode_tnsr(const RawTensor& t) {
  std::size_t count = 1;
  for (auto d : t.dims) count *= d;
  if (count != t.values.size()) {
    throw ValidationError("TNSR payload size does not match dims");
  }
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
  for (auto d : t.dims) put_u32(out, d);
  for (float v : t.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

RawTensor decode_tnsr(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ValidationError("not a TNSR file (bad magic)");
  }
  RawTensor t;
  const std::uint32_t ndim = get_u32(bytes, 4);
  if (bytes.size() < 8 + 4 * static_cast<std::size_t>(ndim)) {
    throw ValidationError("TNSR header truncated");
  }
  std::size_t count = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    t.dims.push_back(get_u32(bytes, 8 + 4 * i));
    count *= t.dims.back();
  }
  const std::size_t offset = 8 + 4 * static_cast<std::size_t>(ndim);
  if (bytes.size() - offset != count * 4) {
    throw ValidationError("TNSR payload has " +
                          std::to_string(bytes.size() - offset) +
                          " bytes, expected " + std::to_string(count * 4));
  }
  t.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    t.values[i] = std::bit_cast<float>(get_u32(bytes, offset + 4 * i));
  }
  return t;
}

void write_tnsr(const std::filesystem::path& path, const RawTensor& t) {
  const auto bytes = encode_tnsr(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path.string(), "write failed");
}

RawTensor read_tnsr(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_tnsr(bytes);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_tnsr_image(const std::filesystem::path& path, const ImageTensor& x) {
  RawTensor t;
  const auto& s = x.shape();
  t.dims = {static_cast<std::uint32_t>(s.channels),
            static_cast<std::uint32_t>(s.height),
            static_cast<std::uint32_t>(s.width)};
  t.values.assign(x.values().begin(), x.values().end());
  write_tnsr(path, t);
}

ImageTensor read_png_image(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(
      std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!file) throw IoError(path.string(), "cannot open");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string(), "libpng initialization failed");
  }
  struct Guard {
    png_structp* p;
    png_infop* i;
    ~Guard() { png_destroy_read_struct(p, i, nullptr); }
  } guard{&png, &info};

  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    throw ValidationError(path.string() + ": corrupt PNG");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  if (png_get_bit_depth(png, info) != 8) {
    throw ValidationError(path.string() + ": only 8-bit PNG is supported");
  }
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const std::size_t width = png_get_image_width(png, info);
  const std::size_t height = png_get_image_height(png, info);
  const std::size_t channels = png_get_channels(png, info);
  pixels.resize(width * height * channels);
  rows.resize(height);
  for (std::size_t y = 0; y < height; ++y) {
    rows[y] = pixels.data() + y * width * channels;
  }
  png_read_image(png, rows.data());

  ImageTensor x({channels, height, width});
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t xi = 0; xi < width; ++xi) {
        x.at(c, y, xi) = pixels[(y * width + xi) * channels + c] / 255.0;
      }
    }
  }
  return x;
}

ImageTensor load_image(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".png" || ext == ".PNG") return read_png_image(path);
  const RawTensor raw = read_tnsr(path);
  if (raw.dims.size() != 3) {
    throw ValidationError(path.string() + ": image tensors must be [C,H,W]");
  }
  ImageTensor x({raw.dims[0], raw.dims[1], raw.dims[2]},
                std::vector<double>(raw.values.begin(), raw.values.end()));
  check_unit_range(x, path.string());
  return x;
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
  std::error_code ec;
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto ext = entry.path().extension().string();
    if (entry.is_regular_file() &&
        (ext == ".png" || ext == ".PNG" || ext == ".tnsr")) {
      out.push_back(entry.path());
    }
  }
  if (ec) throw IoError(dir.string(), ec.message());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ppba
