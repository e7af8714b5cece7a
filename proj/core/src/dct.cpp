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

#include "ppba/dct.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ppba/errors.hpp"
#include "ppba/tensor.hpp"

namespace ppba {

std::vector<double> dct_basis(std::size_t n) {
  if (n == 0) throw ValidationError("dct length must be positive");
  std::vector<double> basis(n * n);
  const double dc = std::sqrt(1.0 / static_cast<double>(n));
  const double ac = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = k == 0 ? dc : ac;
    for (std::size_t i = 0; i < n; ++i) {
      const double angle = std::numbers::pi * static_cast<double>((2 * i + 1) * k) /
                           static_cast<double>(2 * n);
      basis[k * n + i] = scale * std::cos(angle);
    }
  }
  return basis;
}

Dct2Plan::Dct2Plan(std::size_t height, std::size_t width)
    : height_(height), width_(width),
      basis_h_(dct_basis(height)), basis_w_(dct_basis(width)) {}

namespace {

void check_size(std::span<const double> s, std::size_t n, const char* what) {
  if (s.size() != n) {
    throw ValidationError(std::string(what) + ": expected " +
                          std::to_string(n) + " values, got " +
                          std::to_string(s.size()));
  }
}

}  // namespace

void Dct2Plan::forward(std::span<const double> in, std::span<double> out) const {
  forward_lowpass(in, height_, width_, out);
}

void Dct2Plan::inverse(std::span<const double> in, std::span<double> out) const {
  inverse_lowpass(in, height_, width_, out);
}

void Dct2Plan::forward_lowpass(std::span<const double> in, std::size_t rows,
                               std::size_t cols, std::span<double> out) const {
  check_size(in, height_ * width_, "dct forward input");
  check_size(out, rows * cols, "dct forward output");
  if (rows > height_ || cols > width_) {
    throw ValidationError("dct forward: lowpass window exceeds grid");
  }
  // Row pass: tmp[y][v] = sum_x in[y][x] * Cw[v][x], v < cols.
  std::vector<double> tmp(height_ * cols, 0.0);
  for (std::size_t y = 0; y < height_; ++y) {
    const double* row = in.data() + y * width_;
    for (std::size_t v = 0; v < cols; ++v) {
      const double* b = basis_w_.data() + v * width_;
      double acc = 0.0;
      for (std::size_t x = 0; x < width_; ++x) acc += row[x] * b[x];
      tmp[y * cols + v] = acc;
    }
  }
  // Column pass: out[u][v] = sum_y Ch[u][y] * tmp[y][v], u < rows.
  for (std::size_t u = 0; u < rows; ++u) {
    double* dst = out.data() + u * cols;
    for (std::size_t v = 0; v < cols; ++v) dst[v] = 0.0;
    const double* b = basis_h_.data() + u * height_;
    for (std::size_t y = 0; y < height_; ++y) {
      const double c = b[y];
      const double* src = tmp.data() + y * cols;
      for (std::size_t v = 0; v < cols; ++v) dst[v] += c * src[v];
    }
  }
}

void Dct2Plan::inverse_lowpass(std::span<const double> coeffs, std::size_t rows,
                               std::size_t cols, std::span<double> out) const {
  check_size(coeffs, rows * cols, "dct inverse input");
  check_size(out, height_ * width_, "dct inverse output");
  if (rows > height_ || cols > width_) {
    throw ValidationError("dct inverse: lowpass window exceeds grid");
  }
  // Column pass: tmp[y][v] = sum_u Ch[u][y] * coeffs[u][v].
  std::vector<double> tmp(height_ * cols, 0.0);
  for (std::size_t u = 0; u < rows; ++u) {
    const double* b = basis_h_.data() + u * height_;
    const double* src = coeffs.data() + u * cols;
    for (std::size_t y = 0; y < height_; ++y) {
      const double c = b[y];
      if (c == 0.0) continue;
      double* dst = tmp.data() + y * cols;
      for (std::size_t v = 0; v < cols; ++v) dst[v] += c * src[v];
    }
  }
  // Row pass: out[y][x] = sum_v tmp[y][v] * Cw[v][x].
  for (std::size_t y = 0; y < height_; ++y) {
    double* dst = out.data() + y * width_;
    for (std::size_t x = 0; x < width_; ++x) dst[x] = 0.0;
    const double* src = tmp.data() + y * cols;
    for (std::size_t v = 0; v < cols; ++v) {
      const double c = src[v];
      if (c == 0.0) continue;
      const double* b = basis_w_.data() + v * width_;
      for (std::size_t x = 0; x < width_; ++x) dst[x] += c * b[x];
    }
  }
}

std::vector<double> dct2_forward(std::span<const double> x, std::size_t height,
                                 std::size_t width) {
  if (!all_finite(x)) throw ValidationError("dct2_forward: non-finite input");
  std::vector<double> out(height * width);
  Dct2Plan(height, width).forward(x, out);
  return out;
}

std::vector<double> dct2_inverse(std::span<const double> coeffs,
                                 std::size_t height, std::size_t width) {
  if (!all_finite(coeffs)) {
    throw ValidationError("dct2_inverse: non-finite input");
  }
  std::vector<double> out(height * width);
  Dct2Plan(height, width).inverse(coeffs, out);
  return out;
}

}  // namespace ppba
