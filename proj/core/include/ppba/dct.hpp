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

#ifndef PPBA_DCT_HPP_
#define PPBA_DCT_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace ppba {

// Orthonormal DCT-II basis of length n, stored row-major: basis[k*n + i] is
// the k-th cosine evaluated at sample i. Rows are orthonormal, so the
// transpose is the DCT-III inverse.
std::vector<double> dct_basis(std::size_t n);

// Separable orthonormal 2D DCT over a row-major height x width grid.
//
// The plan owns both 1D bases and is immutable once built, so a single plan
// may be shared by any number of threads.
class Dct2Plan {
 public:
  Dct2Plan(std::size_t height, std::size_t width);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }

  // Type-II forward transform. `in` and `out` must both hold height*width
  // values and must not alias.
  void forward(std::span<const double> in, std::span<double> out) const;
  // Type-III inverse transform (exact inverse of forward()).
  void inverse(std::span<const double> in, std::span<double> out) const;

  // Inverse transform of a coefficient grid whose nonzeros are confined to
  // rows [0, rows) and columns [0, cols). `coeffs` is rows x cols, row-major.
  void inverse_lowpass(std::span<const double> coeffs, std::size_t rows,
                       std::size_t cols, std::span<double> out) const;
  // Forward transform that only produces coefficient rows [0, rows) and
  // columns [0, cols); `out` is rows x cols, row-major.
  void forward_lowpass(std::span<const double> in, std::size_t rows,
                       std::size_t cols, std::span<double> out) const;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> basis_h_;
  std::vector<double> basis_w_;
};

// Convenience wrappers; reject non-finite input with ValidationError.
std::vector<double> dct2_forward(std::span<const double> x, std::size_t height,
                                 std::size_t width);
std::vector<double> dct2_inverse(std::span<const double> coeffs,
                                 std::size_t height, std::size_t width);

}  // namespace ppba

#endif  // PPBA_DCT_HPP_
