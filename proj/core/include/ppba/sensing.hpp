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

#ifndef PPBA_SENSING_HPP_
#define PPBA_SENSING_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ppba/dct.hpp"
#include "ppba/tensor.hpp"

namespace ppba {

// One 2D DCT coefficient slot of one channel.
struct FrequencyIndex {
  std::size_t channel = 0;
  std::size_t u = 0;  // vertical frequency
  std::size_t v = 0;  // horizontal frequency

  friend bool operator==(const FrequencyIndex&, const FrequencyIndex&) = default;
};

// Lowest-frequency-first selection of m coefficient slots.
//
// Within a channel, slots are ordered by u+v ascending with ties broken by
// smaller u. Channels are interleaved round-robin, so the k-th slot belongs to
// channel k % C and is that channel's (k / C)-th lowest frequency.
// Throws ValidationError if m == 0 or m > shape.size().
std::vector<FrequencyIndex> zigzag_selection(const TensorShape& shape,
                                             std::size_t m);

// min(d, d/8 rounded down to a multiple of C), and at least C; 1,500 for
// 3x224x224 inputs.
std::size_t default_measurement_dim(const TensorShape& shape);

// Low-frequency sensing operator A (m x d) with orthonormal rows.
//
// apply_adjoint maps a measurement vector z to the image-domain perturbation
// A^T z by scattering z into the selected DCT slots and running a per-channel
// inverse 2D DCT. apply_forward is the transpose: per-channel forward DCT
// followed by a gather. Because A A^T = I, ||A^T z|| = ||z||.
//
// Immutable after construction; safe to share across threads.
class SensingOperator {
 public:
  SensingOperator(TensorShape shape, std::size_t m);

  const TensorShape& shape() const noexcept { return shape_; }
  std::size_t measurement_dim() const noexcept { return selection_.size(); }
  std::size_t image_dim() const noexcept { return shape_.size(); }
  std::span<const FrequencyIndex> selection() const noexcept {
    return selection_;
  }

  Tensor apply_adjoint(std::span<const double> z) const;
  std::vector<double> apply_forward(const Tensor& w) const;
  std::vector<double> apply_forward(std::span<const double> w) const;

  // Dense row-major m x d copy of A. Rejected when m*d > 2^24.
  std::vector<double> materialize() const;

 private:
  TensorShape shape_;
  std::vector<FrequencyIndex> selection_;
  Dct2Plan plan_;
  // Every selected slot lies in the [0, rows_) x [0, cols_) corner.
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  // Offset of each selected slot inside the stacked per-channel windows.
  std::vector<std::size_t> window_offset_;
};

}  // namespace ppba

#endif  // PPBA_SENSING_HPP_
