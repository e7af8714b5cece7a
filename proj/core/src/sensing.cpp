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

#include "ppba/sensing.hpp"

#include <algorithm>
#include <string>

#include "ppba/errors.hpp"

namespace ppba {
namespace {

// First `count` slots of one channel in (u+v, u) order.
std::vector<std::pair<std::size_t, std::size_t>> diagonal_order(
    std::size_t height, std::size_t width, std::size_t count) {
  std::vector<std::pair<std::size_t, std::size_t>> order;
  order.reserve(count);
  for (std::size_t s = 0; s + 1 < height + width && order.size() < count; ++s) {
    const std::size_t u_lo = s >= width ? s - width + 1 : 0;
    const std::size_t u_hi = std::min(s, height - 1);
    for (std::size_t u = u_lo; u <= u_hi && order.size() < count; ++u) {
      order.emplace_back(u, s - u);
    }
  }
  return order;
}

}  // namespace

std::vector<FrequencyIndex> zigzag_selection(const TensorShape& shape,
                                             std::size_t m) {
  shape.validate();
  if (m == 0 || m > shape.size()) {
    throw ValidationError("measurement dimension m=" + std::to_string(m) +
                          " must lie in [1, " + std::to_string(shape.size()) +
                          "]");
  }
  const std::size_t per_channel = (m + shape.channels - 1) / shape.channels;
  const auto order = diagonal_order(shape.height, shape.width, per_channel);

  std::vector<FrequencyIndex> selection;
  selection.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto [u, v] = order[k / shape.channels];
    selection.push_back({k % shape.channels, u, v});
  }
  return selection;
}

std::size_t default_measurement_dim(const TensorShape& shape) {
  shape.validate();
  const std::size_t d = shape.size();
  if (shape.channels == 3 && shape.height == 224 && shape.width == 224) {
    return 1500;
  }
  std::size_t m = (d / 8) / shape.channels * shape.channels;
  m = std::max(m, shape.channels);
  return std::min(m, d);
}

SensingOperator::SensingOperator(TensorShape shape, std::size_t m)
    : shape_(shape),
      selection_(zigzag_selection(shape, m)),
      plan_(shape.height, shape.width) {
  for (const auto& f : selection_) {
    rows_ = std::max(rows_, f.u + 1);
    cols_ = std::max(cols_, f.v + 1);
  }
  window_offset_.reserve(selection_.size());
  for (const auto& f : selection_) {
    window_offset_.push_back(f.channel * rows_ * cols_ + f.u * cols_ + f.v);
  }
}

Tensor SensingOperator::apply_adjoint(std::span<const double> z) const {
  if (z.size() != selection_.size()) {
    throw ValidationError("apply_adjoint: measurement vector has " +
                          std::to_string(z.size()) + " entries, operator m=" +
                          std::to_string(selection_.size()));
  }
  const std::size_t window = rows_ * cols_;
  std::vector<double> coeffs(shape_.channels * window, 0.0);
  for (std::size_t j = 0; j < z.size(); ++j) coeffs[window_offset_[j]] = z[j];

  Tensor out(shape_);
  for (std::size_t c = 0; c < shape_.channels; ++c) {
    plan_.inverse_lowpass(std::span<const double>(coeffs).subspan(c * window, window),
                          rows_, cols_, out.channel(c));
  }
  return out;
}

std::vector<double> SensingOperator::apply_forward(const Tensor& w) const {
  if (w.shape() != shape_) {
    throw ValidationError("apply_forward: tensor shape " +
                          w.shape().to_string() + " does not match operator " +
                          shape_.to_string());
  }
  return apply_forward(w.values());
}

std::vector<double> SensingOperator::apply_forward(
    std::span<const double> w) const {
  if (w.size() != shape_.size()) {
    throw ValidationError("apply_forward: expected " +
                          std::to_string(shape_.size()) + " values, got " +
                          std::to_string(w.size()));
  }
  const std::size_t window = rows_ * cols_;
  std::vector<double> coeffs(shape_.channels * window);
  for (std::size_t c = 0; c < shape_.channels; ++c) {
    plan_.forward_lowpass(w.subspan(c * shape_.plane(), shape_.plane()), rows_,
                          cols_,
                          std::span<double>(coeffs).subspan(c * window, window));
  }
  std::vector<double> z(selection_.size());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = coeffs[window_offset_[j]];
  return z;
}

std::vector<double> SensingOperator::materialize() const {
  const std::size_t m = selection_.size();
  const std::size_t d = shape_.size();
  if (m * d > (std::size_t{1} << 24)) {
    throw ValidationError("materialize: m*d=" + std::to_string(m * d) +
                          " exceeds 2^24");
  }
  std::vector<double> dense(m * d);
  std::vector<double> unit(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    unit[j] = 1.0;
    const Tensor row = apply_adjoint(unit);
    std::copy(row.data().begin(), row.data().end(), dense.begin() + j * d);
    unit[j] = 0.0;
  }
  return dense;
}

}  // namespace ppba
