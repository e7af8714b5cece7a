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

#include "ppba/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ppba/errors.hpp"

namespace ppba {

void TensorShape::validate() const {
  if (channels == 0 || height == 0 || width == 0) {
    throw ValidationError("tensor shape must be positive, got " + to_string());
  }
}

std::string TensorShape::to_string() const {
  return "[" + std::to_string(channels) + "," + std::to_string(height) + "," +
         std::to_string(width) + "]";
}

Tensor::Tensor(TensorShape shape, double fill)
    : shape_(shape), data_(shape.size(), fill) {
  shape_.validate();
}

Tensor::Tensor(TensorShape shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
  shape_.validate();
  if (data_.size() != shape_.size()) {
    throw ValidationError("tensor data has " + std::to_string(data_.size()) +
                          " values, shape " + shape_.to_string() + " needs " +
                          std::to_string(shape_.size()));
  }
}

std::span<double> Tensor::channel(std::size_t c) {
  return std::span<double>(data_).subspan(c * shape_.plane(), shape_.plane());
}

std::span<const double> Tensor::channel(std::size_t c) const {
  return std::span<const double>(data_).subspan(c * shape_.plane(),
                                                shape_.plane());
}

double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double linf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace ppba
