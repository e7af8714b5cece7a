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

#ifndef PPBA_TENSOR_HPP_
#define PPBA_TENSOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ppba {

// Channel-major (CHW) shape of an image or perturbation.
struct TensorShape {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const noexcept { return channels * height * width; }
  std::size_t plane() const noexcept { return height * width; }
  // Throws ValidationError unless every extent is positive.
  void validate() const;
  std::string to_string() const;

  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

// Dense CHW tensor of doubles. Images live in [0,1]; perturbations are
// unconstrained.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(TensorShape shape, double fill = 0.0);
  Tensor(TensorShape shape, std::vector<double> data);

  const TensorShape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> channel(std::size_t c);
  std::span<const double> channel(std::size_t c) const;

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * shape_.height + y) * shape_.width + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * shape_.height + y) * shape_.width + x];
  }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  TensorShape shape_;
  std::vector<double> data_;
};

using ImageTensor = Tensor;

double l2_norm(std::span<const double> v);
double linf_norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> v);

}  // namespace ppba

#endif  // PPBA_TENSOR_HPP_
