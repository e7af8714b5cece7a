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

#ifndef PPBA_TOY_VICTIM_HPP_
#define PPBA_TOY_VICTIM_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ppba/tensor.hpp"
#include "ppba/victim.hpp"

namespace ppba {

enum class ToyKind { kLinearSoftmax, kMlp1 };

ToyKind parse_toy_kind(std::string_view name);
std::string_view toy_kind_name(ToyKind kind);

// Row-major dense matrix; rows are output units.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t r, std::size_t c) const {
    return values[r * cols + c];
  }
};

// Parameters of a small differentiable classifier over flattened CHW input.
//   linear_softmax: softmax(W x + b)                 weights = {W}, bias = {b}
//   mlp1:           softmax(W2 tanh(W1 x + b1) + b2)  weights = {W1, W2}
struct ToyVictimSpec {
  ToyKind kind = ToyKind::kLinearSoftmax;
  TensorShape input_shape;
  std::size_t num_classes = 0;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> bias;
  std::size_t hidden_units = 0;  // mlp1 only

  // Throws ValidationError on inconsistent layer shapes.
  void validate() const;
};

std::vector<double> toy_logits(const ToyVictimSpec& spec, const ImageTensor& x);
std::vector<double> toy_predict(const ToyVictimSpec& spec, const ImageTensor& x);
// Exact gradient of cw_loss(toy_predict(spec, x), t) w.r.t. x; zero while
// the clamp is active.
Tensor toy_gradient(const ToyVictimSpec& spec, const ImageTensor& x,
                    std::size_t t);

// Weights are i.i.d. N(0, 1/fan_in) drawn from Rng(seed) in layer order,
// biases are zero. Same arguments give a byte-identical weights file.
// `hidden_units` is only used by mlp1.
ToyVictimSpec generate_toy_victim(std::uint64_t seed, ToyKind kind,
                                  const TensorShape& input_shape,
                                  std::size_t num_classes,
                                  std::size_t hidden_units = 32);

std::string toy_victim_to_json(const ToyVictimSpec& spec);
ToyVictimSpec toy_victim_from_json(std::string_view text);
void save_toy_victim(const ToyVictimSpec& spec,
                     const std::filesystem::path& path);
ToyVictimSpec load_toy_victim(const std::filesystem::path& path);

// Immutable in-process victim; safe for concurrent use.
class ToyVictim final : public GradientVictim {
 public:
  explicit ToyVictim(ToyVictimSpec spec);

  std::vector<double> predict(const ImageTensor& x) override {
    return toy_predict(spec_, x);
  }
  std::size_t num_classes() const override { return spec_.num_classes; }
  TensorShape input_shape() const override { return spec_.input_shape; }
  Tensor cw_gradient(const ImageTensor& x, std::size_t t) const override {
    return toy_gradient(spec_, x, t);
  }

  const ToyVictimSpec& spec() const noexcept { return spec_; }

 private:
  ToyVictimSpec spec_;
};

}  // namespace ppba

#endif  // PPBA_TOY_VICTIM_HPP_
