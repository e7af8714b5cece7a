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

#ifndef PPBA_VICTIM_HPP_
#define PPBA_VICTIM_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ppba/tensor.hpp"

namespace ppba {

enum class OutputKind { kProbs, kLogits };

OutputKind parse_output_kind(std::string_view name);
std::string_view output_kind_name(OutputKind kind);

// Scores of K >= 2 classes as reported by a victim.
struct ScoreVector {
  std::vector<double> scores;
  OutputKind output = OutputKind::kProbs;
};

// Throws VictimError(kInvalidScores) unless there are >= 2 finite scores and,
// for probability output, none is negative. Sums are not
// checked.
void validate_scores(const ScoreVector& s);

// Black-box query boundary: an image in [0,1]^{CxHxW} goes in, K scores come
// out. Implementations signal failure with VictimError.
class Victim {
 public:
  virtual ~Victim() = default;

  virtual std::vector<double> predict(const ImageTensor& x) = 0;
  virtual std::size_t num_classes() const = 0;
  virtual TensorShape input_shape() const = 0;
};

// A victim that also exposes exact input gradients of the C&W loss. Only the
// built-in toy models implement this; it backs the white-box BIM check.
class GradientVictim : public Victim {
 public:
  // Gradient of cw_loss(predict(x), t) with respect to x.
  virtual Tensor cw_gradient(const ImageTensor& x, std::size_t t) const = 0;
};

// Forwards to another victim and counts every evaluation. The counter is
// atomic; it is exact provided the wrapped victim is safe to share.
class CountingVictim final : public Victim {
 public:
  explicit CountingVictim(Victim& inner) : inner_(inner) {}

  std::vector<double> predict(const ImageTensor& x) override {
    count_.fetch_add(1, std::memory_order_relaxed);
    return inner_.predict(x);
  }
  std::size_t num_classes() const override { return inner_.num_classes(); }
  TensorShape input_shape() const override { return inner_.input_shape(); }

  std::uint64_t count() const noexcept {
    return count_.load(std::memory_order_relaxed);
  }

 private:
  Victim& inner_;
  std::atomic<std::uint64_t> count_{0};
};

}  // namespace ppba

#endif  // PPBA_VICTIM_HPP_
