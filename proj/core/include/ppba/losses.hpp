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

#ifndef PPBA_LOSSES_HPP_
#define PPBA_LOSSES_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace ppba {

// Index of the largest score; the lowest index wins ties.
std::size_t argmax(std::span<const double> scores);

// Indices of the k largest scores, largest first (lowest index wins ties).
std::vector<std::size_t> top_k_indices(std::span<const double> scores,
                                       std::size_t k);

// Untargeted C&W margin: max(scores[t] - max_{j != t} scores[j], 0).
// Zero exactly when some other class ties or beats t.
double cw_loss(std::span<const double> scores, std::size_t t);

// Largest score among the suppressed classes.
double topk_suppression_loss(std::span<const double> scores,
                             std::span<const std::size_t> suppressed);

enum class LossKind { kCw, kTopKSuppression };

// Loss selection for the query-based attacks. For kTopKSuppression the
// suppressed set is the clean image's top_k labels, and the attack succeeds
// once none of them remain in the victim's top_k.
struct LossSpec {
  LossKind kind = LossKind::kCw;
  std::size_t top_k = 3;
};

// A loss bound to the clean prediction of one image.
class Objective {
 public:
  struct Value {
    double loss = 0.0;
    bool success = false;
  };

  Objective(LossSpec spec, std::span<const double> clean_scores);

  Value operator()(std::span<const double> scores) const;

  std::size_t original_label() const noexcept { return original_label_; }
  const std::vector<std::size_t>& suppressed() const noexcept {
    return suppressed_;
  }

 private:
  LossSpec spec_;
  std::size_t original_label_;
  std::vector<std::size_t> suppressed_;
};

}  // namespace ppba

#endif  // PPBA_LOSSES_HPP_
