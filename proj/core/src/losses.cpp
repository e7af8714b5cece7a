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

#include "ppba/losses.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "ppba/errors.hpp"

namespace ppba {

std::size_t argmax(std::span<const double> scores) {
  if (scores.empty()) throw ValidationError("argmax of an empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

std::vector<std::size_t> top_k_indices(std::span<const double> scores,
                                       std::size_t k) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k),
                    idx.end(), [&](std::size_t a, std::size_t b) {
                      return scores[a] > scores[b] ||
                             (scores[a] == scores[b] && a < b);
                    });
  idx.resize(k);
  return idx;
}

double cw_loss(std::span<const double> scores, std::size_t t) {
  if (scores.size() < 2) {
    throw ValidationError("cw_loss needs at least 2 classes");
  }
  if (t >= scores.size()) {
    throw ValidationError("cw_loss: label " + std::to_string(t) +
                          " out of range");
  }
  double other = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (j != t) other = std::max(other, scores[j]);
  }
  return std::max(scores[t] - other, 0.0);
}

double topk_suppression_loss(std::span<const double> scores,
                             std::span<const std::size_t> suppressed) {
  if (suppressed.empty()) {
    throw ValidationError("topk_suppression_loss: empty suppressed set");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k : suppressed) {
    if (k >= scores.size()) {
      throw ValidationError("topk_suppression_loss: label " +
                            std::to_string(k) + " out of range");
    }
    best = std::max(best, scores[k]);
  }
  return best;
}

Objective::Objective(LossSpec spec, std::span<const double> clean_scores)
    : spec_(spec), original_label_(argmax(clean_scores)) {
  if (clean_scores.size() < 2) {
    throw ValidationError("victim must report at least 2 classes");
  }
  if (spec_.kind == LossKind::kTopKSuppression) {
    if (spec_.top_k == 0 || spec_.top_k >= clean_scores.size()) {
      throw ValidationError("top-k suppression needs 1 <= k < K");
    }
    suppressed_ = top_k_indices(clean_scores, spec_.top_k);
  }
}

Objective::Value Objective::operator()(std::span<const double> scores) const {
  if (spec_.kind == LossKind::kCw) {
    const double loss = cw_loss(scores, original_label_);
    return {loss, loss <= 0.0};
  }
  const auto top = top_k_indices(scores, spec_.top_k);
  const bool cleared = std::none_of(top.begin(), top.end(), [&](std::size_t k) {
    return std::find(suppressed_.begin(), suppressed_.end(), k) !=
           suppressed_.end();
  });
  return {topk_suppression_loss(scores, suppressed_), cleared};
}

}  // namespace ppba
