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

#ifndef PPBA_CONFUSION_HPP_
#define PPBA_CONFUSION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ppba/rng.hpp"

namespace ppba {

// Quantized step direction of one measurement coordinate.
enum class StepDirection : std::int8_t { kMinus = -1, kZero = 0, kPlus = 1 };

// Column of a direction in the (-rho, 0, +rho) ordering.
constexpr std::size_t column(StepDirection d) {
  return static_cast<std::size_t>(static_cast<int>(d) + 1);
}

// A step in {-rho, 0, +rho}^m, stored as directions plus the magnitude.
struct StepVector {
  std::vector<StepDirection> directions;
  double rho = 0.0;

  std::size_t size() const noexcept { return directions.size(); }
  double value(std::size_t j) const {
    return static_cast<double>(static_cast<int>(directions[j])) * rho;
  }
  std::vector<double> values() const;
};

// Per-coordinate 2x3 tables of effective/ineffective counts for the
// directions (-rho, 0, +rho). Every counter starts at 1.
class ConfusionTables {
 public:
  explicit ConfusionTables(std::size_t m);

  std::size_t size() const noexcept { return effective_.size(); }
  std::uint64_t effective(std::size_t j, StepDirection d) const {
    return effective_[j][column(d)];
  }
  std::uint64_t ineffective(std::size_t j, StepDirection d) const {
    return ineffective_[j][column(d)];
  }
  void record(std::size_t j, StepDirection d, bool effective);
  // Sum of all six counters of coordinate j.
  std::uint64_t total(std::size_t j) const;

 private:
  std::vector<std::array<std::uint64_t, 3>> effective_;
  std::vector<std::array<std::uint64_t, 3>> ineffective_;
};

// Sampling distribution of coordinate j over (-rho, 0, +rho): each
// direction's effective rate e/(e+i), normalized to sum to 1.
std::array<double, 3> step_probabilities(const ConfusionTables& tables,
                                         std::size_t j);

// Draws every coordinate independently from step_probabilities.
StepVector sample_step(const ConfusionTables& tables, double rho, Rng& rng);

// Credits each coordinate's chosen direction (including 0) as effective or
// ineffective.
void update_confusion(ConfusionTables& tables, const StepVector& step,
                      bool effective);

}  // namespace ppba

#endif  // PPBA_CONFUSION_HPP_
