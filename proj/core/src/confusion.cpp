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

#include "ppba/confusion.hpp"

#include <numeric>
#include <string>

#include "ppba/errors.hpp"

namespace ppba {

std::vector<double> StepVector::values() const {
  std::vector<double> out(directions.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = value(j);
  return out;
}

ConfusionTables::ConfusionTables(std::size_t m)
    : effective_(m, {1, 1, 1}), ineffective_(m, {1, 1, 1}) {}

void ConfusionTables::record(std::size_t j, StepDirection d, bool effective) {
  auto& row = effective ? effective_[j] : ineffective_[j];
  ++row[column(d)];
}

std::uint64_t ConfusionTables::total(std::size_t j) const {
  return std::accumulate(effective_[j].begin(), effective_[j].end(),
                         std::uint64_t{0}) +
         std::accumulate(ineffective_[j].begin(), ineffective_[j].end(),
                         std::uint64_t{0});
}

std::array<double, 3> step_probabilities(const ConfusionTables& tables,
                                         std::size_t j) {
  static constexpr StepDirection kDirs[] = {
      StepDirection::kMinus, StepDirection::kZero, StepDirection::kPlus};
  std::array<double, 3> rate{};
  double sum = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto e = static_cast<double>(tables.effective(j, kDirs[k]));
    const auto i = static_cast<double>(tables.ineffective(j, kDirs[k]));
    rate[k] = e / (e + i);
    sum += rate[k];
  }
  for (double& p : rate) p /= sum;
  return rate;
}

StepVector sample_step(const ConfusionTables& tables, double rho, Rng& rng) {
  StepVector step{std::vector<StepDirection>(tables.size()), rho};
  for (std::size_t j = 0; j < tables.size(); ++j) {
    const auto p = step_probabilities(tables, j);
    const double u = rng.uniform();
    if (u < p[0]) {
      step.directions[j] = StepDirection::kMinus;
    } else if (u < p[0] + p[1]) {
      step.directions[j] = StepDirection::kZero;
    } else {
      step.directions[j] = StepDirection::kPlus;
    }
  }
  return step;
}

void update_confusion(ConfusionTables& tables, const StepVector& step,
                      bool effective) {
  if (step.size() != tables.size()) {
    throw ValidationError("update_confusion: step has " +
                          std::to_string(step.size()) + " entries, tables " +
                          std::to_string(tables.size()));
  }
  for (std::size_t j = 0; j < step.size(); ++j) {
    tables.record(j, step.directions[j], effective);
  }
}

}  // namespace ppba
