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

#ifndef PPBA_ATTACK_HPP_
#define PPBA_ATTACK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppba/losses.hpp"
#include "ppba/projection.hpp"
#include "ppba/sensing.hpp"
#include "ppba/tensor.hpp"
#include "ppba/victim.hpp"

namespace ppba {

struct AttackConfig {
  double epsilon = 5.0;
  Norm norm = Norm::kL2;
  double rho = 0.01;
  // Measurement dimension; 0 selects default_measurement_dim(shape).
  std::size_t m = 0;
  std::size_t max_queries = 2000;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t resolved_m(const TensorShape& shape) const;
};

// epsilon defaults per norm: 5 for l2, 0.05 for linf.
AttackConfig default_attack_config(Norm norm);

// Trace of one attack.
//
// Query 1 is always the clean image, which fixes original_label; each later
// query evaluates one candidate. per_query_loss[q] is the loss of the q-th
// evaluated image and per_query_accepted[q] tells whether the attack moved
// to it (always false for the clean query).
struct AttackRecord {
  // Set by campaigns; empty for standalone attacks.
  std::string image_id;
  bool success = false;
  std::size_t queries_used = 0;
  std::vector<double> per_query_loss;
  std::vector<bool> per_query_accepted;
  double final_l2 = 0.0;
  double final_linf = 0.0;
  std::optional<std::size_t> adversarial_label;
  std::size_t original_label = 0;
  // Final measurement vector z (empty for image-space methods).
  std::vector<double> measurement;
  // Final perturbation delta before clipping to the image box.
  Tensor perturbation;
  // Set when the victim failed mid-attack; the trace is partial.
  std::optional<std::string> failure;
};

// Called after every search iteration with the 1-based iteration count and
// the current measurement vector.
using StepObserver =
    std::function<void(std::size_t iteration, std::span<const double> z)>;

// Projection & probability-driven random walk over the low-frequency
// measurement space. Each coordinate steps by -rho, 0 or +rho with
// probabilities learned from per-coordinate confusion tables; a candidate
// is accepted only if it strictly lowers the loss. In l2 mode the candidate
// is projected onto the epsilon-ball in z-space (equivalent to image space
// since ||A^T z|| = ||z||). In linf mode z is kept unprojected and the
// evaluated perturbation is project_linf(A^T z, epsilon).
//
// `op` must match x's shape and config.resolved_m. Victim failures do not
// throw; they end the attack with `failure` set.
AttackRecord ppba_attack(Victim& victim, const ImageTensor& x,
                         const SensingOperator& op, const AttackConfig& config,
                         const LossSpec& loss = {},
                         const StepObserver& observer = {});

// Same walk with steps drawn uniformly from {-rho, 0, +rho}.
AttackRecord prba_attack(Victim& victim, const ImageTensor& x,
                         const SensingOperator& op, const AttackConfig& config,
                         const LossSpec& loss = {},
                         const StepObserver& observer = {});

}  // namespace ppba

#endif  // PPBA_ATTACK_HPP_
