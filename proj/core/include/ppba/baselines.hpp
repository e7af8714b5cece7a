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

#ifndef PPBA_BASELINES_HPP_
#define PPBA_BASELINES_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ppba/attack.hpp"
#include "ppba/rng.hpp"

namespace ppba {

// Antithetic NES in measurement space. Zero-valued fields are filled in by
// resolve(): sigma = 0.1 * rho * sqrt(m), step_norm = rho * sqrt(m).
struct NesConfig {
  std::size_t samples_per_iter = 20;  // even: samples come in +/- pairs
  double sigma = 0.0;
  // Gradient step z -= lr * g. When lr == 0 the step is instead normalized to
  // l2 length step_norm.
  double lr = 0.0;
  double step_norm = 0.0;

  void validate() const;
  NesConfig resolve(double rho, std::size_t m) const;
};

using ZLoss = std::function<double(std::span<const double> z)>;

// g = sum_i L(z + sigma u_i) u_i / (n sigma) over n/2 antithetic pairs
// (u, -u) with u ~ N(0, I). Costs exactly n loss evaluations.
std::vector<double> nes_gradient(const ZLoss& loss, std::span<const double> z,
                                 std::size_t samples, double sigma, Rng& rng);

struct NesResult {
  std::vector<double> z;
  double loss = 0.0;
  std::size_t evaluations = 0;
};

struct NesHooks {
  // Applied to every iterate after the gradient step.
  std::function<void(std::vector<double>& z)> project;
  // Checked after every batch of evaluations.
  std::function<bool()> should_stop;
  // Sees each new iterate and its loss.
  std::function<void(std::span<const double> z, double loss)> on_iterate;
};

// Gradient-estimate descent from z0 whose loss is already known. Each
// iteration spends samples_per_iter + 1 evaluations and the loop stops
// before it would exceed max_evaluations. `nes` must be resolved.
NesResult nes_minimize(const ZLoss& loss, std::vector<double> z0,
                       double initial_loss, const NesConfig& nes,
                       std::size_t max_evaluations, Rng& rng,
                       const NesHooks& hooks = {});

// NES driven through the sensing operator: samples and steps live in
// z-space, each loss evaluation is one victim query. In l2 mode every
// evaluated point is projected onto the epsilon-ball first.
AttackRecord nes_projected_attack(Victim& victim, const ImageTensor& x,
                                  const SensingOperator& op,
                                  const AttackConfig& config,
                                  const NesConfig& nes = {},
                                  const LossSpec& loss = {});

// Coordinate walk over the m selected DCT directions: each epoch visits a
// fresh random permutation and tries z + rho e_j, then z - rho e_j, keeping
// the first strict descent.
AttackRecord simba_attack(Victim& victim, const ImageTensor& x,
                          const SensingOperator& op, const AttackConfig& config,
                          const LossSpec& loss = {});

struct BimConfig {
  double step_size = 0.1;
  std::size_t iterations = 200;
  double epsilon = 5.0;
  Norm norm = Norm::kL2;
  bool use_projection = false;

  void validate() const;
};

// White-box iterative gradient attack on the C&W loss. l2 steps follow the
// normalized gradient, linf steps its sign. With use_projection the image
// gradient g is mapped to g_z = A g, the step is taken on z and the
// perturbation is A^T z; otherwise the step is taken on the image directly.
// The norm ball and the image box are enforced after every step, and the
// attack stops at the first misclassified iterate. Every forward evaluation
// counts as a query.
AttackRecord bim_whitebox(GradientVictim& victim, const ImageTensor& x,
                          const BimConfig& config,
                          const SensingOperator* op = nullptr);
// Rejects victims without gradients.
AttackRecord bim_whitebox(Victim& victim, const ImageTensor& x,
                          const BimConfig& config,
                          const SensingOperator* op = nullptr);

}  // namespace ppba

#endif  // PPBA_BASELINES_HPP_
