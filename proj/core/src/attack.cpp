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

#include "ppba/attack.hpp"

#include <limits>
#include <string>

#include "ppba/confusion.hpp"
#include "ppba/errors.hpp"
#include "ppba/rng.hpp"
#include "query_evaluator.hpp"

namespace ppba {

void AttackConfig::validate() const {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (!(rho > 0.0)) throw ValidationError("rho must be positive");
  if (max_queries < 1) throw ValidationError("max_queries must be >= 1");
}

std::size_t AttackConfig::resolved_m(const TensorShape& shape) const {
  return m == 0 ? default_measurement_dim(shape) : m;
}

AttackConfig default_attack_config(Norm norm) {
  AttackConfig config;
  config.norm = norm;
  config.epsilon = norm == Norm::kL2 ? 5.0 : 0.05;
  return config;
}

namespace detail {

QueryEvaluator::QueryEvaluator(Victim& victim, const ImageTensor& x,
                               const SensingOperator* op,
                               const AttackConfig& config, const LossSpec& loss)
    : victim_(victim), x_(x), op_(op), config_(config), loss_(loss) {
  config_.validate();
  if (op_ != nullptr && op_->shape() != x.shape()) {
    throw ValidationError("sensing operator shape " + op_->shape().to_string() +
                          " does not match image " + x.shape().to_string());
  }
  record_.perturbation = Tensor(x.shape());
}

QueryEvaluator::Result QueryEvaluator::query(const ImageTensor& image) {
  ++record_.queries_used;
  record_.per_query_accepted.push_back(false);
  // NaN stays in the trace if predict throws.
  record_.per_query_loss.push_back(std::numeric_limits<double>::quiet_NaN());
  const auto scores = victim_.predict(image);
  if (!objective_) objective_.emplace(loss_, scores);
  const auto value = (*objective_)(scores);
  record_.per_query_loss.back() = value.loss;
  return {value.loss, value.success, argmax(scores)};
}

QueryEvaluator::Result QueryEvaluator::start() {
  const Result r = query(x_);
  record_.original_label = objective_->original_label();
  return r;
}

Tensor QueryEvaluator::delta_for(std::span<const double> z) const {
  Tensor delta = op_->apply_adjoint(z);
  if (config_.norm == Norm::kLinf) delta = project_linf(delta, config_.epsilon);
  return delta;
}

QueryEvaluator::Result QueryEvaluator::evaluate(std::span<const double> z) {
  return query(clip_to_image(x_, delta_for(z)));
}

QueryEvaluator::Result QueryEvaluator::evaluate_delta(const Tensor& delta) {
  return query(clip_to_image(x_, delta));
}

AttackRecord QueryEvaluator::finish(std::vector<double> z, const Tensor& delta,
                                    bool success,
                                    std::optional<std::size_t> label) {
  const ImageTensor adv = clip_to_image(x_, delta);
  std::vector<double> applied(adv.size());
  for (std::size_t i = 0; i < adv.size(); ++i) applied[i] = adv[i] - x_[i];
  record_.final_l2 = l2_norm(applied);
  record_.final_linf = linf_norm(applied);
  record_.success = success;
  record_.adversarial_label = success ? label : std::nullopt;
  record_.measurement = std::move(z);
  record_.perturbation = delta;
  return std::move(record_);
}

AttackRecord QueryEvaluator::fail(const VictimError& e, std::vector<double> z,
                                  const Tensor& delta) {
  AttackRecord r = finish(std::move(z), delta, false, std::nullopt);
  r.failure = e.what();
  return r;
}

}  // namespace detail

namespace {

AttackRecord random_walk(Victim& victim, const ImageTensor& x,
                         const SensingOperator& op, const AttackConfig& config,
                         const LossSpec& loss, const StepObserver& observer,
                         bool learn) {
  const std::size_t m = config.resolved_m(x.shape());
  if (op.measurement_dim() != m) {
    throw ValidationError("sensing operator has m=" +
                          std::to_string(op.measurement_dim()) +
                          " but the attack is configured for m=" +
                          std::to_string(m));
  }
  detail::QueryEvaluator eval(victim, x, &op, config, loss);
  Rng rng(config.seed);
  // Never updated when !learn, so sampling stays uniform.
  ConfusionTables tables(m);
  std::vector<double> z(m, 0.0);
  try {
    auto current = eval.start();
    for (std::size_t iter = 1; !current.success && !eval.exhausted(); ++iter) {
      const StepVector step = sample_step(tables, config.rho, rng);
      std::vector<double> candidate(z);
      for (std::size_t j = 0; j < m; ++j) candidate[j] += step.value(j);
      if (config.norm == Norm::kL2) {
        candidate = project_l2(candidate, config.epsilon);
      }
      const auto result = eval.evaluate(candidate);
      const bool effective = result.loss < current.loss;
      if (effective) {
        z = std::move(candidate);
        current = result;
        eval.mark_accepted();
      }
      if (learn) update_confusion(tables, step, effective);
      if (observer) observer(iter, z);
    }
    return eval.finish(z, eval.delta_for(z), current.success,
                       current.label);
  } catch (const VictimError& e) {
    return eval.fail(e, z, eval.delta_for(z));
  }
}

}  // namespace

AttackRecord ppba_attack(Victim& victim, const ImageTensor& x,
                         const SensingOperator& op, const AttackConfig& config,
                         const LossSpec& loss, const StepObserver& observer) {
  return random_walk(victim, x, op, config, loss, observer, /*learn=*/true);
}

AttackRecord prba_attack(Victim& victim, const ImageTensor& x,
                         const SensingOperator& op, const AttackConfig& config,
                         const LossSpec& loss, const StepObserver& observer) {
  return random_walk(victim, x, op, config, loss, observer, /*learn=*/false);
}

}  // namespace ppba
