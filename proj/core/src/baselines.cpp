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

#include "ppba/baselines.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ppba/errors.hpp"
#include "query_evaluator.hpp"

namespace ppba {

void NesConfig::validate() const {
  if (samples_per_iter == 0 || samples_per_iter % 2 != 0) {
    throw ValidationError("NES samples_per_iter must be a positive even number");
  }
  if (sigma < 0.0 || lr < 0.0 || step_norm < 0.0) {
    throw ValidationError("NES sigma, lr and step_norm must be non-negative");
  }
}

NesConfig NesConfig::resolve(double rho, std::size_t m) const {
  validate();
  NesConfig out = *this;
  const double root_m = std::sqrt(static_cast<double>(m));
  if (out.sigma == 0.0) out.sigma = 0.1 * rho * root_m;
  if (out.step_norm == 0.0) out.step_norm = rho * root_m;
  return out;
}

std::vector<double> nes_gradient(const ZLoss& loss, std::span<const double> z,
                                 std::size_t samples, double sigma, Rng& rng) {
  if (samples == 0 || samples % 2 != 0) {
    throw ValidationError("NES needs a positive even sample count");
  }
  if (!(sigma > 0.0)) throw ValidationError("NES sigma must be positive");
  const std::size_t m = z.size();
  std::vector<double> grad(m, 0.0);
  std::vector<double> u(m);
  std::vector<double> probe(m);
  for (std::size_t pair = 0; pair < samples / 2; ++pair) {
    for (double& v : u) v = rng.normal();
    for (double sign : {1.0, -1.0}) {
      for (std::size_t j = 0; j < m; ++j) probe[j] = z[j] + sign * sigma * u[j];
      const double value = loss(probe);
      for (std::size_t j = 0; j < m; ++j) grad[j] += sign * value * u[j];
    }
  }
  const double scale = 1.0 / (static_cast<double>(samples) * sigma);
  for (double& g : grad) g *= scale;
  return grad;
}

NesResult nes_minimize(const ZLoss& loss, std::vector<double> z0,
                       double initial_loss, const NesConfig& nes,
                       std::size_t max_evaluations, Rng& rng,
                       const NesHooks& hooks) {
  nes.validate();
  NesResult result{std::move(z0), initial_loss, 0};
  const std::size_t per_iter = nes.samples_per_iter + 1;
  while (result.evaluations + per_iter <= max_evaluations) {
    if (hooks.should_stop && hooks.should_stop()) break;
    const auto grad =
        nes_gradient(loss, result.z, nes.samples_per_iter, nes.sigma, rng);
    result.evaluations += nes.samples_per_iter;
    if (hooks.should_stop && hooks.should_stop()) break;

    double scale = nes.lr;
    if (scale == 0.0) {
      const double norm = l2_norm(grad);
      if (norm == 0.0) continue;
      scale = nes.step_norm / norm;
    }
    for (std::size_t j = 0; j < grad.size(); ++j) result.z[j] -= scale * grad[j];
    if (hooks.project) hooks.project(result.z);
    result.loss = loss(result.z);
    ++result.evaluations;
    if (hooks.on_iterate) hooks.on_iterate(result.z, result.loss);
  }
  return result;
}

namespace {

void check_operator(const SensingOperator& op, const ImageTensor& x,
                    const AttackConfig& config) {
  const std::size_t m = config.resolved_m(x.shape());
  if (op.measurement_dim() != m) {
    throw ValidationError("sensing operator has m=" +
                          std::to_string(op.measurement_dim()) +
                          " but the attack is configured for m=" +
                          std::to_string(m));
  }
}

// In-place Fisher-Yates on rng.below so orders are portable.
void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

}  // namespace

AttackRecord nes_projected_attack(Victim& victim, const ImageTensor& x,
                                  const SensingOperator& op,
                                  const AttackConfig& config,
                                  const NesConfig& nes, const LossSpec& loss) {
  check_operator(op, x, config);
  const std::size_t m = op.measurement_dim();
  const NesConfig resolved = nes.resolve(config.rho, m);
  detail::QueryEvaluator eval(victim, x, &op, config, loss);
  Rng rng(config.seed);

  std::vector<double> z(m, 0.0);
  bool found = false;
  std::vector<double> found_z;
  std::size_t found_label = 0;
  auto project = [&](std::vector<double>& v) {
    if (config.norm == Norm::kL2) v = project_l2(v, config.epsilon);
  };

  try {
    const auto clean = eval.start();
    if (clean.success) return eval.finish(z, eval.delta_for(z), true, clean.label);

    const ZLoss query_loss = [&](std::span<const double> point) {
      std::vector<double> p(point.begin(), point.end());
      project(p);
      const auto r = eval.evaluate(p);
      if (r.success && !found) {
        found = true;
        found_z = std::move(p);
        found_label = r.label;
      }
      return r.loss;
    };
    double previous = clean.loss;
    NesHooks hooks;
    hooks.project = project;
    hooks.should_stop = [&] { return found; };
    hooks.on_iterate = [&](std::span<const double>, double value) {
      if (value < previous) eval.mark_accepted();
      previous = value;
    };
    auto result = nes_minimize(query_loss, z, clean.loss, resolved,
                               eval.remaining(), rng, hooks);
    if (found) {
      return eval.finish(found_z, eval.delta_for(found_z), true, found_label);
    }
    z = std::move(result.z);
    return eval.finish(z, eval.delta_for(z), false, std::nullopt);
  } catch (const VictimError& e) {
    return eval.fail(e, z, eval.delta_for(z));
  }
}

AttackRecord simba_attack(Victim& victim, const ImageTensor& x,
                          const SensingOperator& op, const AttackConfig& config,
                          const LossSpec& loss) {
  check_operator(op, x, config);
  const std::size_t m = op.measurement_dim();
  detail::QueryEvaluator eval(victim, x, &op, config, loss);
  Rng rng(config.seed);
  std::vector<double> z(m, 0.0);
  std::vector<std::size_t> order(m);

  try {
    auto current = eval.start();
    while (!current.success && !eval.exhausted()) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      shuffle(order, rng);
      for (std::size_t j : order) {
        if (current.success || eval.exhausted()) break;
        for (double sign : {1.0, -1.0}) {
          if (eval.exhausted()) break;
          std::vector<double> candidate(z);
          candidate[j] += sign * config.rho;
          if (config.norm == Norm::kL2) {
            candidate = project_l2(candidate, config.epsilon);
          }
          const auto r = eval.evaluate(candidate);
          if (r.loss < current.loss) {
            z = std::move(candidate);
            current = r;
            eval.mark_accepted();
            break;
          }
        }
      }
    }
    return eval.finish(z, eval.delta_for(z), current.success, current.label);
  } catch (const VictimError& e) {
    return eval.fail(e, z, eval.delta_for(z));
  }
}

void BimConfig::validate() const {
  if (!(step_size > 0.0)) throw ValidationError("BIM step_size must be positive");
  if (iterations < 1) throw ValidationError("BIM iterations must be >= 1");
  if (!(epsilon > 0.0)) throw ValidationError("BIM epsilon must be positive");
}

namespace {

// Unit-l2 direction for l2 steps, sign vector for linf steps.
std::vector<double> step_direction(std::span<const double> g, Norm norm) {
  std::vector<double> dir(g.begin(), g.end());
  if (norm == Norm::kLinf) {
    for (double& v : dir) v = static_cast<double>((v > 0.0) - (v < 0.0));
    return dir;
  }
  const double n = l2_norm(g);
  if (n > 0.0) {
    for (double& v : dir) v /= n;
  }
  return dir;
}

}  // namespace

AttackRecord bim_whitebox(GradientVictim& victim, const ImageTensor& x,
                          const BimConfig& config, const SensingOperator* op) {
  config.validate();
  if (config.use_projection && op == nullptr) {
    throw ValidationError("projected BIM needs a sensing operator");
  }
  AttackConfig budget;
  budget.epsilon = config.epsilon;
  budget.norm = config.norm;
  budget.max_queries = config.iterations;
  detail::QueryEvaluator eval(victim, x, op, budget, {});

  std::vector<double> z(config.use_projection ? op->measurement_dim() : 0, 0.0);
  Tensor delta(x.shape());
  try {
    auto current = eval.start();
    const std::size_t t = eval.record().original_label;
    for (std::size_t it = 0; it < config.iterations && !current.success; ++it) {
      const Tensor grad = victim.cw_gradient(clip_to_image(x, delta), t);
      if (config.use_projection) {
        const auto dir = step_direction(op->apply_forward(grad), config.norm);
        for (std::size_t j = 0; j < z.size(); ++j) {
          z[j] -= config.step_size * dir[j];
        }
        if (config.norm == Norm::kL2) z = project_l2(z, config.epsilon);
        delta = eval.delta_for(z);
      } else {
        const auto dir = step_direction(grad.values(), config.norm);
        for (std::size_t i = 0; i < delta.size(); ++i) {
          delta[i] -= config.step_size * dir[i];
        }
        delta = config.norm == Norm::kL2
                    ? Tensor(x.shape(), project_l2(delta.values(), config.epsilon))
                    : project_linf(delta, config.epsilon);
        const ImageTensor adv = clip_to_image(x, delta);
        for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = adv[i] - x[i];
      }
      const auto r = eval.evaluate_delta(delta);
      if (r.loss < current.loss) eval.mark_accepted();
      current = r;
    }
    return eval.finish(z, delta, current.success, current.label);
  } catch (const VictimError& e) {
    return eval.fail(e, z, delta);
  }
}

AttackRecord bim_whitebox(Victim& victim, const ImageTensor& x,
                          const BimConfig& config, const SensingOperator* op) {
  auto* with_gradients = dynamic_cast<GradientVictim*>(&victim);
  if (with_gradients == nullptr) {
    throw ValidationError("BIM needs a victim that exposes gradients");
  }
  return bim_whitebox(*with_gradients, x, config, op);
}

}  // namespace ppba
