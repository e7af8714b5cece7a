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

#ifndef PPBA_SRC_QUERY_EVALUATOR_HPP_
#define PPBA_SRC_QUERY_EVALUATOR_HPP_

#include <optional>
#include <span>
#include <vector>

#include "ppba/attack.hpp"
#include "ppba/errors.hpp"
#include "ppba/losses.hpp"

namespace ppba::detail {

// Shared query bookkeeping for the measurement-space attacks: turns z into
// the evaluated image, queries the victim, and appends to the trace.
class QueryEvaluator {
 public:
  struct Result {
    double loss = 0.0;
    bool success = false;
    std::size_t label = 0;
  };

  QueryEvaluator(Victim& victim, const ImageTensor& x, const SensingOperator* op,
                 const AttackConfig& config, const LossSpec& loss);

  // Queries the clean image and binds the objective. Returns its result.
  Result start();

  // Queries x + delta(z); `accepted` is filled in later via mark_accepted().
  Result evaluate(std::span<const double> z);
  // Queries an explicit image-space perturbation.
  Result evaluate_delta(const Tensor& delta);
  void mark_accepted() { record_.per_query_accepted.back() = true; }

  bool exhausted() const {
    return record_.queries_used >= config_.max_queries + 1;
  }
  std::size_t remaining() const {
    return config_.max_queries + 1 - record_.queries_used;
  }

  // Perturbation evaluated for z: A^T z (l2) or project_linf(A^T z) (linf).
  Tensor delta_for(std::span<const double> z) const;

  // Fills final norms and labels from the state last accepted.
  AttackRecord finish(std::vector<double> z, const Tensor& delta, bool success,
                      std::optional<std::size_t> label);
  AttackRecord fail(const VictimError& e, std::vector<double> z,
                    const Tensor& delta);

  const Objective& objective() const { return *objective_; }
  AttackRecord& record() { return record_; }

 private:
  Result query(const ImageTensor& image);

  Victim& victim_;
  const ImageTensor& x_;
  const SensingOperator* op_;
  AttackConfig config_;
  LossSpec loss_;
  std::optional<Objective> objective_;
  AttackRecord record_;
};

}  // namespace ppba::detail

#endif  // PPBA_SRC_QUERY_EVALUATOR_HPP_
