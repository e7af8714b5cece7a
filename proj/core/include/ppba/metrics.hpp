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

#ifndef PPBA_METRICS_HPP_
#define PPBA_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ppba/attack.hpp"

namespace ppba {

// The two fields of a record that the summary metrics depend on.
struct AttackOutcome {
  bool success = false;
  std::size_t queries_used = 0;
};

std::vector<AttackOutcome> outcomes_of(std::span<const AttackRecord> records);

// Budget-level summary of a campaign.
//
//   asr                 successes / n
//   avg_queries_success mean queries over successes; absent if none
//   avg_queries_all     mean over all records, failures counted at max_queries
//   auc                 sum_{q=1..max_queries} SR(q), SR(q) = fraction of
//                       records that succeeded within q queries
struct MetricsSummary {
  double asr = 0.0;
  std::optional<double> avg_queries_success;
  double avg_queries_all = 0.0;
  double auc = 0.0;
  std::size_t n_samples = 0;

  friend bool operator==(const MetricsSummary&, const MetricsSummary&) = default;
};

// Throws ValidationError on empty input or max_queries == 0.
MetricsSummary compute_metrics(std::span<const AttackOutcome> outcomes,
                               std::size_t max_queries);
MetricsSummary compute_metrics(std::span<const AttackRecord> records,
                               std::size_t max_queries);

// SR(q) for q = 1..max_queries (index q-1).
std::vector<double> success_curve(std::span<const AttackOutcome> outcomes,
                                  std::size_t max_queries);

struct RatePoint {
  std::size_t query = 0;
  double rate = 0.0;
};

// Fraction of accepted queries among queries q-window+1..q of every record
// still running at query q (queries_used >= q), for q = 2..max queries_used.
// The clean-image query is not a step and never enters a window.
std::vector<RatePoint> step_effective_rate(std::span<const AttackRecord> records,
                                           std::size_t window);

// One-sided exact sign test: P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
// Ties are expected to have been dropped by the caller.
double sign_test_p_value(std::size_t wins, std::size_t losses);

}  // namespace ppba

#endif  // PPBA_METRICS_HPP_
