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

#include "ppba/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ppba/errors.hpp"

namespace ppba {

std::vector<AttackOutcome> outcomes_of(std::span<const AttackRecord> records) {
  std::vector<AttackOutcome> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.success, r.queries_used});
  return out;
}

MetricsSummary compute_metrics(std::span<const AttackOutcome> outcomes,
                               std::size_t max_queries) {
  if (outcomes.empty()) {
    throw ValidationError("metrics need at least one record");
  }
  if (max_queries == 0) throw ValidationError("max_queries must be positive");

  std::size_t successes = 0;
  double success_queries = 0.0;
  double all_queries = 0.0;
  double area = 0.0;  // sum of (max_queries - q + 1) over successes within budget
  for (const auto& o : outcomes) {
    if (o.success) {
      // A success on the last evaluation (clean query + max_queries steps)
      // is charged the budget, like a failure.
      const auto charged = std::min(o.queries_used, max_queries);
      ++successes;
      success_queries += static_cast<double>(charged);
      all_queries += static_cast<double>(charged);
      if (o.queries_used <= max_queries) {
        area += static_cast<double>(max_queries + 1 -
                                    std::max<std::size_t>(o.queries_used, 1));
      }
    } else {
      all_queries += static_cast<double>(max_queries);
    }
  }
  const auto n = static_cast<double>(outcomes.size());
  MetricsSummary s;
  s.n_samples = outcomes.size();
  s.asr = static_cast<double>(successes) / n;
  if (successes > 0) {
    s.avg_queries_success = success_queries / static_cast<double>(successes);
  }
  s.avg_queries_all = all_queries / n;
  s.auc = area / n;
  return s;
}

MetricsSummary compute_metrics(std::span<const AttackRecord> records,
                               std::size_t max_queries) {
  const auto outcomes = outcomes_of(records);
  return compute_metrics(outcomes, max_queries);
}

std::vector<double> success_curve(std::span<const AttackOutcome> outcomes,
                                  std::size_t max_queries) {
  if (outcomes.empty()) {
    throw ValidationError("success curve needs at least one record");
  }
  std::vector<std::size_t> first(max_queries + 2, 0);
  for (const auto& o : outcomes) {
    if (o.success && o.queries_used <= max_queries) {
      ++first[std::max<std::size_t>(o.queries_used, 1)];
    }
  }
  std::vector<double> curve(max_queries);
  std::size_t done = 0;
  for (std::size_t q = 1; q <= max_queries; ++q) {
    done += first[q];
    curve[q - 1] =
        static_cast<double>(done) / static_cast<double>(outcomes.size());
  }
  return curve;
}

std::vector<RatePoint> step_effective_rate(std::span<const AttackRecord> records,
                                           std::size_t window) {
  if (window < 1) throw ValidationError("window must be >= 1");
  std::size_t horizon = 0;
  for (const auto& r : records) horizon = std::max(horizon, r.queries_used);

  std::vector<RatePoint> curve;
  curve.reserve(horizon);
  // Per-query window totals, summed over the records alive at that query.
  std::vector<double> acc_in(horizon + 1, 0.0);
  std::vector<double> cnt_in(horizon + 1, 0.0);
  for (const auto& r : records) {
    const std::size_t n = std::min(r.queries_used, r.per_query_accepted.size());
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t q = 1; q <= n; ++q) {
      prefix[q] = prefix[q - 1] + (r.per_query_accepted[q - 1] ? 1.0 : 0.0);
    }
    // Query 1 is the clean image, not a step.
    for (std::size_t q = 2; q <= n; ++q) {
      const std::size_t lo = std::max<std::size_t>(q >= window ? q - window : 0, 1);
      acc_in[q] += prefix[q] - prefix[lo];
      cnt_in[q] += static_cast<double>(q - lo);
    }
  }
  for (std::size_t q = 1; q <= horizon; ++q) {
    if (cnt_in[q] > 0.0) curve.push_back({q, acc_in[q] / cnt_in[q]});
  }
  return curve;
}

double sign_test_p_value(std::size_t wins, std::size_t losses) {
  const std::size_t n = wins + losses;
  if (n == 0) return 1.0;
  // Sum binomial pmf in log space to stay finite for large n.
  const double log_half_n = static_cast<double>(n) * std::log(0.5);
  double p = 0.0;
  for (std::size_t k = wins; k <= n; ++k) {
    const double log_choose = std::lgamma(static_cast<double>(n) + 1.0) -
                              std::lgamma(static_cast<double>(k) + 1.0) -
                              std::lgamma(static_cast<double>(n - k) + 1.0);
    p += std::exp(log_choose + log_half_n);
  }
  return std::min(p, 1.0);
}

}  // namespace ppba
