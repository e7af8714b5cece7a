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

#include "ppba/victim.hpp"

#include <cmath>
#include <string>

#include "ppba/errors.hpp"

namespace ppba {

OutputKind parse_output_kind(std::string_view name) {
  if (name == "probs") return OutputKind::kProbs;
  if (name == "logits") return OutputKind::kLogits;
  throw ValidationError("unknown output kind '" + std::string(name) + "'");
}

std::string_view output_kind_name(OutputKind kind) {
  return kind == OutputKind::kProbs ? "probs" : "logits";
}

void validate_scores(const ScoreVector& s) {
  if (s.scores.size() < 2) {
    throw VictimError(VictimError::Kind::kInvalidScores,
                      "victim returned " + std::to_string(s.scores.size()) +
                          " scores; at least 2 required");
  }
  for (double v : s.scores) {
    if (!std::isfinite(v)) {
      throw VictimError(VictimError::Kind::kInvalidScores,
                        "victim returned a non-finite score");
    }
    if (s.output == OutputKind::kProbs && v < 0.0) {
      throw VictimError(VictimError::Kind::kInvalidScores,
                        "victim returned a negative probability");
    }
  }
}

}  // namespace ppba
