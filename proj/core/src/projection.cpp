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

#include "ppba/projection.hpp"

#include <algorithm>
#include <string>

#include "ppba/errors.hpp"

namespace ppba {
namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
}

}  // namespace

Norm parse_norm(std::string_view name) {
  if (name == "l2" || name == "L2") return Norm::kL2;
  if (name == "linf" || name == "Linf") return Norm::kLinf;
  throw ValidationError("unknown norm '" + std::string(name) +
                        "' (expected l2 or linf)");
}

std::string_view norm_name(Norm norm) {
  return norm == Norm::kL2 ? "l2" : "linf";
}

std::vector<double> project_l2(std::span<const double> v, double epsilon) {
  check_epsilon(epsilon);
  std::vector<double> out(v.begin(), v.end());
  const double norm = l2_norm(v);
  if (norm > epsilon) {
    const double scale = epsilon / norm;
    for (double& x : out) x *= scale;
  }
  return out;
}

std::vector<double> project_linf(std::span<const double> v, double epsilon) {
  check_epsilon(epsilon);
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(),
                 [&](double x) { return std::clamp(x, -epsilon, epsilon); });
  return out;
}

Tensor project_linf(const Tensor& delta, double epsilon) {
  return Tensor(delta.shape(), project_linf(delta.values(), epsilon));
}

ImageTensor clip_to_image(const ImageTensor& x, const Tensor& delta) {
  if (x.shape() != delta.shape()) {
    throw ValidationError("clip_to_image: image shape " +
                          x.shape().to_string() + " vs perturbation " +
                          delta.shape().to_string());
  }
  ImageTensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::clamp(x[i] + delta[i], 0.0, 1.0);
  }
  return out;
}

}  // namespace ppba
