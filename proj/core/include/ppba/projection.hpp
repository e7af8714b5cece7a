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

#ifndef PPBA_PROJECTION_HPP_
#define PPBA_PROJECTION_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "ppba/tensor.hpp"

namespace ppba {

enum class Norm { kL2, kLinf };

Norm parse_norm(std::string_view name);
std::string_view norm_name(Norm norm);

// v * min(1, epsilon / ||v||_2).
std::vector<double> project_l2(std::span<const double> v, double epsilon);
// Element-wise clamp to [-epsilon, epsilon].
std::vector<double> project_linf(std::span<const double> v, double epsilon);
Tensor project_linf(const Tensor& delta, double epsilon);

// clamp(x + delta, 0, 1), element-wise.
ImageTensor clip_to_image(const ImageTensor& x, const Tensor& delta);

}  // namespace ppba

#endif  // PPBA_PROJECTION_HPP_
