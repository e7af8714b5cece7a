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

#ifndef PPBA_TESTS_FAKE_VICTIMS_HPP_
#define PPBA_TESTS_FAKE_VICTIMS_HPP_

#include <cstddef>
#include <vector>

#include "ppba/errors.hpp"
#include "ppba/victim.hpp"

namespace ppba::testing {

// Ignores its input.
class ConstantVictim final : public Victim {
 public:
  ConstantVictim(TensorShape shape, std::vector<double> scores)
      : shape_(shape), scores_(std::move(scores)) {}

  std::vector<double> predict(const ImageTensor&) override { return scores_; }
  std::size_t num_classes() const override { return scores_.size(); }
  TensorShape input_shape() const override { return shape_; }

 private:
  TensorShape shape_;
  std::vector<double> scores_;
};

// Delegates to another victim and fails from the `fail_at`-th call on.
class FlakyVictim final : public Victim {
 public:
  FlakyVictim(Victim& inner, std::size_t fail_at) : inner_(inner), fail_at_(fail_at) {}

  std::vector<double> predict(const ImageTensor& x) override {
    if (++calls_ >= fail_at_) {
      throw VictimError(VictimError::Kind::kTransport, "connection reset");
    }
    return inner_.predict(x);
  }
  std::size_t num_classes() const override { return inner_.num_classes(); }
  TensorShape input_shape() const override { return inner_.input_shape(); }
  std::size_t calls() const { return calls_; }

 private:
  Victim& inner_;
  std::size_t fail_at_;
  std::size_t calls_ = 0;
};

}  // namespace ppba::testing

#endif  // PPBA_TESTS_FAKE_VICTIMS_HPP_
