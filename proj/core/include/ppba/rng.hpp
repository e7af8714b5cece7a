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

#ifndef PPBA_RNG_HPP_
#define PPBA_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace ppba {

// Reproducible random source.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The distribution layer below is implemented here rather than
// with <random> distributions, whose algorithms are implementation-defined,
// so traces are bit-identical across standard libraries:
//   uniform()  = top 53 bits of one draw scaled by 2^-53, in [0, 1)
//   below(n)   = rejection sampling on a 64-bit draw (unbiased)
//   normal()   = Box-Muller on two uniform() draws, one value per call
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  std::size_t below(std::size_t n);
  double normal();

  // SplitMix64 finalizer over (seed, stream); gives independent seeds for
  // per-image or per-worker generators.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ppba

#endif  // PPBA_RNG_HPP_
