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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "ppba/dct.hpp"
#include "ppba/errors.hpp"
#include "support/toy_suite.hpp"

namespace ppba {
namespace {

TEST(Dct, ConstantTwoByTwoHasOnlyDc) {
  const std::vector<double> ones(4, 1.0);
  const auto c = dct2_forward(ones, 2, 2);
  EXPECT_NEAR(c[0], 2.0, 1e-15);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(c[i], 0.0, 1e-15);
}

TEST(Dct, ZerosMapToZeros) {
  const std::vector<double> zeros(12, 0.0);
  for (double v : dct2_forward(zeros, 3, 4)) EXPECT_EQ(v, 0.0);
  for (double v : dct2_inverse(zeros, 3, 4)) EXPECT_EQ(v, 0.0);
}

TEST(Dct, UnitDcIsHalfEverywhereOnTwoByTwo) {
  const std::vector<double> dc{1.0, 0.0, 0.0, 0.0};
  for (double v : dct2_inverse(dc, 2, 2)) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(Dct, ParsevalOnRandomEightByEight) {
  const auto x = testing::random_vector(64, 1);
  const auto c = dct2_forward(x, 8, 8);
  EXPECT_NEAR(l2_norm(c), l2_norm(x), 1e-12);
}

TEST(Dct, RoundTripSixteenBySixteen) {
  const auto x = testing::random_vector(256, 2);
  const auto back = dct2_inverse(dct2_forward(x, 16, 16), 16, 16);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-10);
}

TEST(Dct, RectangularRoundTrip) {
  const auto x = testing::random_vector(5 * 7, 3);
  const auto back = dct2_inverse(dct2_forward(x, 5, 7), 5, 7);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-12);
}

TEST(Dct, BasisMatchesClosedForm) {
  const std::size_t n = 6;
  const auto b = dct_basis(n);
  const double pi = std::acos(-1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(b[k * n + i], scale * std::cos(pi * (2.0 * i + 1.0) * k / (2.0 * n)),
                  1e-14);
    }
  }
}

TEST(Dct, LowpassInverseMatchesFullInverse) {
  const std::size_t h = 9, w = 11, rows = 3, cols = 4;
  Dct2Plan plan(h, w);
  std::vector<double> full(h * w, 0.0);
  std::vector<double> window(rows * cols);
  const auto r = testing::random_vector(rows * cols, 4);
  for (std::size_t u = 0; u < rows; ++u) {
    for (std::size_t v = 0; v < cols; ++v) {
      window[u * cols + v] = r[u * cols + v];
      full[u * w + v] = r[u * cols + v];
    }
  }
  std::vector<double> a(h * w), b(h * w);
  plan.inverse(full, a);
  plan.inverse_lowpass(window, rows, cols, b);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-13);

  std::vector<double> coeffs(h * w), low(rows * cols);
  plan.forward(a, coeffs);
  plan.forward_lowpass(a, rows, cols, low);
  for (std::size_t u = 0; u < rows; ++u) {
    for (std::size_t v = 0; v < cols; ++v) {
      EXPECT_NEAR(low[u * cols + v], coeffs[u * w + v], 1e-13);
    }
  }
}

TEST(Dct, RejectsNonFiniteInput) {
  std::vector<double> x(4, 0.0);
  x[2] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(dct2_forward(x, 2, 2), ValidationError);
  x[2] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(dct2_inverse(x, 2, 2), ValidationError);
}

TEST(Dct, RejectsSizeMismatch) {
  const std::vector<double> x(5, 0.0);
  EXPECT_THROW(dct2_forward(x, 2, 2), ValidationError);
}

}  // namespace
}  // namespace ppba
