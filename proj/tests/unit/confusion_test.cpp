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

#include <array>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "ppba/confusion.hpp"
#include "ppba/errors.hpp"
#include "ppba/rng.hpp"

namespace ppba {
namespace {

constexpr StepDirection kMinus = StepDirection::kMinus;
constexpr StepDirection kZero = StepDirection::kZero;
constexpr StepDirection kPlus = StepDirection::kPlus;

void bump(ConfusionTables& t, std::size_t j, StepDirection d, bool effective,
          int times) {
  for (int i = 0; i < times; ++i) t.record(j, d, effective);
}

TEST(Confusion, InitialCountersAreOne) {
  const ConfusionTables t(4);
  for (std::size_t j = 0; j < 4; ++j) {
    for (auto d : {kMinus, kZero, kPlus}) {
      EXPECT_EQ(t.effective(j, d), 1u);
      EXPECT_EQ(t.ineffective(j, d), 1u);
    }
    EXPECT_EQ(t.total(j), 6u);
  }
}

TEST(Confusion, UniformAtInit) {
  const ConfusionTables t(1);
  const auto p = step_probabilities(t, 0);
  for (double v : p) EXPECT_EQ(v, 1.0 / 3.0);
}

TEST(Confusion, WorkedExamples) {
  ConfusionTables a(1);
  bump(a, 0, kPlus, true, 2);  // e = (1,1,3), i = (1,1,1)
  const auto pa = step_probabilities(a, 0);
  EXPECT_NEAR(pa[0], 2.0 / 7.0, 1e-15);
  EXPECT_NEAR(pa[1], 2.0 / 7.0, 1e-15);
  EXPECT_NEAR(pa[2], 3.0 / 7.0, 1e-15);

  ConfusionTables b(1);
  bump(b, 0, kMinus, true, 4);  // e = (5,1,1)
  const auto pb = step_probabilities(b, 0);
  EXPECT_NEAR(pb[0], 5.0 / 11.0, 1e-15);
  EXPECT_NEAR(pb[1], 3.0 / 11.0, 1e-15);
  EXPECT_NEAR(pb[2], 3.0 / 11.0, 1e-15);
}

TEST(Confusion, EffectiveUpdateTouchesOnlyChosenColumn) {
  ConfusionTables t(3);
  StepVector step{{kPlus, kZero, kMinus}, 0.01};
  update_confusion(t, step, true);
  EXPECT_EQ(t.effective(0, kPlus), 2u);
  EXPECT_EQ(t.effective(0, kZero), 1u);
  EXPECT_EQ(t.effective(0, kMinus), 1u);
  for (auto d : {kMinus, kZero, kPlus}) EXPECT_EQ(t.ineffective(0, d), 1u);
  EXPECT_EQ(t.effective(1, kZero), 2u);
  EXPECT_EQ(t.effective(2, kMinus), 2u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(t.total(j), 7u);
}

TEST(Confusion, IneffectiveZeroStepBumpsEveryZeroColumn) {
  ConfusionTables t(5);
  StepVector step{std::vector<StepDirection>(5, kZero), 0.01};
  update_confusion(t, step, false);
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_EQ(t.ineffective(j, kZero), 2u);
    EXPECT_EQ(t.effective(j, kZero), 1u);
  }
  StepVector wrong{std::vector<StepDirection>(4, kZero), 0.01};
  EXPECT_THROW(update_confusion(t, wrong, true), ValidationError);
}

TEST(Confusion, CountersSumToSixPlusT) {
  ConfusionTables t(6);
  Rng rng(3);
  for (int q = 1; q <= 200; ++q) {
    const auto step = sample_step(t, 0.01, rng);
    update_confusion(t, step, rng.uniform() < 0.3);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(t.total(j), 6u + q);
  }
}

TEST(Confusion, ProbabilitiesNormalizedAndInterior) {
  ConfusionTables t(1);
  Rng rng(4);
  for (int q = 0; q < 500; ++q) {
    t.record(0, static_cast<StepDirection>(static_cast<int>(rng.below(3)) - 1),
             rng.uniform() < 0.5);
    const auto p = step_probabilities(t, 0);
    EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
    for (double v : p) {
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(SampleStep, ValuesAreQuantized) {
  const ConfusionTables t(100);
  Rng rng(5);
  const auto step = sample_step(t, 0.01, rng);
  const std::set<double> allowed{-0.01, 0.0, 0.01};
  for (double v : step.values()) EXPECT_TRUE(allowed.count(v)) << v;
}

TEST(SampleStep, ReproducibleForFixedSeed) {
  const ConfusionTables t(50);
  Rng a(17), b(17);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(sample_step(t, 0.01, a).directions, sample_step(t, 0.01, b).directions);
  }
}

TEST(SampleStep, UniformFrequencies) {
  const ConfusionTables t(1);
  Rng rng(6);
  std::array<int, 3> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[column(sample_step(t, 0.01, rng).directions[0])];
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / 3.0, 0.01);
}

TEST(SampleStep, FavouredPlusDominates) {
  ConfusionTables t(1);
  bump(t, 0, kPlus, true, 99);  // e_+ = 100
  // (100/101) / (100/101 + 1/2 + 1/2)
  const double exact = (100.0 / 101.0) / (100.0 / 101.0 + 1.0);
  EXPECT_NEAR(step_probabilities(t, 0)[2], exact, 1e-15);
  Rng rng(7);
  int plus = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) plus += sample_step(t, 0.01, rng).directions[0] == kPlus;
  EXPECT_NEAR(static_cast<double>(plus) / n, exact, 0.01);
}

TEST(Rng, DeriveSeparatesStreams) {
  EXPECT_NE(Rng::derive(1, 0), Rng::derive(1, 1));
  EXPECT_NE(Rng::derive(1, 0), Rng::derive(2, 0));
  EXPECT_EQ(Rng::derive(5, 9), Rng::derive(5, 9));
}

TEST(Rng, UniformRangeAndBelow) {
  Rng rng(8);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.below(7), 7u);
  }
}

TEST(Rng, NormalMoments) {
  Rng rng(9);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

}  // namespace
}  // namespace ppba
