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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "ppba/campaign.hpp"
#include "ppba/errors.hpp"
#include "ppba/metrics.hpp"
#include "ppba/rng.hpp"

namespace ppba {
namespace {

namespace fs = std::filesystem;

AttackRecord record(bool success, std::size_t queries, std::vector<bool> accepted = {}) {
  AttackRecord r;
  r.success = success;
  r.queries_used = queries;
  r.per_query_accepted = accepted.empty() ? std::vector<bool>(queries, false) : accepted;
  r.per_query_loss.assign(queries, 1.0);
  if (success) r.adversarial_label = 1;
  return r;
}

std::vector<bool> pattern(std::size_t queries, bool (*accept)(std::size_t)) {
  std::vector<bool> a(queries, false);
  for (std::size_t q = 2; q <= queries; ++q) a[q - 1] = accept(q);
  return a;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

TEST(Metrics, ThreeRecordExample) {
  const std::vector<AttackOutcome> o{{true, 10}, {true, 20}, {false, 101}};
  const auto s = compute_metrics(o, 100);
  EXPECT_NEAR(s.asr, 2.0 / 3.0, 1e-15);
  ASSERT_TRUE(s.avg_queries_success.has_value());
  EXPECT_NEAR(*s.avg_queries_success, 15.0, 1e-12);
  EXPECT_NEAR(s.avg_queries_all, 130.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.auc, 10.0 / 3.0 + 81.0 * 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(s.auc, 57.33, 0.01);
  EXPECT_EQ(s.n_samples, 3u);
}

TEST(Metrics, SuccessOnLastEvaluationIsChargedTheBudget) {
  const std::vector<AttackOutcome> o{{true, 11}, {false, 11}};
  const auto s = compute_metrics(o, 10);
  EXPECT_EQ(*s.avg_queries_success, 10.0);
  EXPECT_EQ(s.avg_queries_all, 10.0);
  EXPECT_EQ(s.auc, 0.0);
}

TEST(Metrics, AllFailuresAndAllInstant) {
  const std::vector<AttackOutcome> fail{{false, 51}, {false, 51}};
  const auto f = compute_metrics(fail, 50);
  EXPECT_EQ(f.asr, 0.0);
  EXPECT_EQ(f.auc, 0.0);
  EXPECT_FALSE(f.avg_queries_success.has_value());
  EXPECT_EQ(f.avg_queries_all, 50.0);

  const std::vector<AttackOutcome> instant{{true, 1}, {true, 1}, {true, 1}};
  EXPECT_EQ(compute_metrics(instant, 50).auc, 50.0);
}

TEST(Metrics, EmptyRejected) {
  EXPECT_THROW(compute_metrics(std::vector<AttackOutcome>{}, 10), ValidationError);
}

TEST(Metrics, RecordsOverloadAgrees) {
  const std::vector<AttackRecord> rs{record(true, 10), record(true, 20), record(false, 101)};
  const std::vector<AttackOutcome> o{{true, 10}, {true, 20}, {false, 101}};
  EXPECT_EQ(compute_metrics(rs, 100), compute_metrics(o, 100));
}

TEST(Metrics, RandomOutcomesSatisfyInvariants) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t max_q = 1 + rng.below(300);
    const std::size_t n = 1 + rng.below(30);
    std::vector<AttackOutcome> o(n);
    for (auto& x : o) {
      x.success = rng.uniform() < 0.6;
      x.queries_used = x.success ? 1 + rng.below(max_q + 1) : max_q + 1;
    }
    const auto s = compute_metrics(o, max_q);
    EXPECT_LE(s.auc, s.asr * max_q + 1e-9);
    EXPECT_LE(s.auc, static_cast<double>(max_q));
    bool all_instant = true;
    for (const auto& x : o) all_instant &= !x.success || x.queries_used <= 1;
    if (all_instant) {
      EXPECT_NEAR(s.auc, s.asr * max_q, 1e-9);
    } else {
      EXPECT_LT(s.auc, s.asr * max_q);
    }
    if (s.asr < 1.0 && s.avg_queries_success) {
      EXPECT_LE(*s.avg_queries_success, s.avg_queries_all);
    }
    const auto curve = success_curve(o, max_q);
    ASSERT_EQ(curve.size(), max_q);
    for (std::size_t q = 1; q < curve.size(); ++q) EXPECT_LE(curve[q - 1], curve[q]);
  }
}

TEST(StepEffectiveRate, AllAcceptedIsOne) {
  const std::vector<AttackRecord> rs{
      record(false, 30, pattern(30, [](std::size_t) { return true; })),
      record(true, 12, pattern(12, [](std::size_t) { return true; }))};
  const auto curve = step_effective_rate(rs, 5);
  ASSERT_EQ(curve.size(), 29u);
  EXPECT_EQ(curve.front().query, 2u);
  for (const auto& p : curve) EXPECT_EQ(p.rate, 1.0);
}

TEST(StepEffectiveRate, NoneAcceptedIsZero) {
  const std::vector<AttackRecord> rs{record(false, 30)};
  for (const auto& p : step_effective_rate(rs, 7)) EXPECT_EQ(p.rate, 0.0);
}

TEST(StepEffectiveRate, AlternatingWindowTwoIsHalf) {
  const std::vector<AttackRecord> rs{
      record(false, 40, pattern(40, [](std::size_t q) { return q % 2 == 0; }))};
  const auto curve = step_effective_rate(rs, 2);
  for (const auto& p : curve) {
    if (p.query >= 3) EXPECT_EQ(p.rate, 0.5) << p.query;
  }
  EXPECT_THROW(step_effective_rate(rs, 0), ValidationError);
}

TEST(StepEffectiveRate, OnlyRunningRecordsCount) {
  // The short record stops at query 3; afterwards only the long one counts.
  const std::vector<AttackRecord> rs{
      record(true, 3, pattern(3, [](std::size_t) { return true; })),
      record(false, 10)};
  const auto curve = step_effective_rate(rs, 1);
  EXPECT_EQ(curve[0].rate, 0.5);  // q = 2
  EXPECT_EQ(curve[1].rate, 0.5);  // q = 3
  EXPECT_EQ(curve[2].rate, 0.0);  // q = 4
}

TEST(SignTest, KnownValues) {
  EXPECT_NEAR(sign_test_p_value(10, 0), 1.0 / 1024.0, 1e-15);
  EXPECT_NEAR(sign_test_p_value(9, 1), 11.0 / 1024.0, 1e-15);
  EXPECT_NEAR(sign_test_p_value(5, 5), 638.0 / 1024.0, 1e-12);
  EXPECT_EQ(sign_test_p_value(0, 0), 1.0);
  EXPECT_LT(sign_test_p_value(150, 50), 1e-10);
}

class Reports : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "ppba_reports_test";
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(Reports, FilesAndRowCounts) {
  std::vector<AttackRecord> rs{record(true, 10), record(true, 20), record(false, 101)};
  rs[0].image_id = "cat";
  rs[1].image_id = "dog";
  rs[2].image_id = "eel";
  const auto s = compute_metrics(rs, 100);
  emit_reports(rs, s, 100, dir_);
  EXPECT_EQ(count_lines(dir_ / "records.csv"), 1u + 3u);
  EXPECT_EQ(count_lines(dir_ / "curve.csv"), 1u + 100u);
  const std::string header =
      "image_id,success,queries_used,final_l2,final_linf,adversarial_label,"
      "original_label\n";
  EXPECT_EQ(slurp(dir_ / "records.csv").substr(0, header.size()), header);
  EXPECT_TRUE(fs::exists(dir_ / "eff_curve.csv"));
  const auto summary_text = slurp(dir_ / "summary.json");
  EXPECT_NE(summary_text.find("auc_convention"), std::string::npos);
  EXPECT_EQ(summary_from_json(summary_text), s);
}

TEST_F(Reports, RecomputationFromCsvIsByteStable) {
  std::vector<AttackRecord> rs;
  Rng rng(4);
  for (int i = 0; i < 25; ++i) {
    const bool ok = rng.uniform() < 0.7;
    rs.push_back(record(ok, ok ? 1 + rng.below(500) : 501));
    rs.back().image_id = "img" + std::to_string(i);
    rs.back().final_l2 = rng.uniform() * 3;
  }
  const auto s = compute_metrics(rs, 500);
  emit_reports(rs, s, 500, dir_);
  const auto rows = read_records_csv(dir_ / "records.csv");
  ASSERT_EQ(rows.size(), rs.size());
  std::vector<AttackOutcome> o;
  for (const auto& r : rows) o.push_back({r.success, r.queries_used});
  EXPECT_EQ(rows[3].final_l2, rs[3].final_l2);
  EXPECT_EQ(summary_to_json(compute_metrics(o, 500), 500), slurp(dir_ / "summary.json"));
}

TEST_F(Reports, NoSuccessLeavesAverageNull) {
  const std::vector<AttackRecord> rs{record(false, 11)};
  const auto s = compute_metrics(rs, 10);
  const auto text = summary_to_json(s, 10);
  EXPECT_NE(text.find("\"avg_queries_success\": null"), std::string::npos);
  EXPECT_FALSE(summary_from_json(text).avg_queries_success.has_value());
}

TEST_F(Reports, UnwritableDirectoryIsIoError) {
  fs::create_directories(dir_);
  std::ofstream(dir_ / "file") << "x";
  const std::vector<AttackRecord> rs{record(false, 11)};
  EXPECT_THROW(emit_reports(rs, compute_metrics(rs, 10), 10, dir_ / "file" / "sub"), IoError);
}

}  // namespace
}  // namespace ppba
