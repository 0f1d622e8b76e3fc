/*
 * Copyright 2026 The memfair authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "memfair/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>

#include "memfair/errors.hpp"
#include "memfair/gaps.hpp"
#include "memfair/population.hpp"

namespace memfair {
namespace {

Scenario symmetric_scenario() {
  Scenario s;
  s.joint.K = 2;
  s.joint.p_plus = {0.25, 0.25};
  s.joint.p_minus = {0.25, 0.25};
  s.base.C_plus = {{0.4, 0.6}, {0.4, 0.6}};
  s.base.C_minus = {{0.6, 0.4}, {0.6, 0.4}};
  s.base.phi_plus = Vec{0.4, 0.6};
  s.base.phi_minus = Vec{0.6, 0.4};
  s.memo = MemorizedComposition{0.3, {0.5, 0.5}, {0.25, 0.25}};
  return s;
}

Scenario mixed_scenario() {
  Scenario s;
  s.joint.K = 2;
  s.joint.p_plus = {0.3, 0.2};
  s.joint.p_minus = {0.2, 0.3};
  s.base.C_plus = {{0.8, 0.2}, {0.3, 0.7}};
  s.base.C_minus = {{0.8, 0.2}, {0.3, 0.7}};
  s.memo = MemorizedComposition{0.2, {0.5, 0.5}, {0.4, 0.1}};
  return s;
}

Scenario balanced_odds_scenario() {
  Scenario s;
  s.joint.K = 2;
  s.joint.p_plus = {0.3, 0.2};
  s.joint.p_minus = {0.2, 0.3};
  s.base.C_plus = {{0.8, 0.2}, {0.3, 0.7}};
  s.base.C_minus = {{0.9, 0.1}, {0.4, 0.6}};
  s.memo = MemorizedComposition{
      0.76,
      {0.56578947368421051, 0.43421052631578949},
      {0.35526315789473684, 0.15789473684210525}};
  return s;
}

TEST(CounterRng, FinalizerGoldenValues) {
  // Frozen: the finalizer applied to the standard increment sequence from a
  // zero seed. These match the widely published reference outputs.
  EXPECT_EQ(sim::mix64(0), 0u);
  EXPECT_EQ(sim::counter_value(0, 0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(sim::counter_value(0, 1), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(sim::counter_value(0, 2), 0x06c45d188009454fULL);
}

TEST(CounterRng, CounterValueIsFinalizedIncrement) {
  const std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
  for (std::uint64_t seed : {0ULL, 42ULL, 0xDEADBEEFULL}) {
    for (std::uint64_t i : {0ULL, 1ULL, 1000ULL}) {
      EXPECT_EQ(sim::counter_value(seed, i),
                sim::mix64(seed + (i + 1) * golden));
    }
  }
}

TEST(CounterRng, UniformTakesTopFiftyThreeBits) {
  for (std::uint64_t i = 0; i < 64; ++i) {
    const double u = sim::counter_uniform(7, i);
    EXPECT_EQ(u, static_cast<double>(sim::counter_value(7, i) >> 11) *
                     0x1.0p-53);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Sample, DeterministicAndComplete) {
  const Scenario s = mixed_scenario();
  sim::SampleCounts a = sim::sample(s, 100000, 99);
  sim::SampleCounts b = sim::sample(s, 100000, 99);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.n, 100000);
  EXPECT_EQ(a.seed, 99u);
  std::int64_t total = 0;
  for (std::int64_t c : a.counts) {
    EXPECT_GE(c, 0);
    total += c;
  }
  EXPECT_EQ(total, 100000);
  // Memorized rows predict the true label with certainty: off-diagonal
  // memorized cells have zero probability and must stay empty.
  for (int aa = 0; aa < 2; ++aa)
    for (int y = 0; y < 2; ++y)
      for (int yhat = 0; yhat < 2; ++yhat) {
        if (yhat != y) {
          EXPECT_EQ(a.at(aa, y, 1, yhat), 0);
        }
      }
}

TEST(Sample, FrequenciesTrackTheJointTable) {
  const Scenario s = balanced_odds_scenario();
  const std::int64_t n = 200000;
  sim::SampleCounts counts = sim::sample(s, n, 7);
  JointDistribution jt = joint_table(s);
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) {
      for (int d = 0; d < 2; ++d) {
        for (int yhat = 0; yhat < 2; ++yhat) {
          const double p = jt.at(a, y, d, yhat);
          const double phat =
              static_cast<double>(counts.at(a, y, d, yhat)) / n;
          const double band =
              5.0 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / n);
          EXPECT_NEAR(phat, p, band + 1e-9)
              << "cell (" << a << "," << y << "," << d << "," << yhat << ")";
        }
      }
    }
  }
}

TEST(Sample, DifferentSeedsDiffer) {
  const Scenario s = mixed_scenario();
  sim::SampleCounts a = sim::sample(s, 50000, 1);
  sim::SampleCounts b = sim::sample(s, 50000, 2);
  EXPECT_NE(a.counts, b.counts);
}

TEST(Sample, RejectsNegativeCountAndInvalidScenario) {
  const Scenario s = mixed_scenario();
  EXPECT_THROW(sim::sample(s, -1, 0), Error);
  Scenario bad = mixed_scenario();
  bad.memo.p_D = 0.9;  // memorized plus mass 0.36 overshoots the 0.3 cell
  EXPECT_THROW(sim::sample(bad, 100, 0), ScenarioInvalid);
}

TEST(Empirical, ExactExpectationCountsReproduceClosedForm) {
  // Every cell probability of this scenario is a multiple of 1/500000, so the
  // expectation itself is an integer count vector; the plug-in estimator on it
  // must reproduce the closed-form gaps to rounding error.
  const Scenario s = balanced_odds_scenario();
  const std::int64_t n = 500000;
  JointDistribution jt = joint_table(s);
  sim::SampleCounts counts;
  counts.K = 2;
  counts.n = n;
  counts.seed = 0;
  counts.counts.assign(16, 0);
  for (int a = 0; a < 2; ++a)
    for (int y = 0; y < 2; ++y)
      for (int d = 0; d < 2; ++d)
        for (int yhat = 0; yhat < 2; ++yhat)
          counts.at(a, y, d, yhat) =
              std::llround(jt.at(a, y, d, yhat) * static_cast<double>(n));
  std::int64_t total = 0;
  for (std::int64_t c : counts.counts) total += c;
  ASSERT_EQ(total, n);

  sim::EmpiricalGapReport emp = sim::empirical_gaps(counts);
  EXPECT_FALSE(emp.any_missing());
  EXPECT_EQ(emp.gaps.method, GapMethod::Empirical);
  GapReport closed = closed_form_gaps(s);
  for (int yhat = 0; yhat < 2; ++yhat) {
    EXPECT_NEAR(emp.gaps.sp[yhat], closed.sp[yhat], 1e-12);
    EXPECT_GT(emp.sp_se[yhat], 0.0);
  }
  for (int y = 0; y < 2; ++y) {
    EXPECT_NEAR(emp.gaps.eqopp[y], closed.eqopp[y], 1e-12);
    for (int yhat = 0; yhat < 2; ++yhat)
      EXPECT_NEAR(emp.gaps.eqodds[y][yhat], closed.eqodds[y][yhat], 1e-12);
  }

  sim::McReport mc = sim::mc_compare(closed, emp, 5.0);
  EXPECT_TRUE(mc.pass);
  EXPECT_EQ(mc.checked, 8);  // K sp + K eqopp + K*K eqodds entries
  EXPECT_EQ(mc.failed, 0);
}

TEST(Empirical, EmptyConditioningSliceIsFlaggedMissing) {
  const Scenario s = balanced_odds_scenario();
  const std::int64_t n = 500000;
  JointDistribution jt = joint_table(s);
  sim::SampleCounts counts;
  counts.K = 2;
  counts.seed = 0;
  counts.counts.assign(16, 0);
  for (int a = 0; a < 2; ++a)
    for (int y = 0; y < 2; ++y)
      for (int d = 0; d < 2; ++d)
        for (int yhat = 0; yhat < 2; ++yhat)
          counts.at(a, y, d, yhat) =
              std::llround(jt.at(a, y, d, yhat) * static_cast<double>(n));
  // Empty the (a=1, y=0) slice: the label-0 conditionals for that group are
  // then undefined.
  for (int d = 0; d < 2; ++d)
    for (int yhat = 0; yhat < 2; ++yhat) counts.at(1, 0, d, yhat) = 0;
  std::int64_t total = 0;
  for (std::int64_t c : counts.counts) total += c;
  counts.n = total;

  sim::EmpiricalGapReport emp = sim::empirical_gaps(counts);
  EXPECT_TRUE(emp.any_missing());
  EXPECT_TRUE(emp.eqopp_missing[0]);
  EXPECT_TRUE(emp.eqodds_missing[0][0]);
  EXPECT_TRUE(emp.eqodds_missing[0][1]);
  EXPECT_FALSE(emp.eqopp_missing[1]);

  // Missing entries verify nothing, so the comparison must fail them.
  sim::McReport mc = sim::mc_compare(closed_form_gaps(s), emp, 5.0);
  EXPECT_FALSE(mc.pass);
  EXPECT_GE(mc.failed, 3);
  bool found_missing_entry = false;
  for (const sim::McEntry& e : mc.entries)
    if (e.missing && !e.pass) found_missing_entry = true;
  EXPECT_TRUE(found_missing_entry);
}

TEST(McVerify, PassesOnWorkedScenariosAndIsReproducible) {
  const Scenario scenarios[] = {symmetric_scenario(), mixed_scenario(),
                                balanced_odds_scenario()};
  const std::uint64_t seeds[] = {11, 22, 33};
  for (int i = 0; i < 3; ++i) {
    sim::McReport first = sim::mc_verify(scenarios[i], 1000000, seeds[i], 5.0);
    EXPECT_TRUE(first.pass) << "scenario " << i;
    EXPECT_EQ(first.checked, 8);
    EXPECT_EQ(first.failed, 0);
    EXPECT_EQ(first.n, 1000000);
    EXPECT_EQ(first.seed, seeds[i]);
    EXPECT_EQ(first.z, 5.0);

    sim::McReport second = sim::mc_verify(scenarios[i], 1000000, seeds[i], 5.0);
    ASSERT_EQ(first.entries.size(), second.entries.size());
    for (size_t k = 0; k < first.entries.size(); ++k) {
      // Bitwise reproducibility, not just approximate agreement.
      EXPECT_EQ(first.entries[k].empirical, second.entries[k].empirical);
      EXPECT_EQ(first.entries[k].se, second.entries[k].se);
      EXPECT_EQ(first.entries[k].closed, second.entries[k].closed);
      EXPECT_EQ(first.entries[k].pass, second.entries[k].pass);
    }
  }
}

TEST(McCompare, FailsACorruptedClosedForm) {
  const Scenario s = balanced_odds_scenario();
  const std::int64_t n = 500000;
  JointDistribution jt = joint_table(s);
  sim::SampleCounts counts;
  counts.K = 2;
  counts.n = n;
  counts.seed = 0;
  counts.counts.assign(16, 0);
  for (int a = 0; a < 2; ++a)
    for (int y = 0; y < 2; ++y)
      for (int d = 0; d < 2; ++d)
        for (int yhat = 0; yhat < 2; ++yhat)
          counts.at(a, y, d, yhat) =
              std::llround(jt.at(a, y, d, yhat) * static_cast<double>(n));
  sim::EmpiricalGapReport emp = sim::empirical_gaps(counts);

  GapReport corrupted = closed_form_gaps(s);
  corrupted.sp[0] += 0.01;
  sim::McReport mc = sim::mc_compare(corrupted, emp, 5.0);
  EXPECT_FALSE(mc.pass);
  EXPECT_EQ(mc.failed, 1);
  bool found = false;
  for (const sim::McEntry& e : mc.entries) {
    if (e.metric == "sp" && e.yhat == 0) {
      EXPECT_FALSE(e.pass);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

}  // namespace
}  // namespace memfair
