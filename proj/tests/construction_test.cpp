// Copyright 2026 The CMSA-BIP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cmsa/construction.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "cmsa/error.hpp"
#include "cmsa/lp.hpp"
#include "support/oracle.hpp"

namespace cmsa {
namespace {

using testing::row_of;
using Values = std::vector<std::uint8_t>;

BipInstance free_instance(int n) {
  return BipInstance({}, std::vector<double>(n, 1.0), ObjectiveSense::kMinimize,
                     {});
}

TEST(SamplingVector, FromIncumbent) {
  const auto sv = sampling_vector_from_incumbent(Values{0, 1}, 0.1);
  EXPECT_EQ(sv.probs, (std::vector<double>{0.1, 1.0 - 0.1}));
  EXPECT_EQ(sv.probs[1], 0.9);
}

TEST(SamplingVector, FromLpIsClamped) {
  const std::vector<double> lp{0.02, 0.5, 0.99};
  const auto sv = sampling_vector_from_lp(lp, 0.05);
  EXPECT_EQ(sv.probs, (std::vector<double>{0.05, 0.5, 0.95}));
}

TEST(SamplingVector, ClampIsInclusive) {
  const std::vector<double> lp{0.05, 0.95};
  EXPECT_EQ(sampling_vector_from_lp(lp, 0.05).probs, lp);
}

TEST(SamplingVector, RejectsOutOfRangeRate) {
  const Values inc{0, 1};
  const std::vector<double> lp{0.3};
  for (double bad : {0.0, 0.5, -0.1, 0.7}) {
    EXPECT_THROW(sampling_vector_from_incumbent(inc, bad), UsageError);
    EXPECT_THROW(sampling_vector_from_lp(lp, bad), UsageError);
  }
}

// Exact distribution of two independent draws.
TEST(ConstructBasic, TwoVariableOutcomeLaw) {
  const double p1 = 0.9;
  const double p2 = 0.1;
  EXPECT_NEAR(p1 * p2, 0.09, 1e-15);
  EXPECT_NEAR(p1 * (1 - p2), 0.81, 1e-15);
  EXPECT_NEAR((1 - p1) * p2, 0.01, 1e-15);
  EXPECT_NEAR((1 - p1) * (1 - p2), 0.09, 1e-15);

  const BipInstance inst = free_instance(2);
  const SamplingVector sv{{p1, p2}};
  Rng rng(123);
  std::array<long, 4> counts{};
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const Solution s = construct_basic(inst, sv, rng);
    ++counts[2 * s.values[0] + s.values[1]];
  }
  EXPECT_NEAR(static_cast<double>(counts[2] + counts[3]) / draws, 0.9, 0.01);
  EXPECT_NEAR(static_cast<double>(counts[2]) / draws, 0.81, 0.01);
  EXPECT_NEAR(static_cast<double>(counts[1]) / draws, 0.01, 0.003);
}

TEST(ConstructBasic, ReproducesIncumbentAtExpectedRate) {
  const BipInstance inst = free_instance(5);
  const Values incumbent{1, 0, 1, 1, 0};
  const auto sv = sampling_vector_from_incumbent(incumbent, 0.03);
  Rng rng(77);
  const int draws = 100000;
  int same = 0;
  for (int i = 0; i < draws; ++i) {
    same += construct_basic(inst, sv, rng).values == incumbent;
  }
  const double expected = std::pow(0.97, 5);
  EXPECT_NEAR(static_cast<double>(same) / draws, expected, 0.005);
}

TEST(ConstructBasic, ChiSquareAgainstProductLaw) {
  const BipInstance inst = free_instance(3);
  const SamplingVector sv{{0.2, 0.5, 0.85}};
  Rng rng(2026);
  const int draws = 100000;
  std::array<long, 8> counts{};
  for (int i = 0; i < draws; ++i) {
    const Solution s = construct_basic(inst, sv, rng);
    ++counts[4 * s.values[0] + 2 * s.values[1] + s.values[2]];
  }
  double chi2 = 0.0;
  for (int cell = 0; cell < 8; ++cell) {
    double p = 1.0;
    for (int j = 0; j < 3; ++j) {
      const bool one = (cell >> (2 - j)) & 1;
      p *= one ? sv.probs[j] : 1.0 - sv.probs[j];
    }
    const double e = p * draws;
    chi2 += (counts[cell] - e) * (counts[cell] - e) / e;
  }
  // 0.999 quantile of chi-square with 7 degrees of freedom.
  EXPECT_LT(chi2, 24.322);
}

TEST(ConstructCp, PackingRowAlwaysFeasible) {
  const BipInstance inst({}, {0, 0}, ObjectiveSense::kMinimize,
                         {row_of({{0, 1}, {1, 1}}, RowSense::kLe, 1)});
  Propagator state(inst);
  const SamplingVector sv{{0.9, 0.9}};
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const ConstructionPlan plan = sample_plan(2, rng);
    EXPECT_TRUE(construct_cp(inst, sv, plan, state, rng).feasible);
  }
  EXPECT_EQ(state.num_marks(), 0u);
}

TEST(ConstructCp, RootFixedVariableIsNeverResampled) {
  const BipInstance inst({}, {0, 0}, ObjectiveSense::kMinimize,
                         {row_of({{0, 1}}, RowSense::kGe, 1)});
  Propagator state(inst);
  ASSERT_EQ(state.domain(0), Domain::kFixed1);
  const SamplingVector sv{{0.01, 0.5}};
  Rng rng(6);
  for (int i = 0; i < 500; ++i) {
    const ConstructionPlan plan = sample_plan(2, rng);
    EXPECT_EQ(construct_cp(inst, sv, plan, state, rng).values[0], 1);
  }
}

TEST(ConstructCp, DoubleConflictStillReturnsAndRestoresState) {
  // x1 + x2 = 1 and x1 = x2: infeasible, but not detected at the root.
  const BipInstance inst({}, {0, 0, 0}, ObjectiveSense::kMinimize,
                         {row_of({{0, 1}, {1, 1}}, RowSense::kEq, 1),
                          row_of({{0, 1}, {1, -1}}, RowSense::kEq, 0)});
  Propagator state(inst);
  ASSERT_EQ(state.status(), PropagationStatus::kConsistent);
  const auto entry = state.snapshot();
  const SamplingVector sv{{0.5, 0.5, 0.5}};
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const ConstructionPlan plan = sample_plan(3, rng);
    const Solution s = construct_cp(inst, sv, plan, state, rng);
    EXPECT_FALSE(s.feasible);
    EXPECT_EQ(s.values.size(), 3u);
    EXPECT_EQ(state.snapshot(), entry);
  }
}

TEST(ConstructCp, ImplicationChainsAreAlwaysFeasible) {
  // x_j <= x_{j+1} for a chain of 10 variables.
  std::vector<RowSpec> rows;
  for (int j = 0; j + 1 < 10; ++j) {
    rows.push_back(row_of({{j, 1}, {j + 1, -1}}, RowSense::kLe, 0));
  }
  const BipInstance inst({}, std::vector<double>(10, 1.0),
                         ObjectiveSense::kMinimize, rows);
  Propagator state(inst);
  const SamplingVector sv{std::vector<double>(10, 0.5)};
  Rng rng(10);
  for (int i = 0; i < 1000; ++i) {
    const ConstructionPlan plan = sample_plan(10, rng);
    ASSERT_TRUE(construct_cp(inst, sv, plan, state, rng).feasible);
  }
}

TEST(ConstructCp, AtLeastAsOftenFeasibleAsBasic) {
  std::mt19937_64 gen(12);
  const BipInstance inst = testing::random_set_partitioning(gen, 30, 12, 4);
  const LpSolution lp = solve_lp(inst, {}, 10.0);
  ASSERT_EQ(lp.status, LpStatus::kOptimal);
  const auto sv = sampling_vector_from_lp(lp.values, 0.1);
  Propagator state(inst);
  const auto entry = state.snapshot();
  int basic = 0;
  int cp = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    Rng a(seed);
    basic += construct_basic(inst, sv, a).feasible;
    Rng b(seed);
    const ConstructionPlan plan = sample_plan(inst.num_vars(), b);
    cp += construct_cp(inst, sv, plan, state, b).feasible;
  }
  EXPECT_GE(cp, basic);
  EXPECT_EQ(state.snapshot(), entry);
}

TEST(SamplePlan, IsPermutation) {
  Rng rng(1);
  const ConstructionPlan plan = sample_plan(50, rng);
  std::vector<int> sorted = plan.order;
  std::sort(sorted.begin(), sorted.end());
  for (int j = 0; j < 50; ++j) EXPECT_EQ(sorted[j], j);
}

}  // namespace
}  // namespace cmsa
