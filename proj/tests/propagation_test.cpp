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

#include "cmsa/propagation.hpp"

#include <gtest/gtest.h>

#include <random>

#include "cmsa/error.hpp"
#include "support/oracle.hpp"

namespace cmsa {
namespace {

using testing::row_of;

BipInstance make(int n, std::vector<RowSpec> rows) {
  return BipInstance({}, std::vector<double>(n, 0.0), ObjectiveSense::kMinimize,
                     std::move(rows));
}

TEST(RootPropagation, ZeroCapacityFixesBoth) {
  const BipInstance inst =
      make(2, {row_of({{0, 1}, {1, 1}}, RowSense::kLe, 0)});
  Propagator p(inst);
  EXPECT_EQ(p.status(), PropagationStatus::kConsistent);
  EXPECT_EQ(p.domain(0), Domain::kFixed0);
  EXPECT_EQ(p.domain(1), Domain::kFixed0);
  for (const TrailEntry& e : p.trail()) EXPECT_EQ(e.reason, FixReason::kRoot);
}

TEST(RootPropagation, LargeCoefficientFixesOnlyItsVariable) {
  const BipInstance inst =
      make(2, {row_of({{0, 2}, {1, 1}}, RowSense::kLe, 1)});
  Propagator p(inst);
  EXPECT_EQ(p.domain(0), Domain::kFixed0);
  EXPECT_EQ(p.domain(1), Domain::kFree);
}

TEST(RootPropagation, ContradictoryRows) {
  const BipInstance inst =
      make(2, {row_of({{0, 1}, {1, 1}}, RowSense::kGe, 1),
               row_of({{0, 1}, {1, 1}}, RowSense::kLe, 0)});
  EXPECT_EQ(Propagator(inst).status(), PropagationStatus::kInfeasible);
}

TEST(RootPropagation, EqualityAtMaxActivity) {
  const BipInstance inst =
      make(2, {row_of({{0, 1}, {1, 1}}, RowSense::kEq, 2)});
  Propagator p(inst);
  EXPECT_EQ(p.domain(0), Domain::kFixed1);
  EXPECT_EQ(p.domain(1), Domain::kFixed1);
}

TEST(FixAndPropagate, PackingImpliesZero) {
  const BipInstance inst =
      make(2, {row_of({{0, 1}, {1, 1}}, RowSense::kLe, 1)});
  Propagator p(inst);
  const FixResult r = p.fix_and_propagate(0, 1);
  EXPECT_FALSE(r.conflict);
  EXPECT_EQ(r.implied, (std::vector<int>{1}));
  EXPECT_EQ(p.domain(1), Domain::kFixed0);
  ASSERT_EQ(p.trail().size(), 2u);
  EXPECT_EQ(p.trail()[0], (TrailEntry{0, 1, FixReason::kDecision}));
  EXPECT_EQ(p.trail()[1], (TrailEntry{1, 0, FixReason::kImplication}));
}

TEST(FixAndPropagate, ImplicationRow) {
  const BipInstance inst =
      make(2, {row_of({{0, 1}, {1, -1}}, RowSense::kLe, 0)});
  Propagator p(inst);
  EXPECT_EQ(p.fix_and_propagate(0, 1).implied, (std::vector<int>{1}));
  EXPECT_EQ(p.domain(1), Domain::kFixed1);
}

TEST(FixAndPropagate, TransitiveChain) {
  const BipInstance inst =
      make(3, {row_of({{0, 1}, {1, -1}}, RowSense::kLe, 0),
               row_of({{1, 1}, {2, -1}}, RowSense::kLe, 0)});
  Propagator p(inst);
  const FixResult r = p.fix_and_propagate(0, 1);
  EXPECT_FALSE(r.conflict);
  EXPECT_EQ(p.domain(1), Domain::kFixed1);
  EXPECT_EQ(p.domain(2), Domain::kFixed1);
}

TEST(FixAndPropagate, ForcedOppositeValueHasNoCompletion) {
  // x2 + x3 <= 0 already decides x1 = 1 at the root.
  const BipInstance inst =
      make(3, {row_of({{0, 1}, {1, 1}}, RowSense::kGe, 1),
               row_of({{0, 1}, {2, 1}}, RowSense::kGe, 1),
               row_of({{1, 1}, {2, 1}}, RowSense::kLe, 0)});
  Propagator p(inst);
  ASSERT_EQ(p.status(), PropagationStatus::kConsistent);
  EXPECT_EQ(p.domain(0), Domain::kFixed1);
  EXPECT_FALSE(testing::has_feasible_completion(inst, {0, -1, -1}));
}

TEST(FixAndPropagate, ConflictLeavesNoResidue) {
  const BipInstance inst =
      make(3, {row_of({{0, 1}, {1, 1}}, RowSense::kGe, 1),
               row_of({{0, 1}, {2, 1}}, RowSense::kGe, 1),
               row_of({{1, 1}, {2, 1}}, RowSense::kLe, 1)});
  Propagator p(inst);
  ASSERT_EQ(p.num_free(), 3);
  EXPECT_FALSE(testing::has_feasible_completion(inst, {0, -1, -1}));
  const auto before = p.snapshot();
  EXPECT_TRUE(p.fix_and_propagate(0, 0).conflict);
  EXPECT_EQ(p.snapshot(), before);
  EXPECT_FALSE(p.fix_and_propagate(0, 1).conflict);
}

TEST(FixAndPropagate, UsageErrors) {
  const BipInstance inst =
      make(2, {row_of({{0, 1}, {1, 1}}, RowSense::kLe, 1)});
  Propagator p(inst);
  p.fix_and_propagate(0, 1);
  EXPECT_THROW(p.fix_and_propagate(0, 0), UsageError);
  EXPECT_THROW(p.fix_and_propagate(1, 1), UsageError);
  EXPECT_THROW(p.fix_and_propagate(5, 1), UsageError);
  EXPECT_THROW(p.backtrack_to_mark(), UsageError);
}

TEST(Marks, BacktrackRestoresSnapshot) {
  const BipInstance inst =
      make(3, {row_of({{0, 1}, {1, -1}}, RowSense::kLe, 0),
               row_of({{1, 1}, {2, -1}}, RowSense::kLe, 0)});
  Propagator p(inst);
  const auto s0 = p.snapshot();
  p.push_mark();
  p.fix_and_propagate(0, 1);
  p.backtrack_to_mark();
  EXPECT_EQ(p.snapshot(), s0);
}

TEST(Marks, NestedMarksUnwindInOrder) {
  const BipInstance inst =
      make(4, {row_of({{0, 1}, {1, 1}}, RowSense::kLe, 1),
               row_of({{2, 1}, {3, -1}}, RowSense::kLe, 0)});
  Propagator p(inst);
  const auto s0 = p.snapshot();
  p.push_mark();
  p.fix_and_propagate(0, 1);
  const auto s1 = p.snapshot();
  p.push_mark();
  p.fix_and_propagate(2, 1);
  EXPECT_EQ(p.num_marks(), 2u);
  p.backtrack_to_mark();
  EXPECT_EQ(p.snapshot(), s1);
  p.backtrack_to_mark();
  EXPECT_EQ(p.snapshot(), s0);
}

// Recomputes activity bounds from the domains.
void expect_activities_consistent(const BipInstance& inst,
                                  const Propagator& p) {
  for (int i = 0; i < inst.num_rows(); ++i) {
    const Row& row = inst.row(i);
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      const double a = row.coefficients[k];
      switch (p.domain(row.columns[k])) {
        case Domain::kFree:
          lo += std::min(0.0, a);
          hi += std::max(0.0, a);
          break;
        case Domain::kFixed1:
          lo += a;
          hi += a;
          break;
        case Domain::kFixed0:
          break;
      }
    }
    EXPECT_NEAR(p.min_activity(i), lo, 1e-9);
    EXPECT_NEAR(p.max_activity(i), hi, 1e-9);
  }
}

TEST(Soundness, RandomDecisionSequences) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    testing::RandomInstanceOptions opt;
    opt.n = 5 + trial % 8;
    opt.m = 3 + trial % 6;
    opt.max_slack = trial % 3;
    opt.plant_feasible = trial % 4 != 0;
    const BipInstance inst = testing::random_instance(rng, opt);
    Propagator p(inst);
    if (p.status() == PropagationStatus::kInfeasible) {
      EXPECT_FALSE(testing::brute_force(inst).feasible);
      continue;
    }
    for (const TrailEntry& e : p.trail()) {
      PartialAssignment opposite(inst.num_vars(), kUnfixed);
      opposite[e.var] = static_cast<std::int8_t>(1 - e.value);
      EXPECT_FALSE(testing::has_feasible_completion(inst, opposite));
    }
    for (int seq = 0; seq < 5; ++seq) {
      p.push_mark();
      while (p.num_free() > 0) {
        std::vector<int> free_vars;
        for (int j = 0; j < inst.num_vars(); ++j) {
          if (!p.is_fixed(j)) free_vars.push_back(j);
        }
        const int var = free_vars[rng() % free_vars.size()];
        const std::uint8_t value = rng() % 2;
        PartialAssignment tried = p.fixings();
        tried[var] = static_cast<std::int8_t>(value);
        const FixResult r = p.fix_and_propagate(var, value);
        if (r.conflict) {
          ASSERT_FALSE(testing::has_feasible_completion(inst, tried));
          break;
        }
        expect_activities_consistent(inst, p);
        for (int j : r.implied) {
          PartialAssignment opposite = tried;
          opposite[j] = static_cast<std::int8_t>(1 - p.value(j));
          ASSERT_FALSE(testing::has_feasible_completion(inst, opposite));
        }
      }
      p.backtrack_to_mark();
    }
  }
}

TEST(Marks, RandomSequencesReturnToFreshState) {
  std::mt19937_64 rng(11);
  int sequences = 0;
  while (sequences < 1000) {
    testing::RandomInstanceOptions opt;
    opt.n = 6 + static_cast<int>(rng() % 10);
    opt.m = 3 + static_cast<int>(rng() % 8);
    const BipInstance inst = testing::random_instance(rng, opt);
    Propagator p(inst);
    if (p.status() == PropagationStatus::kInfeasible) continue;
    const auto fresh = Propagator(inst).snapshot();
    for (int s = 0; s < 10; ++s, ++sequences) {
      int depth = 0;
      for (int step = 0; step < 12 && p.num_free() > 0; ++step) {
        if (depth > 0 && rng() % 4 == 0) {
          p.backtrack_to_mark();
          --depth;
          continue;
        }
        p.push_mark();
        ++depth;
        int var = static_cast<int>(rng() % inst.num_vars());
        while (p.is_fixed(var)) var = (var + 1) % inst.num_vars();
        if (p.fix_and_propagate(var, rng() % 2).conflict) break;
      }
      while (depth-- > 0) p.backtrack_to_mark();
      ASSERT_EQ(p.snapshot(), fresh);
    }
  }
}

}  // namespace
}  // namespace cmsa
