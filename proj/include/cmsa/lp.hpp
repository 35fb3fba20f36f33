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

#ifndef CMSA_LP_HPP_
#define CMSA_LP_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "cmsa/model.hpp"

namespace cmsa {

enum class LpStatus : std::uint8_t { kOptimal, kTimeLimit, kInfeasible };

struct LpSolution {
  std::vector<double> values;  // n entries in [0, 1]
  double objective = 0.0;
  LpStatus status = LpStatus::kInfeasible;
  long iterations = 0;
};

// Solves min c^T x over the rows with 0 <= x <= 1 and the given fixings
// (entries -1 free, 0 or 1 fixed; an empty span fixes nothing).
//
// Bounded-variable primal simplex, two phases, dense basis inverse
// refactorized every 100 pivots. Bland's rule takes over after 5*(n+m)
// consecutive degenerate pivots.
//
// When `time_limit_seconds` runs out the status is kTimeLimit: values are the
// current iterate if it is primal feasible, otherwise all 0.5.
LpSolution solve_lp(const BipInstance& instance,
                    std::span<const std::int8_t> fixings,
                    double time_limit_seconds);

}  // namespace cmsa

#endif  // CMSA_LP_HPP_
