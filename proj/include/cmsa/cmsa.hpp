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

#ifndef CMSA_CMSA_HPP_
#define CMSA_CMSA_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmsa/controller.hpp"
#include "cmsa/model.hpp"

namespace cmsa {

// Determinism-rate bounds of the four standard configurations (1-based).
// Throws UsageError for other indices.
Interval preset_d_rate(int preset);

struct CmsaParams {
  int n_a = 5;         // constructions per iteration
  int age_max = 1;     // components older than this leave the pool
  double t_lp = 10.0;  // seconds for the initial LP
  double d_rate_lb = 0.1;
  double d_rate_ub = 0.3;
  double t_sub_lb = 30.0;
  double t_sub_ub = 100.0;
  double total_budget = 1000.0;  // wall-clock seconds
  std::uint64_t seed = 1;
  bool cp_enabled = false;
  // Merge infeasible constructions into the pool (otherwise discard them).
  bool merge_infeasible = true;
  // Stop early once an iteration's sub-solver has exhausted the unrestricted
  // problem, i.e. the incumbent is proven optimal.
  bool stop_when_proven = true;
  // 0 = no cap. Makes runs reproducible independent of machine speed.
  long max_iterations = 0;
  // Shell command for an external sub-solver (see ExternalSolverConfig);
  // empty uses the built-in branch-and-bound.
  std::string external_solver_cmd;

  // Throws UsageError describing the first violated constraint.
  void validate() const;
};

enum class TraceEvent : std::uint8_t {
  kInitialHeuristic,
  kSubsolverImprovement
};

struct TracePoint {
  double elapsed_seconds;
  double objective;  // internal minimization value
  long iteration;    // 0 before the first iteration
  TraceEvent event;
};

// Incumbent history: strictly increasing time, non-increasing objective.
struct AnytimeTrace {
  std::vector<TracePoint> points;

  void record(double elapsed_seconds, double objective, long iteration,
              TraceEvent event);
};

enum class RunStatus : std::uint8_t {
  kSolutionFound,
  kNoSolution,
  kInfeasibleProven
};

struct RunStats {
  long iterations = 0;
  long constructions = 0;
  long feasible_constructions = 0;
  long subsolver_calls = 0;
  long max_pool_size = 0;
  bool proven_optimal = false;
  double elapsed_seconds = 0.0;
};

struct RunResult {
  std::optional<Solution> best;
  RunStatus status = RunStatus::kNoSolution;
  AnytimeTrace trace;
  RunStats stats;
};

// Construct, merge, solve and adapt until the budget runs out.
RunResult run_cmsa(const BipInstance& instance, const CmsaParams& params);

// The built-in sub-solver applied to the whole instance for the full budget.
RunResult run_subsolver_only(const BipInstance& instance,
                             double budget_seconds);

}  // namespace cmsa

#endif  // CMSA_CMSA_HPP_
