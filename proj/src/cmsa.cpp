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

#include "cmsa/cmsa.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <span>

#include "cmsa/construction.hpp"
#include "cmsa/deadline.hpp"
#include "cmsa/error.hpp"
#include "cmsa/lp.hpp"
#include "cmsa/pool.hpp"
#include "cmsa/propagation.hpp"
#include "cmsa/subsolver.hpp"

namespace cmsa {
namespace {

// Largest determinism rate the sampling formulas accept. The top
// configuration reaches 0.5, which is consumed as this value.
const double kMaxDRate = std::nextafter(0.5, 0.0);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Lower bound on the optimum from the LP relaxation value. With integer
// objective coefficients every binary solution has an integer objective, so
// the bound rounds up.
double root_bound(const BipInstance& instance, double lp_objective) {
  for (double c : instance.objective()) {
    if (c != std::round(c)) return lp_objective - 1e-6;
  }
  return std::ceil(lp_objective - 1e-6);
}

}  // namespace

Interval preset_d_rate(int preset) {
  switch (preset) {
    case 1:
      return {0.03, 0.08};
    case 2:
      return {0.05, 0.15};
    case 3:
      return {0.1, 0.3};
    case 4:
      return {0.3, 0.5};
    default:
      throw UsageError("preset must be 1, 2, 3 or 4");
  }
}

void CmsaParams::validate() const {
  if (n_a < 1) throw UsageError("n_a must be at least 1");
  if (age_max < 0) throw UsageError("age_max must be nonnegative");
  if (!(t_lp > 0.0)) throw UsageError("t_lp must be positive");
  if (!(d_rate_lb > 0.0 && d_rate_lb <= d_rate_ub && d_rate_lb < 0.5 &&
        d_rate_ub <= 0.5)) {
    throw UsageError(
        "d_rate bounds must satisfy 0 < lb <= ub <= 0.5, lb < 0.5");
  }
  if (!(t_sub_lb > 0.0 && t_sub_lb <= t_sub_ub && std::isfinite(t_sub_ub))) {
    throw UsageError("t_sub bounds must satisfy 0 < lb <= ub");
  }
  if (!(total_budget > 0.0)) throw UsageError("total_budget must be positive");
  if (max_iterations < 0) throw UsageError("max_iterations must be >= 0");
}

void AnytimeTrace::record(double elapsed_seconds, double objective,
                          long iteration, TraceEvent event) {
  if (!points.empty() && elapsed_seconds <= points.back().elapsed_seconds) {
    elapsed_seconds = std::nextafter(points.back().elapsed_seconds,
                                     std::numeric_limits<double>::infinity());
  }
  points.push_back({elapsed_seconds, objective, iteration, event});
}

RunResult run_cmsa(const BipInstance& instance, const CmsaParams& params) {
  params.validate();
  const Stopwatch clock;
  const Deadline deadline = Deadline::after(params.total_budget);
  const int n = instance.num_vars();
  RunResult result;
  Rng rng(params.seed);

  Propagator root(instance);
  if (root.status() != PropagationStatus::kConsistent) {
    result.status = RunStatus::kInfeasibleProven;
    result.stats.elapsed_seconds = clock.seconds();
    return result;
  }

  std::optional<Solution> incumbent;
  std::vector<double> lp_values(n, 0.5);
  if (const double t = std::min(params.t_lp, deadline.remaining_seconds());
      t > 0.0) {
    incumbent = initial_heuristic(instance, t);
  }
  std::optional<double> lower_bound;
  if (incumbent) {
    result.trace.record(clock.seconds(), incumbent->objective, 0,
                        TraceEvent::kInitialHeuristic);
  }
  if (const double t = std::min(params.t_lp, deadline.remaining_seconds());
      t > 0.0 && (!incumbent || params.stop_when_proven)) {
    LpSolution lp = solve_lp(instance, {}, t);
    if (lp.status == LpStatus::kInfeasible) {
      result.status = RunStatus::kInfeasibleProven;
      result.stats.elapsed_seconds = clock.seconds();
      return result;
    }
    if (lp.status == LpStatus::kOptimal) {
      lower_bound = root_bound(instance, lp.objective);
    }
    if (!incumbent) lp_values = std::move(lp.values);
  }
  auto bound_attained = [&] {
    return lower_bound && incumbent &&
           incumbent->objective <= *lower_bound + kFeasibilityTolerance;
  };

  const ExternalSolverConfig external{params.external_solver_cmd, {}};
  ComponentPool pool(n);
  AdaptiveController controller({params.d_rate_lb, params.d_rate_ub},
                                {params.t_sub_lb, params.t_sub_ub});
  RunStats& stats = result.stats;
  bool infeasible_proven = false;

  if (params.stop_when_proven && bound_attained()) {
    stats.proven_optimal = true;
  }
  while (!stats.proven_optimal && !deadline.expired() &&
         (params.max_iterations == 0 ||
          stats.iterations < params.max_iterations)) {
    const long iteration = ++stats.iterations;
    const double d_rate = std::min(controller.d_rate(), kMaxDRate);
    const SamplingVector sv =
        incumbent ? sampling_vector_from_incumbent(incumbent->values, d_rate)
                  : sampling_vector_from_lp(lp_values, d_rate);

    for (int i = 0; i < params.n_a; ++i) {
      Solution candidate =
          params.cp_enabled
              ? construct_cp(instance, sv, sample_plan(n, rng), root, rng)
              : construct_basic(instance, sv, rng);
      ++stats.constructions;
      if (candidate.feasible) ++stats.feasible_constructions;
      if (candidate.feasible || params.merge_infeasible) {
        pool.merge(candidate.values);
      }
    }
    stats.max_pool_size = std::max<long>(stats.max_pool_size, pool.size());

    std::optional<Solution> s_opt;
    bool proven = false;
    const double t_sub =
        std::min(controller.t_sub(), deadline.remaining_seconds());
    if (pool.covers_all_variables() && t_sub > 0.0) {
      const RestrictedProblem rp = build_restriction(instance, pool);
      SubsolverResult sub;
      if (params.external_solver_cmd.empty()) {
        sub = solve_restricted(rp, t_sub, incumbent ? &*incumbent : nullptr);
        proven = sub.search_complete && rp.num_forced() == 0;
      } else {
        sub = solve_restricted_external(rp, external, t_sub);
      }
      ++stats.subsolver_calls;
      s_opt = std::move(sub.solution);
    }

    const bool improved =
        s_opt && (!incumbent || s_opt->objective < incumbent->objective);
    if (improved) {
      incumbent = s_opt;
      result.trace.record(clock.seconds(), incumbent->objective, iteration,
                          TraceEvent::kSubsolverImprovement);
    }
    if (s_opt) {
      pool.adapt(std::span<const std::uint8_t>(s_opt->values), params.age_max);
    } else {
      pool.adapt(std::nullopt, params.age_max);
    }
    controller.step(improved);

    if (proven) {
      if (!incumbent) infeasible_proven = true;
      stats.proven_optimal = incumbent.has_value();
      if (params.stop_when_proven || infeasible_proven) break;
    }
    if (params.stop_when_proven && improved && bound_attained()) {
      stats.proven_optimal = true;
    }
  }

  result.best = std::move(incumbent);
  result.status = result.best         ? RunStatus::kSolutionFound
                  : infeasible_proven ? RunStatus::kInfeasibleProven
                                      : RunStatus::kNoSolution;
  stats.elapsed_seconds = clock.seconds();
  return result;
}

RunResult run_subsolver_only(const BipInstance& instance,
                             double budget_seconds) {
  if (!(budget_seconds > 0.0)) throw UsageError("budget must be positive");
  const Stopwatch clock;
  RunResult result;
  Propagator root(instance);
  if (root.status() != PropagationStatus::kConsistent) {
    result.status = RunStatus::kInfeasibleProven;
    result.stats.elapsed_seconds = clock.seconds();
    return result;
  }
  SubsolverResult sub = solve_restricted(
      full_problem(instance), budget_seconds, nullptr, [&](const Solution& s) {
        result.trace.record(clock.seconds(), s.objective, 0,
                            TraceEvent::kSubsolverImprovement);
      });
  result.stats.subsolver_calls = 1;
  result.stats.proven_optimal = sub.search_complete && sub.solution;
  result.best = std::move(sub.solution);
  result.status = result.best           ? RunStatus::kSolutionFound
                  : sub.search_complete ? RunStatus::kInfeasibleProven
                                        : RunStatus::kNoSolution;
  result.stats.elapsed_seconds = clock.seconds();
  return result;
}

}  // namespace cmsa
