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

#ifndef CMSA_SUBSOLVER_HPP_
#define CMSA_SUBSOLVER_HPP_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cmsa/model.hpp"
#include "cmsa/pool.hpp"
#include "cmsa/propagation.hpp"

namespace cmsa {

// LP values within this distance of 0 or 1 count as integral.
inline constexpr double kIntegralityTolerance = 1e-6;
// A node is pruned when its LP bound reaches the incumbent minus this.
inline constexpr double kPruneTolerance = 1e-6;

// The base problem plus x_j = v for every variable whose pool holds only
// (x_j, v).
struct RestrictedProblem {
  const BipInstance* base = nullptr;
  PartialAssignment forced;  // -1 for free variables
  std::vector<int> free_vars;

  int num_forced() const {
    return static_cast<int>(forced.size() - free_vars.size());
  }
};

// Throws UsageError when a variable has no component in the pool.
RestrictedProblem build_restriction(const BipInstance& instance,
                                    const ComponentPool& pool);

// Unrestricted view of the whole instance.
RestrictedProblem full_problem(const BipInstance& instance);

// True when `values` agrees with every forced entry of `rp`.
bool respects_forcing(const RestrictedProblem& rp,
                      std::span<const std::uint8_t> values);

struct SubsolverResult {
  std::optional<Solution> solution;
  // The whole search space was explored, so `solution` is optimal for the
  // restriction (or the restriction is infeasible when it is empty).
  bool search_complete = false;
  long nodes = 0;
};

using ImprovementCallback = std::function<void(const Solution&)>;

// Depth-first branch-and-bound on the restriction: propagation at every
// decision, an LP bound at every node, branching on the most fractional
// variable (lowest index on ties) with the LP rounding explored first.
//
// A feasible `incumbent` that respects the forcings seeds the upper bound and
// is returned if nothing strictly better is found. `on_improvement` sees every
// new incumbent found by the search.
SubsolverResult solve_restricted(
    const RestrictedProblem& rp, double time_limit_seconds,
    const Solution* incumbent = nullptr,
    const ImprovementCallback& on_improvement = {});

// LP diving: solve the LP, fix the free variable closest to integral at its
// rounding (flipping on conflict), repeat. Returns a feasible solution or
// nullopt; never an infeasible one.
std::optional<Solution> initial_heuristic(const BipInstance& instance,
                                          double time_limit_seconds);

// Hands the restriction to an external program.
//
// The restriction is written as MPS with one extra equality row per forced
// variable. `command_template` is run through the shell after substituting
// {input} (MPS path), {output} (solution path) and {time_limit} (seconds).
// The solution file holds `<var name> <value>` lines; '#' starts a comment and
// unlisted variables are 0. A nonzero exit status, an unreadable file, or an
// infeasible assignment yields no solution.
struct ExternalSolverConfig {
  std::string command_template;
  // Defaults to $CMSA_SCRATCH_DIR, then the system temp directory.
  std::filesystem::path scratch_dir;
};

BipInstance restricted_instance(const RestrictedProblem& rp);

SubsolverResult solve_restricted_external(const RestrictedProblem& rp,
                                          const ExternalSolverConfig& config,
                                          double time_limit_seconds);

// Parses a `<var name> <value>` solution file against `instance`. Returns
// nullopt on unknown names or non-binary values.
std::optional<BinaryVector> read_solution_file(
    const BipInstance& instance, const std::filesystem::path& path);

}  // namespace cmsa

#endif  // CMSA_SUBSOLVER_HPP_
