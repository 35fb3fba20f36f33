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

#ifndef CMSA_CONSTRUCTION_HPP_
#define CMSA_CONSTRUCTION_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cmsa/model.hpp"
#include "cmsa/propagation.hpp"

namespace cmsa {

using Rng = std::mt19937_64;

// Per-variable probability of rounding to 1.
struct SamplingVector {
  std::vector<double> probs;
};

// d_rate where the incumbent is 0, 1 - d_rate where it is 1.
// Throws UsageError unless 0 < d_rate < 0.5.
SamplingVector sampling_vector_from_incumbent(
    std::span<const std::uint8_t> incumbent, double d_rate);

// LP values clamped into [d_rate, 1 - d_rate] (both ends inclusive).
SamplingVector sampling_vector_from_lp(std::span<const double> lp_values,
                                       double d_rate);

struct ConstructionPlan {
  std::vector<int> order;  // permutation of 0..n-1
  bool cp_enabled = true;
};

// Uniformly random visiting order.
ConstructionPlan sample_plan(int num_vars, Rng& rng);

// Independent randomized rounding in index order. The result may be
// infeasible.
Solution construct_basic(const BipInstance& instance, const SamplingVector& sv,
                         Rng& rng);

// Randomized rounding in plan order with propagation after each decision.
// Variables already fixed (at the root or by implication) are not sampled. A
// sampled value that propagation rejects is flipped; if the flip is rejected
// too, the remaining free variables are rounded without propagation, keeping
// the originally sampled value for the variable at hand. `state` must be
// consistent on entry and is returned to exactly its entry state.
Solution construct_cp(const BipInstance& instance, const SamplingVector& sv,
                      const ConstructionPlan& plan, Propagator& state,
                      Rng& rng);

}  // namespace cmsa

#endif  // CMSA_CONSTRUCTION_HPP_
