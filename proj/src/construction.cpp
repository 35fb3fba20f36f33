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

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>

#include "cmsa/error.hpp"

namespace cmsa {
namespace {

void check_d_rate(double d_rate) {
  if (!(d_rate > 0.0 && d_rate < 0.5)) {
    throw UsageError("d_rate must lie in (0, 0.5), got " +
                     std::to_string(d_rate));
  }
}

std::uint8_t draw(double prob, Rng& rng) {
  return std::bernoulli_distribution(prob)(rng) ? 1 : 0;
}

}  // namespace

SamplingVector sampling_vector_from_incumbent(
    std::span<const std::uint8_t> incumbent, double d_rate) {
  check_d_rate(d_rate);
  SamplingVector sv;
  sv.probs.reserve(incumbent.size());
  for (std::uint8_t s : incumbent) {
    if (s > 1) throw UsageError("incumbent entry is not 0/1");
    sv.probs.push_back(s ? 1.0 - d_rate : d_rate);
  }
  return sv;
}

SamplingVector sampling_vector_from_lp(std::span<const double> lp_values,
                                       double d_rate) {
  check_d_rate(d_rate);
  SamplingVector sv;
  sv.probs.reserve(lp_values.size());
  for (double x : lp_values) {
    if (x < d_rate) {
      sv.probs.push_back(d_rate);
    } else if (x > 1.0 - d_rate) {
      sv.probs.push_back(1.0 - d_rate);
    } else {
      sv.probs.push_back(x);
    }
  }
  return sv;
}

ConstructionPlan sample_plan(int num_vars, Rng& rng) {
  ConstructionPlan plan;
  plan.order.resize(num_vars);
  std::iota(plan.order.begin(), plan.order.end(), 0);
  std::shuffle(plan.order.begin(), plan.order.end(), rng);
  return plan;
}

Solution construct_basic(const BipInstance& instance, const SamplingVector& sv,
                         Rng& rng) {
  if (static_cast<int>(sv.probs.size()) != instance.num_vars()) {
    throw UsageError("sampling vector length does not match the instance");
  }
  BinaryVector values(sv.probs.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    values[j] = draw(sv.probs[j], rng);
  }
  return evaluate(instance, values);
}

Solution construct_cp(const BipInstance& instance, const SamplingVector& sv,
                      const ConstructionPlan& plan, Propagator& state,
                      Rng& rng) {
  const int n = instance.num_vars();
  if (static_cast<int>(sv.probs.size()) != n ||
      static_cast<int>(plan.order.size()) != n) {
    throw UsageError("sampling vector or plan length does not match");
  }
  if (state.status() != PropagationStatus::kConsistent) {
    throw UsageError("construct_cp needs a consistent propagation state");
  }

  BinaryVector values(n, 0);
  state.push_mark();
  std::size_t pos = 0;
  std::optional<std::uint8_t> abandoned_value;
  for (; pos < plan.order.size(); ++pos) {
    const int j = plan.order[pos];
    if (state.is_fixed(j)) continue;
    const std::uint8_t v = draw(sv.probs[j], rng);
    if (!state.fix_and_propagate(j, v).conflict) continue;
    if (!state.fix_and_propagate(j, 1 - v).conflict) continue;
    abandoned_value = v;
    break;
  }
  for (int j = 0; j < n; ++j) {
    if (state.is_fixed(j)) values[j] = state.value(j);
  }
  if (abandoned_value) {
    values[plan.order[pos]] = *abandoned_value;
    for (++pos; pos < plan.order.size(); ++pos) {
      const int j = plan.order[pos];
      if (!state.is_fixed(j)) values[j] = draw(sv.probs[j], rng);
    }
  }
  state.backtrack_to_mark();
  return evaluate(instance, values);
}

}  // namespace cmsa
