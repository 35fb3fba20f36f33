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

#include "cmsa/pool.hpp"

#include <string>

#include "cmsa/error.hpp"

namespace cmsa {

ComponentPool::ComponentPool(int num_vars) {
  if (num_vars < 1) throw UsageError("pool needs at least one variable");
  age_.assign(2 * static_cast<std::size_t>(num_vars), -1);
}

std::optional<int> ComponentPool::age(int var, std::uint8_t value) const {
  const int a = age_[slot(var, value)];
  if (a < 0) return std::nullopt;
  return a;
}

bool ComponentPool::covers_all_variables() const {
  for (int j = 0; j < num_vars(); ++j) {
    if (!contains(j, 0) && !contains(j, 1)) return false;
  }
  return true;
}

void ComponentPool::merge(std::span<const std::uint8_t> values) {
  if (static_cast<int>(values.size()) != num_vars()) {
    throw UsageError("candidate has length " + std::to_string(values.size()) +
                     ", pool has " + std::to_string(num_vars()) + " variables");
  }
  for (int j = 0; j < num_vars(); ++j) {
    if (values[j] > 1) throw UsageError("candidate entry is not 0/1");
    int& a = age_[slot(j, values[j])];
    if (a < 0) {
      a = 0;
      ++size_;
    }
  }
}

void ComponentPool::adapt(std::optional<std::span<const std::uint8_t>> best,
                          int age_max) {
  if (age_max < 0) throw UsageError("age_max must be nonnegative");
  if (best && static_cast<int>(best->size()) != num_vars()) {
    throw UsageError("solution length does not match the pool");
  }
  for (int j = 0; j < num_vars(); ++j) {
    for (std::uint8_t v = 0; v <= 1; ++v) {
      int& a = age_[slot(j, v)];
      if (a < 0) continue;
      a = best && (*best)[j] == v ? 0 : a + 1;
      if (a > age_max) {
        a = -1;
        --size_;
      }
    }
  }
}

void ComponentPool::set(int var, std::uint8_t value, std::optional<int> age) {
  if (var < 0 || var >= num_vars() || value > 1) {
    throw UsageError("component out of range");
  }
  if (age && *age < 0) throw UsageError("age must be nonnegative");
  int& a = age_[slot(var, value)];
  size_ += (age ? 1 : 0) - (a >= 0 ? 1 : 0);
  a = age ? *age : -1;
}

}  // namespace cmsa
