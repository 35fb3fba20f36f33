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

#ifndef CMSA_POOL_HPP_
#define CMSA_POOL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cmsa {

// The sub-instance C': which (variable, value) components are admitted, and
// the age of each admitted component.
class ComponentPool {
 public:
  explicit ComponentPool(int num_vars);

  int num_vars() const { return static_cast<int>(age_.size() / 2); }

  bool contains(int var, std::uint8_t value) const {
    return age_[slot(var, value)] >= 0;
  }
  // Age of a present component; nullopt when absent.
  std::optional<int> age(int var, std::uint8_t value) const;

  // Number of present components.
  int size() const { return size_; }
  // True when every variable has at least one present component.
  bool covers_all_variables() const;

  // Adds (j, values[j]) for every j. Newly added components start at age 0;
  // components already present keep their age.
  void merge(std::span<const std::uint8_t> values);

  // Components of `best` (when given) are reset to age 0, every other present
  // component ages by one, then components older than `age_max` are dropped.
  void adapt(std::optional<std::span<const std::uint8_t>> best, int age_max);

  // Sets a component directly. Intended for tests and scripted scenarios.
  void set(int var, std::uint8_t value, std::optional<int> age);

 private:
  static std::size_t slot(int var, std::uint8_t value) {
    return 2 * static_cast<std::size_t>(var) + value;
  }

  std::vector<int> age_;  // -1 = absent
  int size_ = 0;
};

}  // namespace cmsa

#endif  // CMSA_POOL_HPP_
