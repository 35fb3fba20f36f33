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

#include "cmsa/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "cmsa/error.hpp"

namespace cmsa {

NormalizedObjective negate_objective_if_max(ObjectiveSense sense,
                                            std::vector<double> objective) {
  NormalizedObjective out{std::move(objective), false};
  if (sense == ObjectiveSense::kMaximize) {
    for (double& c : out.coefficients) c = -c;
    out.negated = true;
  }
  return out;
}

BipInstance::BipInstance(std::vector<std::string> var_names,
                         std::vector<double> objective, ObjectiveSense sense,
                         std::vector<RowSpec> rows, std::string name,
                         double objective_constant)
    : name_(std::move(name)), objective_constant_(objective_constant) {
  const int n = static_cast<int>(objective.size());
  if (n == 0) throw UsageError("instance needs at least one variable");
  if (!std::isfinite(objective_constant)) {
    throw UsageError("objective constant is not finite");
  }
  for (double c : objective) {
    if (!std::isfinite(c)) throw UsageError("objective coefficient not finite");
  }
  if (var_names.empty()) {
    var_names.reserve(n);
    for (int j = 0; j < n; ++j) var_names.push_back("x" + std::to_string(j));
  }
  if (static_cast<int>(var_names.size()) != n) {
    throw UsageError("variable names and objective differ in length");
  }

  NormalizedObjective normalized =
      negate_objective_if_max(sense, std::move(objective));
  objective_ = std::move(normalized.coefficients);
  objective_negated_ = normalized.negated;
  var_names_ = std::move(var_names);
  for (int j = 0; j < n; ++j) {
    if (!var_index_.emplace(var_names_[j], j).second) {
      throw UsageError("duplicate variable name '" + var_names_[j] + "'");
    }
  }

  columns_.resize(n);
  rows_.reserve(rows.size());
  row_names_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    RowSpec& spec = rows[i];
    if (!std::isfinite(spec.rhs)) {
      throw UsageError("row " + std::to_string(i) + " has non-finite rhs");
    }
    std::sort(spec.entries.begin(), spec.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Row row;
    row.sense = spec.sense;
    row.rhs = spec.rhs;
    for (std::size_t k = 0; k < spec.entries.size(); ++k) {
      const auto [col, coef] = spec.entries[k];
      if (col < 0 || col >= n) {
        throw UsageError("row " + std::to_string(i) + " references column " +
                         std::to_string(col) + " outside [0, n)");
      }
      if (k > 0 && spec.entries[k - 1].first == col) {
        throw UsageError("row " + std::to_string(i) + " repeats column " +
                         std::to_string(col));
      }
      if (!std::isfinite(coef)) {
        throw UsageError("row " + std::to_string(i) +
                         " has a non-finite coefficient");
      }
      if (coef == 0.0) continue;
      row.columns.push_back(col);
      row.coefficients.push_back(coef);
      columns_[col].push_back({static_cast<int>(i), coef});
    }
    nonzeros_ += static_cast<int>(row.columns.size());
    rows_.push_back(std::move(row));
    row_names_.push_back(spec.name.empty() ? "r" + std::to_string(i)
                                           : std::move(spec.name));
  }
  std::unordered_set<std::string_view> seen;
  for (const std::string& row_name : row_names_) {
    if (!seen.insert(row_name).second) {
      throw UsageError("duplicate row name '" + row_name + "'");
    }
  }
}

int BipInstance::find_var(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  return it == var_index_.end() ? -1 : it->second;
}

double row_activity(const Row& row, std::span<const std::uint8_t> values) {
  double activity = 0.0;
  for (std::size_t k = 0; k < row.columns.size(); ++k) {
    if (values[row.columns[k]]) activity += row.coefficients[k];
  }
  return activity;
}

double row_violation(const Row& row, double activity) {
  switch (row.sense) {
    case RowSense::kLe:
      return std::max(0.0, activity - row.rhs);
    case RowSense::kGe:
      return std::max(0.0, row.rhs - activity);
    case RowSense::kEq:
      return std::abs(activity - row.rhs);
  }
  return 0.0;
}

Solution evaluate(const BipInstance& instance,
                  std::span<const std::uint8_t> values) {
  const int n = instance.num_vars();
  if (static_cast<int>(values.size()) != n) {
    throw UsageError("assignment has length " + std::to_string(values.size()) +
                     ", instance has " + std::to_string(n) + " variables");
  }
  Solution out;
  out.values.assign(values.begin(), values.end());
  const auto c = instance.objective();
  for (int j = 0; j < n; ++j) {
    if (values[j] > 1) throw UsageError("assignment entry is not 0/1");
    if (values[j]) out.objective += c[j];
  }
  for (const Row& row : instance.rows()) {
    const double violation = row_violation(row, row_activity(row, values));
    if (violation > kFeasibilityTolerance) {
      out.max_violation = std::max(out.max_violation, violation);
    }
  }
  out.feasible = out.max_violation == 0.0;
  return out;
}

}  // namespace cmsa
