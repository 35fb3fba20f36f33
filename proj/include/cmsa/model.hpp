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

#ifndef CMSA_MODEL_HPP_
#define CMSA_MODEL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cmsa {

// Absolute slack applied to row activities when judging feasibility.
inline constexpr double kFeasibilityTolerance = 1e-9;

enum class RowSense : std::uint8_t { kLe, kGe, kEq };
enum class ObjectiveSense : std::uint8_t { kMinimize, kMaximize };

// A 0/1 assignment. Entries are exactly 0 or 1.
using BinaryVector = std::vector<std::uint8_t>;

// Row as handed to the instance builder. Entries may come in any order; zero
// coefficients are dropped.
struct RowSpec {
  std::string name;
  std::vector<std::pair<int, double>> entries;  // (0-based column, coefficient)
  RowSense sense = RowSense::kLe;
  double rhs = 0.0;
};

// Canonical sparse row: strictly increasing columns, nonzero finite
// coefficients.
struct Row {
  std::vector<int> columns;
  std::vector<double> coefficients;
  RowSense sense = RowSense::kLe;
  double rhs = 0.0;

  bool operator==(const Row&) const = default;
};

struct ColumnEntry {
  int row;
  double coefficient;
};

struct NormalizedObjective {
  std::vector<double> coefficients;
  bool negated = false;
};

// Flips the sign of every coefficient of a maximization objective so the
// stored problem is always a minimization.
NormalizedObjective negate_objective_if_max(ObjectiveSense sense,
                                            std::vector<double> objective);

// min c^T x  s.t.  each row (LE | GE | EQ),  x in {0,1}^n.
//
// Immutable after construction. Variables and rows are indexed from 0.
class BipInstance {
 public:
  // Throws UsageError when an invariant is violated: n == 0, name/objective
  // length mismatch, column out of range, duplicate column within a row,
  // duplicate variable or row names, or a
  // non-finite value. Empty name vectors get generated names (x0.., r0..).
  BipInstance(std::vector<std::string> var_names, std::vector<double> objective,
              ObjectiveSense sense, std::vector<RowSpec> rows,
              std::string name = {}, double objective_constant = 0.0);

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_nonzeros() const { return nonzeros_; }

  const std::string& name() const { return name_; }

  // Minimization coefficients (already negated for maximization inputs).
  std::span<const double> objective() const { return objective_; }
  std::span<const Row> rows() const { return rows_; }
  const Row& row(int i) const { return rows_[i]; }
  std::span<const ColumnEntry> column(int j) const { return columns_[j]; }

  std::span<const std::string> var_names() const { return var_names_; }
  std::span<const std::string> row_names() const { return row_names_; }

  // Index of the named variable, or -1.
  int find_var(std::string_view name) const;

  // True when the input was a maximization problem.
  bool objective_negated() const { return objective_negated_; }
  // Constant term of the objective, in the input's sense.
  double objective_constant() const { return objective_constant_; }

  // Converts an internal (minimization) objective to the input's sense.
  double reported_objective(double internal) const {
    return (objective_negated_ ? -internal : internal) + objective_constant_;
  }

 private:
  std::string name_;
  std::vector<double> objective_;
  std::vector<Row> rows_;
  std::vector<std::vector<ColumnEntry>> columns_;
  std::vector<std::string> var_names_;
  std::vector<std::string> row_names_;
  std::unordered_map<std::string, int> var_index_;
  bool objective_negated_ = false;
  double objective_constant_ = 0.0;
  int nonzeros_ = 0;
};

struct Solution {
  BinaryVector values;
  double objective = 0.0;  // internal minimization value
  bool feasible = false;
  double max_violation = 0.0;

  bool operator==(const Solution&) const = default;
};

// Activity of row `row` under a full assignment.
double row_activity(const Row& row, std::span<const std::uint8_t> values);

// Amount by which `activity` violates the row, 0 when satisfied.
double row_violation(const Row& row, double activity);

// Exact objective and feasibility of a full assignment.
Solution evaluate(const BipInstance& instance,
                  std::span<const std::uint8_t> values);

}  // namespace cmsa

#endif  // CMSA_MODEL_HPP_
