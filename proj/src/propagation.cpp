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

#include "cmsa/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "cmsa/error.hpp"

namespace cmsa {

Propagator::Propagator(const BipInstance& instance)
    : instance_(&instance),
      domains_(instance.num_vars(), Domain::kFree),
      min_activity_(instance.num_rows(), 0.0),
      max_activity_(instance.num_rows(), 0.0),
      max_abs_coef_(instance.num_rows(), 0.0),
      queued_(instance.num_rows(), 0),
      num_free_(instance.num_vars()) {
  for (int i = 0; i < instance.num_rows(); ++i) {
    for (double a : instance.row(i).coefficients) {
      min_activity_[i] += std::min(0.0, a);
      max_activity_[i] += std::max(0.0, a);
      max_abs_coef_[i] = std::max(max_abs_coef_[i], std::abs(a));
    }
    enqueue(i);
  }
  if (!propagate(FixReason::kRoot, nullptr)) {
    status_ = PropagationStatus::kInfeasible;
  }
  // Root work is permanent.
  undo_.clear();
}

PartialAssignment Propagator::fixings() const {
  PartialAssignment out(domains_.size(), kUnfixed);
  for (std::size_t j = 0; j < domains_.size(); ++j) {
    if (domains_[j] != Domain::kFree) {
      out[j] = domains_[j] == Domain::kFixed1 ? 1 : 0;
    }
  }
  return out;
}

void Propagator::enqueue(int row) {
  if (!queued_[row]) {
    queued_[row] = 1;
    queue_.push_back(row);
  }
}

void Propagator::assign(int var, std::uint8_t value, FixReason reason) {
  domains_[var] = value ? Domain::kFixed1 : Domain::kFixed0;
  --num_free_;
  trail_.push_back({var, value, reason});
  for (const ColumnEntry& e : instance_->column(var)) {
    undo_.push_back({e.row, min_activity_[e.row], max_activity_[e.row]});
    const double a = e.coefficient;
    const double fixed = value ? a : 0.0;
    min_activity_[e.row] += fixed - std::min(0.0, a);
    max_activity_[e.row] += fixed - std::max(0.0, a);
    enqueue(e.row);
  }
}

bool Propagator::propagate_row(int i, FixReason reason,
                               std::vector<int>* implied) {
  const Row& row = instance_->row(i);
  const double b = row.rhs;
  constexpr double eps = kPropagationTolerance;

  if (row.sense != RowSense::kGe) {
    if (min_activity_[i] > b + eps) return false;
    if (min_activity_[i] + max_abs_coef_[i] > b + eps) {
      for (std::size_t k = 0; k < row.columns.size(); ++k) {
        const int j = row.columns[k];
        const double a = row.coefficients[k];
        if (domains_[j] != Domain::kFree) continue;
        // Taking the value that does not minimize a*x_j raises the minimum
        // activity by |a|.
        if (min_activity_[i] + std::abs(a) > b + eps) {
          assign(j, a > 0 ? 0 : 1, reason);
          if (implied) implied->push_back(j);
        }
      }
    }
  }
  if (row.sense != RowSense::kLe) {
    if (max_activity_[i] < b - eps) return false;
    if (max_activity_[i] - max_abs_coef_[i] < b - eps) {
      for (std::size_t k = 0; k < row.columns.size(); ++k) {
        const int j = row.columns[k];
        const double a = row.coefficients[k];
        if (domains_[j] != Domain::kFree) continue;
        if (max_activity_[i] - std::abs(a) < b - eps) {
          assign(j, a > 0 ? 1 : 0, reason);
          if (implied) implied->push_back(j);
        }
      }
    }
  }
  return true;
}

bool Propagator::propagate(FixReason reason, std::vector<int>* implied) {
  bool ok = true;
  while (ok && queue_head_ < queue_.size()) {
    const int row = queue_[queue_head_++];
    queued_[row] = 0;
    ok = propagate_row(row, reason, implied);
  }
  for (std::size_t k = queue_head_; k < queue_.size(); ++k) {
    queued_[queue_[k]] = 0;
  }
  queue_.clear();
  queue_head_ = 0;
  return ok;
}

FixResult Propagator::fix_and_propagate(int var, std::uint8_t value) {
  if (status_ != PropagationStatus::kConsistent) {
    throw UsageError("fix_and_propagate on an infeasible state");
  }
  if (var < 0 || var >= instance_->num_vars()) {
    throw UsageError("variable index out of range");
  }
  if (value > 1) throw UsageError("binary value expected");
  if (domains_[var] != Domain::kFree) {
    throw UsageError("variable " + std::to_string(var) + " is already fixed");
  }
  const Mark mark{trail_.size(), undo_.size(), status_};
  FixResult result;
  assign(var, value, FixReason::kDecision);
  if (!propagate(FixReason::kImplication, &result.implied)) {
    undo_to(mark);
    result.conflict = true;
    result.implied.clear();
  }
  return result;
}

void Propagator::push_mark() {
  marks_.push_back({trail_.size(), undo_.size(), status_});
}

void Propagator::backtrack_to_mark() {
  if (marks_.empty()) throw UsageError("backtrack without a mark");
  const Mark mark = marks_.back();
  marks_.pop_back();
  undo_to(mark);
}

void Propagator::undo_to(const Mark& mark) {
  while (undo_.size() > mark.undo_size) {
    const ActivityUndo& u = undo_.back();
    min_activity_[u.row] = u.min_activity;
    max_activity_[u.row] = u.max_activity;
    undo_.pop_back();
  }
  while (trail_.size() > mark.trail_size) {
    domains_[trail_.back().var] = Domain::kFree;
    ++num_free_;
    trail_.pop_back();
  }
  status_ = mark.status;
}

Propagator::Snapshot Propagator::snapshot() const {
  return {domains_, min_activity_, max_activity_,
          trail_,   marks_.size(), status_};
}

}  // namespace cmsa
