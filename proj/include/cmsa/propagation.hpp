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

#ifndef CMSA_PROPAGATION_HPP_
#define CMSA_PROPAGATION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cmsa/model.hpp"

namespace cmsa {

enum class Domain : std::uint8_t { kFree, kFixed0, kFixed1 };
enum class FixReason : std::uint8_t { kRoot, kDecision, kImplication };
enum class PropagationStatus : std::uint8_t { kConsistent, kInfeasible };

// Absolute slack on activity-bound comparisons.
inline constexpr double kPropagationTolerance = 1e-9;

// Entries of a partial assignment: -1 free, 0 or 1 fixed.
using PartialAssignment = std::vector<std::int8_t>;
inline constexpr std::int8_t kUnfixed = -1;

struct TrailEntry {
  int var;
  std::uint8_t value;
  FixReason reason;

  bool operator==(const TrailEntry&) const = default;
};

struct FixResult {
  bool conflict = false;
  std::vector<int> implied;  // variables fixed by implication, in order
};

// Activity-bound propagation over binary domains.
//
// Each row keeps the minimum and maximum activity reachable under the current
// domains. A row whose bounds contradict its sense is a conflict; a free
// variable whose flip to the other extreme would push a bound past the rhs is
// fixed. Touched rows are processed FIFO until no row changes.
//
// Root implications are applied on construction and stay for the lifetime of
// the object. Later fixings are recorded on a trail and undone through marks;
// backtracking restores every activity value exactly as it was.
//
// Holds a reference to the instance, which must outlive the propagator.
class Propagator {
 public:
  explicit Propagator(const BipInstance& instance);

  const BipInstance& instance() const { return *instance_; }
  PropagationStatus status() const { return status_; }

  Domain domain(int var) const { return domains_[var]; }
  bool is_fixed(int var) const { return domains_[var] != Domain::kFree; }
  // Fixed value of `var`; only meaningful when is_fixed(var).
  std::uint8_t value(int var) const {
    return domains_[var] == Domain::kFixed1 ? 1 : 0;
  }
  std::span<const Domain> domains() const { return domains_; }
  int num_free() const { return num_free_; }

  double min_activity(int row) const { return min_activity_[row]; }
  double max_activity(int row) const { return max_activity_[row]; }

  std::span<const TrailEntry> trail() const { return trail_; }

  // Current domains as -1/0/1.
  PartialAssignment fixings() const;

  // Fixes `var` to `value` and propagates to a fixpoint. On conflict the
  // state is left exactly as before the call. Throws UsageError if the state
  // is infeasible or `var` is already fixed.
  FixResult fix_and_propagate(int var, std::uint8_t value);

  void push_mark();
  // Undoes everything after the most recent mark and pops it. Throws
  // UsageError when no mark exists.
  void backtrack_to_mark();
  std::size_t num_marks() const { return marks_.size(); }

  struct Snapshot {
    std::vector<Domain> domains;
    std::vector<double> min_activity;
    std::vector<double> max_activity;
    std::vector<TrailEntry> trail;
    std::size_t marks;
    PropagationStatus status;

    bool operator==(const Snapshot&) const = default;
  };
  Snapshot snapshot() const;

 private:
  struct Mark {
    std::size_t trail_size;
    std::size_t undo_size;
    PropagationStatus status;
  };
  struct ActivityUndo {
    int row;
    double min_activity;
    double max_activity;
  };

  void assign(int var, std::uint8_t value, FixReason reason);
  void enqueue(int row);
  // Returns false on conflict. Clears the queue either way.
  bool propagate(FixReason reason, std::vector<int>* implied);
  bool propagate_row(int row, FixReason reason, std::vector<int>* implied);
  void undo_to(const Mark& mark);

  const BipInstance* instance_;
  std::vector<Domain> domains_;
  std::vector<double> min_activity_;
  std::vector<double> max_activity_;
  std::vector<double> max_abs_coef_;
  std::vector<TrailEntry> trail_;
  std::vector<ActivityUndo> undo_;
  std::vector<Mark> marks_;
  std::vector<int> queue_;
  std::size_t queue_head_ = 0;
  std::vector<std::uint8_t> queued_;
  PropagationStatus status_ = PropagationStatus::kConsistent;
  int num_free_ = 0;
};

}  // namespace cmsa

#endif  // CMSA_PROPAGATION_HPP_
