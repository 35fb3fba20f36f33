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

#include "cmsa/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cmsa/deadline.hpp"
#include "cmsa/error.hpp"

namespace cmsa {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kPhaseOneTol = 1e-8;
constexpr double kRatioTieTol = 1e-12;
constexpr double kSingularTol = 1e-11;
constexpr int kRefactorInterval = 100;
constexpr int kMaxCleanupRounds = 3;

struct SparseEntry {
  int index;
  double value;
};

enum class Outcome { kOptimal, kTimeLimit, kUnbounded };

// Simplex over the free columns and the rows that still contain one.
//
// Variables: structurals [0, ns), one slack per row [ns, ns+m), one
// artificial per row [ns+m, ns+2m). Row r reads
//   sum_k a_rk x_k + s_r + sign_r * t_r = b_r.
// Unused artificials are pinned to [0, 0] and never enter.
class BoundedSimplex {
 public:
  BoundedSimplex(std::vector<std::vector<SparseEntry>> columns,
                 std::vector<std::vector<SparseEntry>> rows,
                 std::vector<double> rhs, std::vector<RowSense> senses,
                 std::vector<double> cost, const Deadline& deadline)
      : ns_(static_cast<int>(columns.size())),
        m_(static_cast<int>(rows.size())),
        columns_(std::move(columns)),
        rows_(std::move(rows)),
        rhs_(std::move(rhs)),
        cost_(std::move(cost)),
        deadline_(deadline) {
    const int total = ns_ + 2 * m_;
    lower_.assign(total, 0.0);
    upper_.assign(total, 0.0);
    x_.assign(total, 0.0);
    at_upper_.assign(total, 0);
    position_.assign(total, -1);
    sign_.assign(m_, 1.0);
    head_.assign(m_, -1);
    for (int k = 0; k < ns_; ++k) upper_[k] = 1.0;
    for (int r = 0; r < m_; ++r) {
      const int s = ns_ + r;
      switch (senses[r]) {
        case RowSense::kLe:
          lower_[s] = 0.0;
          upper_[s] = kInf;
          break;
        case RowSense::kGe:
          lower_[s] = -kInf;
          upper_[s] = 0.0;
          break;
        case RowSense::kEq:
          break;
      }
    }
    crash();
  }

  LpStatus solve(long* iterations) {
    LpStatus status = LpStatus::kOptimal;
    if (num_artificials_ > 0) {
      std::vector<double> phase_one(ns_ + 2 * m_, 0.0);
      for (int r = 0; r < m_; ++r) {
        if (upper_[ns_ + m_ + r] > 0.0) phase_one[ns_ + m_ + r] = 1.0;
      }
      const Outcome outcome = run(phase_one);
      if (outcome == Outcome::kTimeLimit) {
        *iterations = iterations_;
        return LpStatus::kTimeLimit;
      }
      double infeasibility = 0.0;
      for (int r = 0; r < m_; ++r) infeasibility += x_[ns_ + m_ + r];
      if (infeasibility > kPhaseOneTol) {
        *iterations = iterations_;
        return LpStatus::kInfeasible;
      }
      for (int r = 0; r < m_; ++r) {
        const int t = ns_ + m_ + r;
        upper_[t] = 0.0;
        if (position_[t] < 0) {
          x_[t] = 0.0;
          at_upper_[t] = 0;
        }
      }
    }
    phase_two_ = true;
    std::vector<double> phase_two(ns_ + 2 * m_, 0.0);
    std::copy(cost_.begin(), cost_.end(), phase_two.begin());
    const Outcome outcome = run(phase_two);
    if (outcome == Outcome::kTimeLimit) status = LpStatus::kTimeLimit;
    if (outcome == Outcome::kUnbounded) {
      // Every structural is boxed, so this only happens on numerical
      // breakdown.
      status = LpStatus::kTimeLimit;
    }
    *iterations = iterations_;
    return status;
  }

  bool in_phase_two() const { return phase_two_; }

  double structural(int k) const { return std::clamp(x_[k], 0.0, 1.0); }

 private:
  // Picks a starting bound for every structural so that as few rows as
  // possible need an artificial, then builds the unit starting basis.
  void crash() {
    std::vector<std::uint8_t> best_start;
    int best_count = m_ + 1;
    for (int variant = 0; variant < 3; ++variant) {
      std::vector<std::uint8_t> start(ns_);
      for (int k = 0; k < ns_; ++k) {
        start[k] = variant == 0 ? (cost_[k] < 0.0) : variant == 1 ? 0 : 1;
      }
      int count = 0;
      for (int r = 0; r < m_; ++r) {
        double activity = 0.0;
        for (const SparseEntry& e : rows_[r]) {
          if (start[e.index]) activity += e.value;
        }
        const double slack = rhs_[r] - activity;
        const int s = ns_ + r;
        if (slack < lower_[s] - kPrimalTol || slack > upper_[s] + kPrimalTol) {
          ++count;
        }
      }
      if (count < best_count) {
        best_count = count;
        best_start = std::move(start);
      }
    }
    for (int k = 0; k < ns_; ++k) {
      at_upper_[k] = best_start[k];
      x_[k] = best_start[k] ? 1.0 : 0.0;
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      double activity = 0.0;
      for (const SparseEntry& e : rows_[r]) activity += e.value * x_[e.index];
      const double residual = rhs_[r] - activity;
      const int s = ns_ + r;
      const int t = ns_ + m_ + r;
      if (residual >= lower_[s] - kPrimalTol &&
          residual <= upper_[s] + kPrimalTol) {
        set_basic(r, s);
        x_[s] = residual;
        binv_at(r, r) = 1.0;
      } else {
        const double bound = residual < lower_[s] ? lower_[s] : upper_[s];
        x_[s] = bound;
        at_upper_[s] = residual > upper_[s] ? 1 : 0;
        sign_[r] = residual - bound >= 0.0 ? 1.0 : -1.0;
        upper_[t] = kInf;
        x_[t] = std::abs(residual - bound);
        set_basic(r, t);
        binv_at(r, r) = sign_[r];
        ++num_artificials_;
      }
    }
  }

  void set_basic(int pos, int var) {
    head_[pos] = var;
    position_[var] = pos;
  }

  // Column-major: entry (basis position p, row r).
  double& binv_at(int p, int r) {
    return binv_[static_cast<std::size_t>(r) * m_ + p];
  }
  double binv_at(int p, int r) const {
    return binv_[static_cast<std::size_t>(r) * m_ + p];
  }

  template <typename F>
  void for_column(int var, F&& f) const {
    if (var < ns_) {
      for (const SparseEntry& e : columns_[var]) f(e.index, e.value);
    } else if (var < ns_ + m_) {
      f(var - ns_, 1.0);
    } else {
      f(var - ns_ - m_, sign_[var - ns_ - m_]);
    }
  }

  Outcome run(const std::vector<double>& cost) {
    std::vector<double> y(m_);
    std::vector<double> alpha(m_);
    long degenerate_run = 0;
    const long bland_threshold = 5L * (ns_ + m_);
    int cleanup_rounds = 0;
    for (;;) {
      if (deadline_.expired()) return Outcome::kTimeLimit;
      if (pivots_since_refactor_ >= kRefactorInterval) refactor();

      // Duals: y = c_B^T B^-1.
      std::fill(y.begin(), y.end(), 0.0);
      for (int p = 0; p < m_; ++p) {
        const double cb = cost[head_[p]];
        if (cb == 0.0) continue;
        for (int r = 0; r < m_; ++r) y[r] += cb * binv_at(p, r);
      }

      const bool bland = degenerate_run >= bland_threshold;
      int entering = -1;
      double entering_dir = 0.0;
      double best_score = 0.0;
      const int total = ns_ + 2 * m_;
      for (int k = 0; k < total; ++k) {
        if (position_[k] >= 0 || lower_[k] == upper_[k]) continue;
        double d = cost[k];
        for_column(k, [&](int r, double a) { d -= y[r] * a; });
        double dir = 0.0;
        if (!at_upper_[k] && d < -kDualTol) {
          dir = 1.0;
        } else if (at_upper_[k] && d > kDualTol) {
          dir = -1.0;
        } else {
          continue;
        }
        if (bland) {
          entering = k;
          entering_dir = dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          entering = k;
          entering_dir = dir;
        }
      }

      if (entering < 0) {
        if (cleanup_rounds < kMaxCleanupRounds && pivots_since_refactor_ > 0) {
          // Confirm optimality on a fresh factorization.
          ++cleanup_rounds;
          refactor();
          continue;
        }
        return Outcome::kOptimal;
      }

      // alpha = B^-1 a_entering.
      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_column(entering, [&](int r, double a) {
        const double* col = &binv_[static_cast<std::size_t>(r) * m_];
        for (int p = 0; p < m_; ++p) alpha[p] += a * col[p];
      });

      // Ratio test. Basic p moves at rate -dir * alpha[p].
      double theta = upper_[entering] - lower_[entering];
      for (int p = 0; p < m_; ++p) {
        const double rate = -entering_dir * alpha[p];
        if (std::abs(alpha[p]) < kPivotTol) continue;
        const int var = head_[p];
        double t;
        if (rate < 0.0 && lower_[var] > -kInf) {
          t = (x_[var] - lower_[var]) / -rate;
        } else if (rate > 0.0 && upper_[var] < kInf) {
          t = (upper_[var] - x_[var]) / rate;
        } else {
          continue;
        }
        theta = std::min(theta, std::max(t, 0.0));
      }
      if (theta == kInf) return Outcome::kUnbounded;

      int leaving = -1;
      const bool flip =
          theta >= upper_[entering] - lower_[entering] - kRatioTieTol &&
          upper_[entering] < kInf;
      if (!flip) {
        double best_alpha = 0.0;
        for (int p = 0; p < m_; ++p) {
          if (std::abs(alpha[p]) < kPivotTol) continue;
          const double rate = -entering_dir * alpha[p];
          const int var = head_[p];
          double t;
          if (rate < 0.0 && lower_[var] > -kInf) {
            t = (x_[var] - lower_[var]) / -rate;
          } else if (rate > 0.0 && upper_[var] < kInf) {
            t = (upper_[var] - x_[var]) / rate;
          } else {
            continue;
          }
          if (std::max(t, 0.0) > theta + kRatioTieTol) continue;
          if (bland ? (leaving < 0 || var < head_[leaving])
                    : std::abs(alpha[p]) > best_alpha) {
            leaving = p;
            best_alpha = std::abs(alpha[p]);
          }
        }
      }

      ++iterations_;
      degenerate_run = theta < kRatioTieTol ? degenerate_run + 1 : 0;
      x_[entering] += entering_dir * theta;
      for (int p = 0; p < m_; ++p) {
        if (alpha[p] != 0.0) x_[head_[p]] -= entering_dir * theta * alpha[p];
      }

      if (leaving < 0) {
        // Bound flip.
        at_upper_[entering] = entering_dir > 0.0 ? 1 : 0;
        x_[entering] =
            at_upper_[entering] ? upper_[entering] : lower_[entering];
        continue;
      }

      const int out = head_[leaving];
      const double rate = -entering_dir * alpha[leaving];
      at_upper_[out] = rate > 0.0 ? 1 : 0;
      x_[out] = at_upper_[out] ? upper_[out] : lower_[out];
      position_[out] = -1;
      set_basic(leaving, entering);
      at_upper_[entering] = 0;
      pivot(leaving, alpha);
      ++pivots_since_refactor_;
    }
  }

  // Eta update of the inverse for a pivot in basis position `p`.
  void pivot(int p, const std::vector<double>& alpha) {
    const double inv = 1.0 / alpha[p];
    for (int r = 0; r < m_; ++r) {
      double* col = &binv_[static_cast<std::size_t>(r) * m_];
      const double prow = col[p];
      if (prow == 0.0) continue;
      const double scaled = prow * inv;
      for (int q = 0; q < m_; ++q) col[q] -= alpha[q] * scaled;
      col[p] = scaled;
    }
  }

  // Rebuilds B^-1 from the basis. Unit columns (slacks, artificials) make B
  // block triangular, so only the structural block M is inverted densely:
  //   B = [diag(sign) E; 0 M]  =>  B^-1 = [diag(sign) -diag(sign) E M^-1;
  //                                       0 M^-1].
  // Then recomputes the basic values.
  void refactor() {
    pivots_since_refactor_ = 0;
    std::vector<int> unit_row_of(m_, -1);  // position -> row for unit columns
    std::vector<std::uint8_t> row_covered(m_, 0);
    std::vector<int> structural_pos;
    for (int p = 0; p < m_; ++p) {
      const int var = head_[p];
      if (var < ns_) {
        structural_pos.push_back(p);
      } else {
        const int r = var < ns_ + m_ ? var - ns_ : var - ns_ - m_;
        unit_row_of[p] = r;
        row_covered[r] = 1;
      }
    }
    std::vector<int> open_rows;
    std::vector<int> open_index(m_, -1);
    for (int r = 0; r < m_; ++r) {
      if (!row_covered[r]) {
        open_index[r] = static_cast<int>(open_rows.size());
        open_rows.push_back(r);
      }
    }
    const int k = static_cast<int>(structural_pos.size());
    if (static_cast<int>(open_rows.size()) != k) return;  // keep eta inverse

    // Gauss-Jordan on [M | I].
    std::vector<double> mat(static_cast<std::size_t>(k) * k, 0.0);
    std::vector<double> inv(static_cast<std::size_t>(k) * k, 0.0);
    for (int l = 0; l < k; ++l) {
      for (const SparseEntry& e : columns_[head_[structural_pos[l]]]) {
        const int t = open_index[e.index];
        if (t >= 0) mat[static_cast<std::size_t>(t) * k + l] = e.value;
      }
      inv[static_cast<std::size_t>(l) * k + l] = 1.0;
    }
    for (int c = 0; c < k; ++c) {
      int piv = c;
      for (int i = c + 1; i < k; ++i) {
        if (std::abs(mat[static_cast<std::size_t>(i) * k + c]) >
            std::abs(mat[static_cast<std::size_t>(piv) * k + c])) {
          piv = i;
        }
      }
      if (std::abs(mat[static_cast<std::size_t>(piv) * k + c]) < kSingularTol) {
        return;  // numerically singular; keep the eta inverse
      }
      if (piv != c) {
        for (int j = 0; j < k; ++j) {
          std::swap(mat[static_cast<std::size_t>(piv) * k + j],
                    mat[static_cast<std::size_t>(c) * k + j]);
          std::swap(inv[static_cast<std::size_t>(piv) * k + j],
                    inv[static_cast<std::size_t>(c) * k + j]);
        }
      }
      const double d = 1.0 / mat[static_cast<std::size_t>(c) * k + c];
      for (int j = 0; j < k; ++j) {
        mat[static_cast<std::size_t>(c) * k + j] *= d;
        inv[static_cast<std::size_t>(c) * k + j] *= d;
      }
      for (int i = 0; i < k; ++i) {
        const double f = mat[static_cast<std::size_t>(i) * k + c];
        if (i == c || f == 0.0) continue;
        for (int j = 0; j < k; ++j) {
          mat[static_cast<std::size_t>(i) * k + j] -=
              f * mat[static_cast<std::size_t>(c) * k + j];
          inv[static_cast<std::size_t>(i) * k + j] -=
              f * inv[static_cast<std::size_t>(c) * k + j];
        }
      }
    }
    // inv = M^-1 with rows indexed by structural slot l, columns by open row t.

    std::fill(binv_.begin(), binv_.end(), 0.0);
    for (int l = 0; l < k; ++l) {
      for (int t = 0; t < k; ++t) {
        binv_at(structural_pos[l], open_rows[t]) =
            inv[static_cast<std::size_t>(l) * k + t];
      }
    }
    std::vector<int> slot_of_var(ns_, -1);
    for (int l = 0; l < k; ++l) slot_of_var[head_[structural_pos[l]]] = l;
    for (int p = 0; p < m_; ++p) {
      const int r = unit_row_of[p];
      if (r < 0) continue;
      const double sigma = head_[p] < ns_ + m_ ? 1.0 : sign_[r];
      binv_at(p, r) = sigma;
      for (const SparseEntry& e : rows_[r]) {
        const int l = slot_of_var[e.index];
        if (l < 0) continue;
        for (int t = 0; t < k; ++t) {
          binv_at(p, open_rows[t]) -=
              sigma * e.value * inv[static_cast<std::size_t>(l) * k + t];
        }
      }
    }
    recompute_basics();
  }

  void recompute_basics() {
    std::vector<double> residual(rhs_);
    const int total = ns_ + 2 * m_;
    for (int k = 0; k < total; ++k) {
      if (position_[k] >= 0 || x_[k] == 0.0) continue;
      for_column(k, [&](int r, double a) { residual[r] -= a * x_[k]; });
    }
    for (int p = 0; p < m_; ++p) {
      double v = 0.0;
      for (int r = 0; r < m_; ++r) v += binv_at(p, r) * residual[r];
      x_[head_[p]] = v;
    }
  }

  const int ns_;
  const int m_;
  std::vector<std::vector<SparseEntry>> columns_;
  std::vector<std::vector<SparseEntry>> rows_;
  std::vector<double> rhs_;
  std::vector<double> cost_;
  const Deadline& deadline_;

  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<std::uint8_t> at_upper_;
  std::vector<int> position_;
  std::vector<double> sign_;
  std::vector<int> head_;
  std::vector<double> binv_;
  int num_artificials_ = 0;
  int pivots_since_refactor_ = 0;
  long iterations_ = 0;
  bool phase_two_ = false;
};

}  // namespace

LpSolution solve_lp(const BipInstance& instance,
                    std::span<const std::int8_t> fixings,
                    double time_limit_seconds) {
  const int n = instance.num_vars();
  if (!(time_limit_seconds > 0.0)) {
    throw UsageError("LP time limit must be positive");
  }
  if (!fixings.empty() && static_cast<int>(fixings.size()) != n) {
    throw UsageError("fixings have length " + std::to_string(fixings.size()) +
                     ", expected " + std::to_string(n));
  }
  for (std::int8_t f : fixings) {
    if (f < -1 || f > 1) throw UsageError("fixing entries must be -1, 0 or 1");
  }
  const Deadline deadline = Deadline::after(time_limit_seconds);
  auto fixed_value = [&](int j) -> int {
    return fixings.empty() ? -1 : fixings[j];
  };

  LpSolution out;
  out.values.assign(n, 0.0);

  std::vector<int> slot(n, -1);
  std::vector<int> free_vars;
  std::vector<double> cost;
  for (int j = 0; j < n; ++j) {
    if (fixed_value(j) < 0) {
      slot[j] = static_cast<int>(free_vars.size());
      free_vars.push_back(j);
      cost.push_back(instance.objective()[j]);
    } else {
      out.values[j] = fixed_value(j);
    }
  }

  std::vector<std::vector<SparseEntry>> columns(free_vars.size());
  std::vector<std::vector<SparseEntry>> rows;
  std::vector<double> rhs;
  std::vector<RowSense> senses;
  for (const Row& row : instance.rows()) {
    double fixed_activity = 0.0;
    std::vector<SparseEntry> entries;
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      const int j = row.columns[k];
      if (slot[j] >= 0) {
        entries.push_back({slot[j], row.coefficients[k]});
      } else if (fixed_value(j) == 1) {
        fixed_activity += row.coefficients[k];
      }
    }
    if (entries.empty()) {
      if (row_violation(row, fixed_activity) > kFeasibilityTolerance) {
        out.status = LpStatus::kInfeasible;
        return out;
      }
      continue;
    }
    const int r = static_cast<int>(rows.size());
    for (const SparseEntry& e : entries)
      columns[e.index].push_back({r, e.value});
    rows.push_back(std::move(entries));
    rhs.push_back(row.rhs - fixed_activity);
    senses.push_back(row.sense);
  }

  if (rows.empty()) {
    // Only the box remains.
    for (std::size_t k = 0; k < free_vars.size(); ++k) {
      out.values[free_vars[k]] = cost[k] < 0.0 ? 1.0 : 0.0;
    }
    out.status = LpStatus::kOptimal;
  } else {
    BoundedSimplex simplex(std::move(columns), std::move(rows), std::move(rhs),
                           std::move(senses), cost, deadline);
    out.status = simplex.solve(&out.iterations);
    if (out.status == LpStatus::kInfeasible) return out;
    const bool usable =
        out.status == LpStatus::kOptimal || simplex.in_phase_two();
    for (std::size_t k = 0; k < free_vars.size(); ++k) {
      out.values[free_vars[k]] = usable ? simplex.structural(k) : 0.5;
    }
  }
  const auto c = instance.objective();
  for (int j = 0; j < n; ++j) out.objective += c[j] * out.values[j];
  return out;
}

}  // namespace cmsa
