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

#include "cmsa/subsolver.hpp"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <string>
#include <system_error>
#include <unordered_set>

#include "cmsa/deadline.hpp"
#include "cmsa/error.hpp"
#include "cmsa/lp.hpp"
#include "cmsa/mps.hpp"
#include "text_util.hpp"

namespace cmsa {
namespace {

double fractionality(double v) { return std::min(v, 1.0 - v); }

BinaryVector round_values(std::span<const double> values) {
  BinaryVector out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) out[j] = values[j] >= 0.5;
  return out;
}

BinaryVector fixed_values(const Propagator& prop) {
  BinaryVector out(prop.domains().size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = prop.value(static_cast<int>(j));
  }
  return out;
}

// Applies the forcings on top of root propagation. False when they cannot
// all hold.
bool apply_forcing(Propagator& prop, const RestrictedProblem& rp) {
  if (prop.status() != PropagationStatus::kConsistent) return false;
  for (std::size_t j = 0; j < rp.forced.size(); ++j) {
    if (rp.forced[j] == kUnfixed) continue;
    const int var = static_cast<int>(j);
    const auto value = static_cast<std::uint8_t>(rp.forced[j]);
    if (prop.is_fixed(var)) {
      if (prop.value(var) != value) return false;
      continue;
    }
    if (prop.fix_and_propagate(var, value).conflict) return false;
  }
  return true;
}

class BranchAndBound {
 public:
  BranchAndBound(const BipInstance& instance, Propagator& prop,
                 const Deadline& deadline, const ImprovementCallback& callback)
      : instance_(instance),
        prop_(prop),
        deadline_(deadline),
        callback_(callback) {}

  void seed(const Solution& incumbent) {
    best_ = incumbent;
    upper_ = incumbent.objective;
  }

  void run() { search(); }

  bool timed_out() const { return timed_out_; }
  long nodes() const { return nodes_; }
  std::optional<Solution>& best() { return best_; }

 private:
  void offer(BinaryVector values) {
    Solution s = evaluate(instance_, values);
    if (s.feasible && s.objective < upper_) {
      upper_ = s.objective;
      best_ = std::move(s);
      if (callback_) callback_(*best_);
    }
  }

  void search() {
    if (deadline_.expired()) {
      timed_out_ = true;
      return;
    }
    ++nodes_;
    if (prop_.num_free() == 0) {
      offer(fixed_values(prop_));
      return;
    }
    const PartialAssignment fixings = prop_.fixings();
    LpSolution lp = solve_lp(instance_, fixings,
                             std::max(1e-3, deadline_.remaining_seconds()));
    if (lp.status == LpStatus::kInfeasible) return;
    if (lp.status == LpStatus::kTimeLimit) {
      timed_out_ = true;
      return;
    }
    if (lp.objective >= upper_ - kPruneTolerance) return;

    int branch = -1;
    double most = -1.0;
    for (int j = 0; j < instance_.num_vars(); ++j) {
      if (prop_.is_fixed(j)) continue;
      const double f = fractionality(lp.values[j]);
      if (f > most) {
        most = f;
        branch = j;
      }
    }
    if (most <= kIntegralityTolerance) {
      BinaryVector rounded = round_values(lp.values);
      Solution s = evaluate(instance_, rounded);
      if (s.feasible) {
        offer(std::move(rounded));
        return;
      }
      // Rounding broke a row by more than the tolerance; keep branching.
    }

    const std::uint8_t first = lp.values[branch] >= 0.5 ? 1 : 0;
    for (std::uint8_t value : {first, static_cast<std::uint8_t>(1 - first)}) {
      if (timed_out_) return;
      prop_.push_mark();
      if (!prop_.fix_and_propagate(branch, value).conflict) search();
      prop_.backtrack_to_mark();
    }
  }

  const BipInstance& instance_;
  Propagator& prop_;
  const Deadline& deadline_;
  const ImprovementCallback& callback_;
  std::optional<Solution> best_;
  double upper_ = std::numeric_limits<double>::infinity();
  bool timed_out_ = false;
  long nodes_ = 0;
};

std::string replace_all(std::string text, std::string_view key,
                        const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
  return text;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') {
      out += "'\\''";
    } else {
      out += ch;
    }
  }
  return out + "'";
}

}  // namespace

RestrictedProblem build_restriction(const BipInstance& instance,
                                    const ComponentPool& pool) {
  if (pool.num_vars() != instance.num_vars()) {
    throw UsageError("pool and instance differ in size");
  }
  RestrictedProblem rp;
  rp.base = &instance;
  rp.forced.assign(instance.num_vars(), kUnfixed);
  for (int j = 0; j < instance.num_vars(); ++j) {
    const bool zero = pool.contains(j, 0);
    const bool one = pool.contains(j, 1);
    if (!zero && !one) {
      throw UsageError("variable " + std::to_string(j) +
                       " has no component in the pool");
    }
    if (zero && one) {
      rp.free_vars.push_back(j);
    } else {
      rp.forced[j] = one ? 1 : 0;
    }
  }
  return rp;
}

RestrictedProblem full_problem(const BipInstance& instance) {
  RestrictedProblem rp;
  rp.base = &instance;
  rp.forced.assign(instance.num_vars(), kUnfixed);
  for (int j = 0; j < instance.num_vars(); ++j) rp.free_vars.push_back(j);
  return rp;
}

bool respects_forcing(const RestrictedProblem& rp,
                      std::span<const std::uint8_t> values) {
  if (values.size() != rp.forced.size()) return false;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (rp.forced[j] != kUnfixed && rp.forced[j] != values[j]) return false;
  }
  return true;
}

SubsolverResult solve_restricted(const RestrictedProblem& rp,
                                 double time_limit_seconds,
                                 const Solution* incumbent,
                                 const ImprovementCallback& on_improvement) {
  if (!(time_limit_seconds > 0.0)) {
    throw UsageError("sub-solver time limit must be positive");
  }
  if (rp.base == nullptr) throw UsageError("restriction has no base instance");
  const BipInstance& instance = *rp.base;
  const Deadline deadline = Deadline::after(time_limit_seconds);

  SubsolverResult result;
  const bool seeded = incumbent != nullptr && incumbent->feasible &&
                      respects_forcing(rp, incumbent->values);
  if (seeded) result.solution = *incumbent;

  Propagator prop(instance);
  if (!apply_forcing(prop, rp)) {
    result.search_complete = true;
    return result;
  }
  BranchAndBound bnb(instance, prop, deadline, on_improvement);
  if (seeded) bnb.seed(*incumbent);
  bnb.run();
  result.solution = std::move(bnb.best());
  result.search_complete = !bnb.timed_out();
  result.nodes = bnb.nodes();
  return result;
}

std::optional<Solution> initial_heuristic(const BipInstance& instance,
                                          double time_limit_seconds) {
  if (!(time_limit_seconds > 0.0)) {
    throw UsageError("heuristic time limit must be positive");
  }
  const Deadline deadline = Deadline::after(time_limit_seconds);
  Propagator prop(instance);
  if (prop.status() != PropagationStatus::kConsistent) return std::nullopt;

  std::optional<LpSolution> lp;
  while (prop.num_free() > 0) {
    if (deadline.expired()) return std::nullopt;
    // The previous LP optimum stays optimal as long as every fixing agrees
    // with it.
    bool stale = !lp.has_value();
    if (lp) {
      for (const TrailEntry& e : prop.trail()) {
        if (std::abs(lp->values[e.var] - e.value) > kIntegralityTolerance) {
          stale = true;
          break;
        }
      }
    }
    if (stale) {
      lp = solve_lp(instance, prop.fixings(),
                    deadline.remaining_seconds() + 1e-3);
      if (lp->status == LpStatus::kInfeasible) return std::nullopt;
      if (lp->status == LpStatus::kTimeLimit && deadline.expired()) {
        return std::nullopt;
      }
      bool integral = true;
      for (double v : lp->values) {
        if (fractionality(v) > kIntegralityTolerance) {
          integral = false;
          break;
        }
      }
      if (integral) {
        Solution s = evaluate(instance, round_values(lp->values));
        if (s.feasible) return s;
      }
    }

    int pick = -1;
    double closest = 2.0;
    for (int j = 0; j < instance.num_vars(); ++j) {
      if (prop.is_fixed(j)) continue;
      const double f = fractionality(lp->values[j]);
      if (f < closest) {
        closest = f;
        pick = j;
      }
    }
    const std::uint8_t value = lp->values[pick] >= 0.5 ? 1 : 0;
    if (prop.fix_and_propagate(pick, value).conflict &&
        prop.fix_and_propagate(pick, 1 - value).conflict) {
      return std::nullopt;
    }
  }
  Solution s = evaluate(instance, fixed_values(prop));
  if (!s.feasible) return std::nullopt;
  return s;
}

BipInstance restricted_instance(const RestrictedProblem& rp) {
  const BipInstance& base = *rp.base;
  std::vector<RowSpec> rows;
  rows.reserve(base.num_rows() + rp.num_forced());
  const auto row_names = base.row_names();
  for (int i = 0; i < base.num_rows(); ++i) {
    const Row& row = base.row(i);
    RowSpec spec{row_names[i], {}, row.sense, row.rhs};
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      spec.entries.emplace_back(row.columns[k], row.coefficients[k]);
    }
    rows.push_back(std::move(spec));
  }
  std::unordered_set<std::string> taken(row_names.begin(), row_names.end());
  for (std::size_t j = 0; j < rp.forced.size(); ++j) {
    if (rp.forced[j] == kUnfixed) continue;
    std::string name = "fix_" + base.var_names()[j];
    while (!taken.insert(name).second) name += "_";
    rows.push_back({std::move(name),
                    {{static_cast<int>(j), 1.0}},
                    RowSense::kEq,
                    static_cast<double>(rp.forced[j])});
  }
  std::vector<double> objective(base.objective().begin(),
                                base.objective().end());
  std::vector<std::string> names(base.var_names().begin(),
                                 base.var_names().end());
  return BipInstance(std::move(names), std::move(objective),
                     ObjectiveSense::kMinimize, std::move(rows), base.name());
}

std::optional<BinaryVector> read_solution_file(
    const BipInstance& instance, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  BinaryVector values(instance.num_vars(), 0);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto tokens = internal::split_whitespace(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) return std::nullopt;
    const int j = instance.find_var(tokens[0]);
    const auto v = internal::parse_double(tokens[1]);
    if (j < 0 || !v) return std::nullopt;
    if (std::abs(*v - 1.0) <= kIntegralityTolerance) {
      values[j] = 1;
    } else if (std::abs(*v) <= kIntegralityTolerance) {
      values[j] = 0;
    } else {
      return std::nullopt;
    }
  }
  return values;
}

SubsolverResult solve_restricted_external(const RestrictedProblem& rp,
                                          const ExternalSolverConfig& config,
                                          double time_limit_seconds) {
  static std::atomic<long> counter{0};
  namespace fs = std::filesystem;
  fs::path dir = config.scratch_dir;
  if (dir.empty()) {
    const char* env = std::getenv("CMSA_SCRATCH_DIR");
    dir = env != nullptr && *env != '\0' ? fs::path(env)
                                         : fs::temp_directory_path();
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  const std::string stem = "cmsa_" + std::to_string(::getpid()) + "_" +
                           std::to_string(counter.fetch_add(1));
  const fs::path input = dir / (stem + ".mps");
  const fs::path output = dir / (stem + ".sol");

  SubsolverResult result;
  write_mps_file(restricted_instance(rp), input);
  fs::remove(output, ec);
  std::string command = config.command_template;
  command = replace_all(command, "{input}", shell_quote(input.string()));
  command = replace_all(command, "{output}", shell_quote(output.string()));
  command = replace_all(command, "{time_limit}",
                        internal::format_double(time_limit_seconds));
  const int status = std::system(command.c_str());
  if (status == 0) {
    if (auto values = read_solution_file(*rp.base, output)) {
      Solution s = evaluate(*rp.base, *values);
      if (s.feasible && respects_forcing(rp, s.values)) {
        result.solution = std::move(s);
      }
    }
  }
  fs::remove(input, ec);
  fs::remove(output, ec);
  return result;
}

}  // namespace cmsa
