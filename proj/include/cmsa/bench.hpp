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

#ifndef CMSA_BENCH_HPP_
#define CMSA_BENCH_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmsa/cmsa.hpp"
#include "cmsa/model.hpp"

namespace cmsa {

enum class Algorithm : std::uint8_t { kCmsa, kCmsaCp, kSubsolverOnly };

std::string_view algorithm_name(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

// Exit codes of a single run.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNoSolution = 4;

struct RunConfig {
  Algorithm algorithm = Algorithm::kCmsa;
  int preset = 3;
  // Explicit determinism-rate bounds; override `preset` when set.
  std::optional<Interval> d_rate;
  std::uint64_t seed = 1;
  double total_budget = 1000.0;
  int n_a = 5;
  int age_max = 1;
  double t_lp = 10.0;
  double t_sub_lb = 30.0;
  double t_sub_ub = 100.0;
  long max_iterations = 0;
  bool merge_infeasible = true;
  bool stop_when_proven = true;
  std::string external_solver_cmd;

  // Preset label for reports: 0 when explicit bounds are in use.
  int preset_label() const { return d_rate ? 0 : preset; }
};

CmsaParams make_params(const RunConfig& config);

// Runs the configured algorithm on one instance.
RunResult execute(const BipInstance& instance, const RunConfig& config);

int exit_code(RunStatus status);
std::string_view status_name(RunStatus status);

// `elapsed_s,objective,iteration,event`, objectives in the input's sense.
void write_trace_csv(const BipInstance& instance, const AnytimeTrace& trace,
                     std::ostream& out);
// Trace without the time column, for determinism comparisons.
std::string trace_fingerprint(const AnytimeTrace& trace);

// `# objective <v>` header, then `<var name> <0|1>` per variable.
void write_solution_file(const BipInstance& instance, const Solution& solution,
                         std::ostream& out);

// One-line JSON summary of a run.
std::string summary_line(const BipInstance& instance, std::string_view label,
                         const RunConfig& config, const RunResult& result);

struct CampaignSpec {
  std::vector<std::filesystem::path> instances;
  std::vector<Algorithm> algorithms;
  std::vector<int> presets;
  std::vector<std::uint64_t> seeds;
  RunConfig base;  // algorithm, preset and seed are overridden per run
  int jobs = 1;
  std::filesystem::path trace_dir;  // empty: no trace files
};

struct CampaignRun {
  std::string instance;
  Algorithm algorithm = Algorithm::kCmsa;
  int preset = 0;  // 0 for subsolver-only or explicit bounds
  std::uint64_t seed = 0;
  bool ok = false;
  double objective = 0.0;  // reported sense, valid when ok
  double internal_objective = 0.0;
  std::string trace_fingerprint;
  std::string error;
};

struct PresetSummary {
  std::string instance;
  Algorithm algorithm = Algorithm::kCmsa;
  int preset = 0;
  int ok = 0;
  int failed = 0;
  std::optional<double> best;  // reported sense
  std::optional<double> avg;
  double best_internal = 0.0;
};

// Best configuration per (instance, algorithm): lowest best-of-seeds, ties to
// the lowest preset.
struct BestConfig {
  std::string instance;
  Algorithm algorithm = Algorithm::kCmsa;
  std::optional<double> best;
  std::optional<double> avg;
  int preset = 0;
};

struct CampaignResult {
  std::vector<CampaignRun>
      runs;  // sorted by (instance, algorithm, preset, seed)
  std::vector<PresetSummary> per_preset;
  std::vector<BestConfig> best_configs;
};

// Runs every (instance, algorithm, preset, seed) combination, `jobs` at a
// time. Failed runs are reported on `warnings` and left out of aggregates.
CampaignResult run_campaign(const CampaignSpec& spec, std::ostream* warnings);

// Two CSV blocks separated by a blank line: per-preset aggregates, then the
// best configuration per instance and algorithm.
void write_campaign_tables(const CampaignResult& result, std::ostream& out);

// Parses "1,2,5-8" into {1,2,5,6,7,8}. Throws UsageError on bad input.
std::vector<std::uint64_t> parse_id_list(std::string_view text);

}  // namespace cmsa

#endif  // CMSA_BENCH_HPP_
