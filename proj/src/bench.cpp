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

#include "cmsa/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "cmsa/error.hpp"
#include "cmsa/mps.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace cmsa {
namespace {

using internal::format_double;

std::string_view event_name(TraceEvent event) {
  return event == TraceEvent::kInitialHeuristic ? "INITIAL_HEURISTIC"
                                                : "SUBSOLVER_IMPROVEMENT";
}

std::string format_seconds(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", seconds);
  return buf;
}

std::string trace_file_name(const std::string& instance, Algorithm algorithm,
                            int preset, std::uint64_t seed) {
  return instance + "_" + std::string(algorithm_name(algorithm)) + "_p" +
         std::to_string(preset) + "_s" + std::to_string(seed) + ".csv";
}

}  // namespace

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kCmsa:
      return "cmsa";
    case Algorithm::kCmsaCp:
      return "cmsa-cp";
    case Algorithm::kSubsolverOnly:
      return "subsolver-only";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "cmsa") return Algorithm::kCmsa;
  if (name == "cmsa-cp") return Algorithm::kCmsaCp;
  if (name == "subsolver-only") return Algorithm::kSubsolverOnly;
  return std::nullopt;
}

CmsaParams make_params(const RunConfig& config) {
  CmsaParams params;
  const Interval d_rate =
      config.d_rate ? *config.d_rate : preset_d_rate(config.preset);
  params.n_a = config.n_a;
  params.age_max = config.age_max;
  params.t_lp = config.t_lp;
  params.d_rate_lb = d_rate.lower;
  params.d_rate_ub = d_rate.upper;
  params.t_sub_lb = config.t_sub_lb;
  params.t_sub_ub = config.t_sub_ub;
  params.total_budget = config.total_budget;
  params.seed = config.seed;
  params.cp_enabled = config.algorithm == Algorithm::kCmsaCp;
  params.merge_infeasible = config.merge_infeasible;
  params.stop_when_proven = config.stop_when_proven;
  params.max_iterations = config.max_iterations;
  params.external_solver_cmd = config.external_solver_cmd;
  return params;
}

RunResult execute(const BipInstance& instance, const RunConfig& config) {
  if (config.algorithm == Algorithm::kSubsolverOnly) {
    return run_subsolver_only(instance, config.total_budget);
  }
  return run_cmsa(instance, make_params(config));
}

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::kSolutionFound:
      return kExitOk;
    case RunStatus::kInfeasibleProven:
      return kExitInfeasible;
    case RunStatus::kNoSolution:
      return kExitNoSolution;
  }
  return kExitNoSolution;
}

std::string_view status_name(RunStatus status) {
  switch (status) {
    case RunStatus::kSolutionFound:
      return "SOLUTION_FOUND";
    case RunStatus::kInfeasibleProven:
      return "INFEASIBLE_PROVEN";
    case RunStatus::kNoSolution:
      return "NO_SOLUTION";
  }
  return "?";
}

void write_trace_csv(const BipInstance& instance, const AnytimeTrace& trace,
                     std::ostream& out) {
  out << "elapsed_s,objective,iteration,event\n";
  for (const TracePoint& p : trace.points) {
    out << format_seconds(p.elapsed_seconds) << ','
        << format_double(instance.reported_objective(p.objective)) << ','
        << p.iteration << ',' << event_name(p.event) << '\n';
  }
}

std::string trace_fingerprint(const AnytimeTrace& trace) {
  std::string out;
  for (const TracePoint& p : trace.points) {
    out += format_double(p.objective) + ',' + std::to_string(p.iteration) +
           ',' + std::string(event_name(p.event)) + ';';
  }
  return out;
}

void write_solution_file(const BipInstance& instance, const Solution& solution,
                         std::ostream& out) {
  out << "# objective "
      << format_double(instance.reported_objective(solution.objective)) << "\n";
  out << "# feasible " << (solution.feasible ? 1 : 0) << "\n";
  const auto names = instance.var_names();
  for (int j = 0; j < instance.num_vars(); ++j) {
    out << names[j] << ' ' << static_cast<int>(solution.values[j]) << '\n';
  }
}

std::string summary_line(const BipInstance& instance, std::string_view label,
                         const RunConfig& config, const RunResult& result) {
  nlohmann::ordered_json j;
  j["instance"] = std::string(label);
  j["algorithm"] = std::string(algorithm_name(config.algorithm));
  j["preset"] =
      config.algorithm == Algorithm::kSubsolverOnly ? 0 : config.preset_label();
  j["seed"] = config.seed;
  j["status"] = std::string(status_name(result.status));
  if (result.best) {
    j["objective"] = instance.reported_objective(result.best->objective);
  } else {
    j["objective"] = nullptr;
  }
  j["feasible"] = result.best.has_value() && result.best->feasible;
  j["iterations"] = result.stats.iterations;
  j["proven_optimal"] = result.stats.proven_optimal;
  j["elapsed_s"] = result.stats.elapsed_seconds;
  return j.dump();
}

std::vector<std::uint64_t> parse_id_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  auto parse_one = [&](std::string_view token) -> std::uint64_t {
    std::uint64_t v = 0;
    auto [end, ec] =
        std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || end != token.data() + token.size()) {
      throw UsageError("bad id '" + std::string(token) + "'");
    }
    return v;
  };
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    if (item.empty()) throw UsageError("empty entry in id list");
    const std::size_t dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_one(item));
    } else {
      const std::uint64_t lo = parse_one(item.substr(0, dash));
      const std::uint64_t hi = parse_one(item.substr(dash + 1));
      if (hi < lo) throw UsageError("descending range in id list");
      for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    }
    pos = comma + 1;
  }
  return out;
}

CampaignResult run_campaign(const CampaignSpec& spec, std::ostream* warnings) {
  if (spec.seeds.empty()) throw UsageError("campaign needs at least one seed");
  if (spec.instances.empty() || spec.algorithms.empty()) {
    throw UsageError("campaign needs instances and algorithms");
  }

  struct Loaded {
    std::string label;
    std::optional<BipInstance> instance;
    std::string error;
  };
  std::vector<Loaded> loaded;
  for (const auto& path : spec.instances) {
    Loaded l{path.stem().string(), std::nullopt, {}};
    try {
      l.instance.emplace(read_mps_file(path));
    } catch (const std::exception& e) {
      l.error = e.what();
    }
    loaded.push_back(std::move(l));
  }

  // Explicit bounds collapse the preset list to one entry labelled 0.
  std::vector<int> presets = spec.presets;
  if (spec.base.d_rate) presets = {0};
  if (presets.empty()) presets = {spec.base.preset};

  struct Job {
    std::size_t instance;
    Algorithm algorithm;
    int preset;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    for (Algorithm algorithm : spec.algorithms) {
      const std::vector<int> run_presets =
          algorithm == Algorithm::kSubsolverOnly ? std::vector<int>{0}
                                                 : presets;
      for (int preset : run_presets) {
        for (std::uint64_t seed : spec.seeds) {
          jobs.push_back({i, algorithm, preset, seed});
        }
      }
    }
  }
  std::sort(jobs.begin(), jobs.end(), [&](const Job& a, const Job& b) {
    return std::tie(loaded[a.instance].label, a.algorithm, a.preset, a.seed) <
           std::tie(loaded[b.instance].label, b.algorithm, b.preset, b.seed);
  });

  CampaignResult result;
  result.runs.resize(jobs.size());
  auto run_job = [&](std::size_t k) {
    const Job& job = jobs[k];
    const Loaded& l = loaded[job.instance];
    CampaignRun& run = result.runs[k];
    run.instance = l.label;
    run.algorithm = job.algorithm;
    run.preset = job.preset;
    run.seed = job.seed;
    if (!l.instance) {
      run.error = l.error;
      return;
    }
    RunConfig config = spec.base;
    config.algorithm = job.algorithm;
    config.seed = job.seed;
    if (job.preset > 0) config.preset = job.preset;
    try {
      RunResult r = execute(*l.instance, config);
      run.trace_fingerprint = trace_fingerprint(r.trace);
      if (!spec.trace_dir.empty()) {
        std::ofstream out(
            spec.trace_dir /
            trace_file_name(l.label, job.algorithm, job.preset, job.seed));
        write_trace_csv(*l.instance, r.trace, out);
      }
      if (r.best) {
        run.ok = true;
        run.internal_objective = r.best->objective;
        run.objective = l.instance->reported_objective(r.best->objective);
      } else {
        run.error = std::string(status_name(r.status));
      }
    } catch (const std::exception& e) {
      run.error = e.what();
    }
  };

  if (!spec.trace_dir.empty())
    std::filesystem::create_directories(spec.trace_dir);
  const int workers =
      std::max(1, std::min<int>(spec.jobs, static_cast<int>(jobs.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < jobs.size(); ++k) run_job(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) run_job(k);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Aggregates follow the sorted job order.
  for (const CampaignRun& run : result.runs) {
    if (!run.ok && warnings != nullptr) {
      *warnings << "warning: " << run.instance << ' '
                << algorithm_name(run.algorithm) << " preset " << run.preset
                << " seed " << run.seed << " failed: " << run.error << '\n';
    }
    if (result.per_preset.empty() ||
        result.per_preset.back().instance != run.instance ||
        result.per_preset.back().algorithm != run.algorithm ||
        result.per_preset.back().preset != run.preset) {
      PresetSummary fresh;
      fresh.instance = run.instance;
      fresh.algorithm = run.algorithm;
      fresh.preset = run.preset;
      result.per_preset.push_back(std::move(fresh));
    }
    PresetSummary& s = result.per_preset.back();
    if (!run.ok) {
      ++s.failed;
      continue;
    }
    ++s.ok;
    if (!s.best || run.internal_objective < s.best_internal) {
      s.best_internal = run.internal_objective;
      s.best = run.objective;
    }
    // Running mean in the reported sense.
    s.avg = s.avg.value_or(0.0) + (run.objective - s.avg.value_or(0.0)) / s.ok;
  }
  std::vector<double> best_internal;
  for (const PresetSummary& s : result.per_preset) {
    if (result.best_configs.empty() ||
        result.best_configs.back().instance != s.instance ||
        result.best_configs.back().algorithm != s.algorithm) {
      BestConfig fresh;
      fresh.instance = s.instance;
      fresh.algorithm = s.algorithm;
      result.best_configs.push_back(std::move(fresh));
      best_internal.push_back(0.0);
    }
    BestConfig& b = result.best_configs.back();
    // Presets arrive in increasing order; strict comparison keeps the lowest
    // index on ties.
    if (s.best && (!b.best || s.best_internal < best_internal.back())) {
      b.best = s.best;
      b.avg = s.avg;
      b.preset = s.preset;
      best_internal.back() = s.best_internal;
    }
  }
  return result;
}

void write_campaign_tables(const CampaignResult& result, std::ostream& out) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
  };
  out << "instance,algorithm,preset,ok,failed,best,avg\n";
  for (const PresetSummary& s : result.per_preset) {
    out << s.instance << ',' << algorithm_name(s.algorithm) << ',' << s.preset
        << ',' << s.ok << ',' << s.failed << ',' << opt(s.best) << ','
        << opt(s.avg) << '\n';
  }
  out << "\ninstance,algorithm,best,avg,conf\n";
  for (const BestConfig& b : result.best_configs) {
    out << b.instance << ',' << algorithm_name(b.algorithm) << ','
        << opt(b.best) << ',' << opt(b.avg) << ',' << b.preset << '\n';
  }
}

}  // namespace cmsa
