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

// Command-line front end: one run, or a campaign over several instances,
// algorithms, presets and seeds.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cmsa/bench.hpp"
#include "cmsa/error.hpp"
#include "cmsa/mps.hpp"

namespace {

template <typename T>
std::vector<T> split_list(const std::vector<std::string>& items,
                          T (*convert)(const std::string&)) {
  std::vector<T> out;
  for (const std::string& item : items) {
    std::size_t pos = 0;
    while (pos <= item.size()) {
      std::size_t comma = item.find(',', pos);
      if (comma == std::string::npos) comma = item.size();
      out.push_back(convert(item.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  return out;
}

cmsa::Algorithm to_algorithm(const std::string& name) {
  auto a = cmsa::parse_algorithm(name);
  if (!a) {
    throw CLI::ValidationError("--algo",
                               "expected cmsa, cmsa-cp or subsolver-only");
  }
  return *a;
}

int to_preset(const std::string& text) {
  int p = 0;
  try {
    p = std::stoi(text);
  } catch (const std::exception&) {
  }
  if (p < 1 || p > 4) throw CLI::ValidationError("--preset", "expected 1..4");
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CMSA matheuristic for binary integer linear programs"};

  std::vector<std::string> instance_paths;
  std::vector<std::string> algo_items{"cmsa"};
  std::vector<std::string> preset_items{"3"};
  std::string seeds_text = "1";
  cmsa::RunConfig base;
  double drate_lb = 0.0;
  double drate_ub = 0.0;
  std::string trace_out;
  std::string sol_out;
  std::string summary_out;
  int jobs = 1;

  app.add_option("--instance", instance_paths, "MPS file(s)")->required();
  app.add_option("--algo", algo_items,
                 "cmsa, cmsa-cp or subsolver-only (comma-separated list)");
  app.add_option("--preset", preset_items,
                 "d_rate configuration 1-4 (comma-separated list)");
  app.add_option("--seeds", seeds_text, "seed list, e.g. 1-10 or 1,4,7");
  app.add_option("--budget", base.total_budget, "wall-clock seconds per run")
      ->check(CLI::PositiveNumber);
  app.add_option("--na", base.n_a, "constructions per iteration")
      ->check(CLI::PositiveNumber);
  app.add_option("--age-max", base.age_max, "maximum component age")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tlp", base.t_lp, "LP time limit (s)")
      ->check(CLI::PositiveNumber);
  app.add_option("--tsub-lb", base.t_sub_lb, "sub-solver time lower bound (s)")
      ->check(CLI::PositiveNumber);
  app.add_option("--tsub-ub", base.t_sub_ub, "sub-solver time upper bound (s)")
      ->check(CLI::PositiveNumber);
  auto* lb_opt =
      app.add_option("--drate-lb", drate_lb,
                     "determinism rate lower bound (overrides preset)");
  auto* ub_opt =
      app.add_option("--drate-ub", drate_ub,
                     "determinism rate upper bound (overrides preset)");
  lb_opt->needs(ub_opt);
  ub_opt->needs(lb_opt);
  app.add_option("--max-iters", base.max_iterations,
                 "iteration cap, 0 for none")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--merge-infeasible", base.merge_infeasible,
                 "merge infeasible constructions into the pool (true/false)");
  app.add_option("--stop-when-proven", base.stop_when_proven,
                 "stop once the incumbent is proven optimal (true/false)");
  app.add_option("--external-solver-cmd", base.external_solver_cmd,
                 "shell command with {input}, {output}, {time_limit}");
  app.add_option("--trace-out", trace_out,
                 "trace CSV (single run) or directory (campaign)");
  app.add_option("--sol-out", sol_out, "solution file (single run)");
  app.add_option("--summary-out", summary_out, "campaign tables CSV");
  app.add_option("--jobs", jobs, "parallel runs in a campaign")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  std::vector<cmsa::Algorithm> algorithms;
  std::vector<int> presets;
  std::vector<std::uint64_t> seeds;
  try {
    algorithms = split_list<cmsa::Algorithm>(algo_items, &to_algorithm);
    presets = split_list<int>(preset_items, &to_preset);
    seeds = cmsa::parse_id_list(seeds_text);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const cmsa::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (lb_opt->count() > 0) base.d_rate = cmsa::Interval{drate_lb, drate_ub};

  const bool single = instance_paths.size() == 1 && algorithms.size() == 1 &&
                      presets.size() == 1 && seeds.size() == 1;
  if (single) {
    std::optional<cmsa::BipInstance> instance;
    try {
      instance.emplace(cmsa::read_mps_file(instance_paths[0]));
    } catch (const cmsa::MpsFormatError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return cmsa::kExitParseError;
    } catch (const cmsa::IoError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return cmsa::kExitParseError;
    }
    base.algorithm = algorithms[0];
    base.preset = presets[0];
    base.seed = seeds[0];
    cmsa::RunResult result;
    try {
      result = cmsa::execute(*instance, base);
    } catch (const cmsa::UsageError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    if (!trace_out.empty()) {
      std::ofstream out(trace_out);
      cmsa::write_trace_csv(*instance, result.trace, out);
    }
    if (!sol_out.empty() && result.best) {
      std::ofstream out(sol_out);
      cmsa::write_solution_file(*instance, *result.best, out);
    }
    const std::string label =
        std::filesystem::path(instance_paths[0]).stem().string();
    std::cout << cmsa::summary_line(*instance, label, base, result) << "\n";
    return cmsa::exit_code(result.status);
  }

  cmsa::CampaignSpec spec;
  for (const auto& p : instance_paths) spec.instances.emplace_back(p);
  spec.algorithms = algorithms;
  spec.presets = presets;
  spec.seeds = seeds;
  spec.base = base;
  spec.jobs = jobs;
  spec.trace_dir = trace_out;
  cmsa::CampaignResult result;
  try {
    result = cmsa::run_campaign(spec, &std::cerr);
  } catch (const cmsa::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  cmsa::write_campaign_tables(result, std::cout);
  if (!summary_out.empty()) {
    std::ofstream out(summary_out);
    cmsa::write_campaign_tables(result, out);
  }
  return 0;
}
