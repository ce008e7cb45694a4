// Copyright 2026 The EquityRank Authors.
//
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

// Command-line driver: generate, run, sweep, report.
//
//   equityrank generate --out data/common --scenario common --seed 7
//   equityrank sweep --config plan.json --out results/common
//   equityrank report --out results/common
//
// Errors go to stderr as a single JSON object and the exit code is nonzero.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "equityrank/experiment.h"
#include "json.hpp"

namespace {

using namespace equityrank;

struct Flags {
  std::string config;
  std::string dataset;
  std::string out;
  std::string mode;
  std::string policy;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::string scenario;
  std::optional<std::uint64_t> steps;
  std::optional<std::size_t> workers;
  bool force = false;
};

void AddCommon(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON experiment plan");
  cmd->add_option("--dataset", f.dataset, "dataset directory");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--mode", f.mode, "offline|online");
  cmd->add_option("--scenario", f.scenario, "common|exp1st|sale1st");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--steps", f.steps, "online steps");
}

ExperimentPlan ResolvePlan(const Flags& f) {
  ExperimentPlan plan;
  if (!f.config.empty()) plan = LoadPlan(f.config);
  if (!f.dataset.empty()) plan.dataset = f.dataset;
  if (!f.out.empty()) plan.out = f.out;
  if (!f.mode.empty()) plan.sim.mode = ParseMode(f.mode);
  if (!f.scenario.empty()) plan.scenario = ScenarioByName(f.scenario);
  if (f.steps) plan.sim.steps = *f.steps;
  if (f.workers) plan.workers = *f.workers;
  return plan;
}

int Fail(const std::string& command, const std::string& kind,
         const std::string& message) {
  nlohmann::json err = {{"status", "error"},
                        {"command", command},
                        {"kind", kind},
                        {"message", message}};
  std::cerr << err.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Provider-fair ranking simulator"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* generate = app.add_subcommand("generate", "write a synthetic dataset");
  AddCommon(generate, f);
  generate->add_flag("--force", f.force, "overwrite an existing directory");

  CLI::App* run = app.add_subcommand("run", "one policy, one alpha, one seed");
  AddCommon(run, f);
  run->add_option("--policy", f.policy, "TopK|PoorK|FairCo*|MMF*|EquityRank|EquityRank_v")
      ->required();
  run->add_option("--alpha", f.alpha, "trade-off weight");

  CLI::App* sweep = app.add_subcommand("sweep", "every policy, alpha and seed of a plan");
  AddCommon(sweep, f);
  sweep->add_option("--policy", f.policy, "restrict the sweep to one policy");
  sweep->add_option("--alpha", f.alpha, "restrict the sweep to one alpha");
  sweep->add_option("--workers", f.workers, "concurrent runs");

  CLI::App* report = app.add_subcommand("report", "tables and plot from a sweep");
  report->add_option("--out", f.out, "sweep output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Fail("parse", "usage", e.what());
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "generate") {
      ExperimentPlan plan = ResolvePlan(f);
      if (f.seed) plan.generator.seed = *f.seed;
      if (f.out.empty()) throw std::invalid_argument("generate needs --out");
      cmd_generate(plan.generator, plan.scenario, plan.out, f.force);
      std::cout << "wrote " << plan.out.string() << "\n";
    } else if (command == "run") {
      ExperimentPlan plan = ResolvePlan(f);
      PolicyConfig policy;
      policy.kind = ParsePolicy(f.policy);
      policy.alpha = f.alpha.value_or(0.0);
      ValidatePolicy(policy);
      const std::uint64_t seed = f.seed.value_or(plan.seeds.front());
      const SingleRun result = cmd_run(plan, policy, seed);
      std::cout << RunResultCsvHeader() << "\n"
                << RunResultCsvRow(result.result, true) << "\n";
    } else if (command == "sweep") {
      ExperimentPlan plan = ResolvePlan(f);
      if (!f.policy.empty()) plan.policies = {ParsePolicy(f.policy)};
      if (f.alpha) plan.alpha_grid = {*f.alpha};
      if (f.seed) plan.seeds = {*f.seed};
      const SweepOutcome outcome = cmd_sweep(plan);
      std::size_t failed = 0;
      for (const SweepRow& row : outcome.rows) failed += !row.error.empty();
      std::cout << outcome.rows.size() << " runs, " << failed << " failed, wrote "
                << plan.out.string() << "\n";
    } else if (command == "report") {
      const ReportTables tables = cmd_report(f.out);
      std::cout << "wrote report for " << tables.min_unfairness.size()
                << " policies to " << f.out << "\n";
    }
  } catch (const DatasetError& e) {
    return Fail(command, "dataset", e.what());
  } catch (const InvalidModeError& e) {
    return Fail(command, "mode", e.what());
  } catch (const std::invalid_argument& e) {
    return Fail(command, "invalid_argument", e.what());
  } catch (const std::exception& e) {
    return Fail(command, "runtime", e.what());
  }
  return 0;
}
