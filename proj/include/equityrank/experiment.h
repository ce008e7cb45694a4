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

#ifndef EQUITYRANK_EXPERIMENT_H_
#define EQUITYRANK_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "equityrank/core.h"
#include "equityrank/metrics.h"
#include "equityrank/rankers.h"
#include "equityrank/sim.h"
#include "equityrank/synth.h"
#include "json.hpp"

namespace equityrank {

// Everything a sweep needs. Loaded from a JSON config; CLI flags override
// individual fields and the resolved plan is echoed next to the results.
struct ExperimentPlan {
  std::optional<std::filesystem::path> dataset;  // else generated
  std::string label;                             // dataset name in reports
  GeneratorSpec generator;
  ScenarioSpec scenario = ScenarioSpec::Common();
  std::vector<PolicyKind> policies = {
      PolicyKind::kTopK,       PolicyKind::kPoorK,      PolicyKind::kFairCoStar,
      PolicyKind::kMMFStar,    PolicyKind::kEquityRank, PolicyKind::kEquityRankV};
  std::vector<double> alpha_grid = {0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  SimConfig sim;
  std::filesystem::path out = "results";
  std::size_t workers = 1;
  bool timing_in_results = false;  // fill wall_ms in results.csv
};

ExperimentPlan PlanFromJson(const nlohmann::json& j);
nlohmann::json PlanToJson(const ExperimentPlan& plan);
ExperimentPlan LoadPlan(const std::filesystem::path& path);
// Throws std::invalid_argument for empty lists or invalid settings.
void ValidatePlan(const ExperimentPlan& plan);

// TopK and PoorK run once at alpha = 0; MMF* keeps grid values in [0, 1].
std::vector<double> EffectiveAlphas(PolicyKind kind,
                                    const std::vector<double>& grid);

// "topk", "fairco_star", "equityrank_v", ...
std::string PolicySlug(PolicyKind kind);

// Loads plan.dataset, or generates from plan.generator and plan.scenario.
Dataset ResolveDataset(const ExperimentPlan& plan);

// Writes a generated dataset plus manifest.json into `dir`. Refuses an
// existing directory unless `force`; invalid specs fail before any write.
void cmd_generate(const GeneratorSpec& spec, const ScenarioSpec& scenario,
                  const std::filesystem::path& dir, bool force);

struct SingleRun {
  RunResult result;
  std::vector<Checkpoint> series;  // online only
};

// One (policy, alpha, seed) run on the plan's dataset. Writes results.csv and,
// online, timeseries.csv into plan.out.
SingleRun cmd_run(const ExperimentPlan& plan, const PolicyConfig& policy,
                  std::uint64_t seed);

struct SweepRow {
  RunResult result;
  std::string error;  // empty when the run succeeded
};

struct SummaryRow {
  SimMode mode = SimMode::kOffline;
  std::string policy;
  double alpha = 0.0;
  std::size_t runs = 0;
  double effectiveness_mean = 0.0, effectiveness_sd = 0.0;
  double unfairness_mean = 0.0, unfairness_sd = 0.0;
  double msd_mean = 0.0, msd_sd = 0.0;
  double pearson_mean = 0.0, pearson_sd = 0.0;
  double wall_ms_mean = 0.0;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;  // plan order: policy, alpha, seed
  std::vector<SummaryRow> summary;
};

// Runs every (policy, alpha, seed) of the plan, possibly on several workers,
// and writes results.csv, timings.csv, summary.csv, envelope_<policy>.csv,
// errors.csv (if any run failed) and plan.json into plan.out.
SweepOutcome cmd_sweep(const ExperimentPlan& plan);

// Mean and sample sd over seeds per (policy, alpha); failed runs and NaN
// values are left out.
std::vector<SummaryRow> Summarize(const std::vector<SweepRow>& rows);

// Seed-averaged envelope for one policy.
std::vector<TradeoffPoint> PolicyEnvelope(const std::vector<SummaryRow>& summary,
                                          const std::string& policy);

struct ReportTables {
  std::vector<SummaryRow> min_unfairness;  // one row per policy, ascending
  std::string svg;
};

// Reads results.csv (and timings.csv when present) from `dir` and writes
// min_unfairness.csv, alignment.csv, tradeoff.svg and report.md there.
// Throws std::runtime_error when there are no results.
ReportTables cmd_report(const std::filesystem::path& dir);

// Trade-off plot: log-scale unfairness against effectiveness, one polyline
// per policy.
std::string TradeoffSvg(
    const std::string& title,
    const std::vector<std::pair<std::string, std::vector<TradeoffPoint>>>& curves);

// Parses results.csv back into rows.
std::vector<SweepRow> ReadResultsCsv(const std::filesystem::path& path);

}  // namespace equityrank

#endif  // EQUITYRANK_EXPERIMENT_H_
