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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Independent oracles live in this file; the library is
// only used for the quantities under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "equityrank/experiment.h"

namespace {

using namespace equityrank;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

void Report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string Fmt(const char* format, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path Scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() /
                     ("equityrank_accept_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double ExamProb(std::size_t k) { return 1.0 / (std::log2(static_cast<double>(k)) + 1.0); }

// Unfairness from its definition: every ordered pair i != j.
double OracleUnfairness(const std::vector<double>& g, const std::vector<double>& y) {
  const std::size_t m = g.size();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) {
        const double d = g[i] * y[j] - g[j] * y[i];
        total += d * d;
      }
  return total / static_cast<double>(m * (m - 1));
}

// --- 1 ----------------------------------------------------------------------

// Extended-precision copy of the oracle so that rounding in the difference
// quotient stays well below the tolerance.
long double OracleUnfairnessLong(const std::vector<long double>& g,
                                 const std::vector<long double>& y) {
  const std::size_t m = g.size();
  long double total = 0.0L;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) {
        const long double d = g[i] * y[j] - g[j] * y[i];
        total += d * d;
      }
  return total / static_cast<long double>(m * (m - 1));
}

void GradientOracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> pick_m(2, 10);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  double worst = 0.0;
  std::size_t checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = pick_m(rng);
    std::vector<double> g(m), y(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = u(rng) * 10, y[i] = u(rng);
    const std::vector<double> b = fairness_gradient(g, y);
    for (std::size_t i = 0; i < m; ++i) {
      const long double h = 1e-6L * std::max(1.0L, std::abs(static_cast<long double>(g[i])));
      std::vector<long double> hi(g.begin(), g.end()), lo(g.begin(), g.end());
      const std::vector<long double> yl(y.begin(), y.end());
      hi[i] += h;
      lo[i] -= h;
      const double fd = static_cast<double>(
          -(OracleUnfairnessLong(hi, yl) - OracleUnfairnessLong(lo, yl)) / (2 * h));
      const double scale = std::max(std::abs(fd), std::abs(b[i]));
      const double rel = scale < 1e-12 ? 0.0 : std::abs(b[i] - fd) / scale;
      worst = std::max(worst, rel);
      ++checked;
    }
  }
  const double secs = Seconds(start);
  Report(1, worst <= 1e-5 && secs < 5.0,
         Fmt("gradient vs central differences, %.0f coordinates, max rel err %.3g "
             "(<= 1e-5), %.3f s (< 5 s)",
             static_cast<double>(checked), worst, secs));
}

// --- 2 ----------------------------------------------------------------------

void ReductionEquivalence() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  double worst_gain_path = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 5;
    const std::size_t n = m + 4 + static_cast<std::size_t>(u(rng) * 20);
    const std::size_t k = 1 + static_cast<std::size_t>(u(rng) * 4);
    const std::size_t users = 2 + static_cast<std::size_t>(u(rng) * 6);
    // Uneven group sizes: the first m items seed every group.
    std::vector<ProviderId> groups(n);
    for (std::size_t i = 0; i < n; ++i) {
      groups[i] = i < m ? static_cast<ProviderId>(i)
                        : static_cast<ProviderId>(u(rng) * u(rng) * m);
    }
    const Catalog catalog(groups, m);
    RelevanceTable rel(users, n);
    for (UserId a = 0; a < users; ++a)
      for (ItemId i = 0; i < n; ++i) rel.set(a, i, 0.05 + 0.95 * u(rng));

    const std::size_t steps = 1 + static_cast<std::size_t>(u(rng) * 30);
    std::vector<RankList> lists;
    for (std::size_t t = 0; t < steps; ++t) {
      std::vector<ItemId> items = AllItems(n);
      std::shuffle(items.begin(), items.end(), rng);
      items.resize(k);
      lists.push_back({static_cast<UserId>(t % users), items});
    }

    // Generic path: v_e = 1, v_b = 0 provider gains into the ledger, merit
    // y = mean group relevance.
    const PositionModel pm(k);
    const std::vector<ProviderProfile> unit(m, ProviderProfile{1.0, 0.0, 1.0});
    GainLedger ledger(m, n);
    std::vector<double> gain_path(m, 0.0);
    for (const RankList& list : lists) {
      for (std::size_t pos = 0; pos < k; ++pos) {
        const ItemId item = list.items[pos];
        const double p = pm.prob(pos + 1);
        ledger.AddExposure(catalog.group_of(item), item, p, p * unit[0].v_e);
      }
      for (ProviderId g = 0; g < m; ++g) {
        gain_path[g] += expected_gain(g, list, catalog, unit, rel, pm);
      }
      ledger.AdvanceStep();
    }
    const double generic = exposure_unfairness(ledger, catalog, rel);

    // Direct: item exposure summed over steps and positions, averaged per
    // group and step; merit is the group average of per-item mean relevance.
    std::vector<double> item_exposure(n, 0.0);
    for (const RankList& list : lists)
      for (std::size_t pos = 0; pos < k; ++pos) item_exposure[list.items[pos]] += ExamProb(pos + 1);
    std::vector<double> e(m, 0.0), r(m, 0.0), count(m, 0.0);
    for (ItemId i = 0; i < n; ++i) {
      double mean = 0.0;
      for (UserId a = 0; a < users; ++a) mean += rel.at(a, i);
      mean /= static_cast<double>(users);
      e[groups[i]] += item_exposure[i];
      r[groups[i]] += mean;
      count[groups[i]] += 1.0;
    }
    for (std::size_t g = 0; g < m; ++g) {
      e[g] /= count[g] * static_cast<double>(steps);
      r[g] /= count[g];
    }
    const double direct = OracleUnfairness(e, r);
    worst = std::max(worst, std::abs(generic - direct) / std::max(direct, 1e-300));
    for (std::size_t g = 0; g < m; ++g) {
      worst_gain_path = std::max(
          worst_gain_path, std::abs(gain_path[g] - ledger.exposure_gain()[g]) /
                               std::max(gain_path[g], 1e-300));
    }
  }
  Report(2, worst <= 1e-9 && worst_gain_path <= 1e-12,
         Fmt("exposure-fairness reduction on 100 random ledgers, max rel err %.3g "
             "(<= 1e-9); unit-gain path vs ledger %.3g",
             worst, worst_gain_path));
}

// --- 3 ----------------------------------------------------------------------

void CollapseIdentities() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 6;
    const std::size_t n = m + 5 + static_cast<std::size_t>(u(rng) * 30);
    const std::size_t k = 1 + static_cast<std::size_t>(u(rng) * 5);
    std::vector<ProviderId> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[i] = static_cast<ProviderId>(i % m);
    std::shuffle(groups.begin(), groups.end(), rng);
    const Catalog catalog(groups, m);
    std::vector<ProviderProfile> profiles(m);
    std::vector<double> y(m), gains(m);
    for (std::size_t g = 0; g < m; ++g) {
      profiles[g] = {1 + 20 * u(rng), 1 + 200 * u(rng), 1 + 100 * u(rng)};
      y[g] = profiles[g].y;
      gains[g] = u(rng) * 1e4;
    }
    const PositionModel pm(k);
    const RankingContext ctx{catalog, profiles, y, pm};
    const std::vector<ItemId> cand = AllItems(n);
    std::vector<double> rel(n);
    // Coarse values force ties through the tie rule.
    for (double& r : rel) r = std::round(u(rng) * 10) / 10;

    const auto topk = rank_topk(cand, rel, k);
    const auto poork = rank_poork(cand, rel, gains, ctx);
    mismatches += rank_equityrank(cand, rel, gains, ctx, 0.0, true) != topk;
    mismatches += rank_equityrank(cand, rel, gains, ctx, 0.0, false) != topk;
    mismatches += rank_fairco_star(cand, rel, gains, ctx, 0.0, true) != topk;
    mismatches += rank_fairco_star(cand, rel, gains, ctx, 0.0, false) != topk;
    mismatches += rank_mmf_star(cand, rel, gains, ctx, 0.0) != topk;
    mismatches += rank_mmf_star(cand, rel, gains, ctx, 1.0) != poork;

    RelevanceTable table(1, n);
    for (ItemId i = 0; i < n; ++i) table.set(0, i, rel[i]);
    std::vector<double> vgains = gains;
    const std::vector<UserId> one = {0};
    mismatches += allocate_vertical(one, table, vgains, ctx, 0.0).lists[0].items != topk;
  }
  Report(3, mismatches == 0,
         Fmt("alpha=0 lists equal TopK and MMF*(1) equals PoorK on 100 random "
             "states, %.0f mismatches",
             mismatches));
}

// --- 4 ----------------------------------------------------------------------

void MicroInstanceGap() {
  const auto start = Clock::now();
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> gaps;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2, k = 3;
    const std::size_t n = 4 + static_cast<std::size_t>(u(rng) * 4);
    std::vector<ProviderId> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[i] = i < m ? static_cast<ProviderId>(i) : (u(rng) < 0.5 ? 0 : 1);
    const Catalog catalog(groups, m);
    std::vector<ProviderProfile> profiles(m);
    std::vector<double> y(m), prior(m);
    for (std::size_t g = 0; g < m; ++g) {
      profiles[g] = {1 + 9 * u(rng), 1 + 9 * u(rng), 1 + 9 * u(rng)};
      y[g] = profiles[g].y;
      prior[g] = 50.0 * y[g] * (0.5 + u(rng));
    }
    std::vector<double> rel(n);
    for (double& r : rel) r = u(rng);
    const PositionModel pm(k);
    const RankingContext ctx{catalog, profiles, y, pm};

    // Fairness weight comparable to the effectiveness term.
    const auto b = fairness_gradient(prior, y);
    const double bmax = std::max(std::abs(b[0]), std::abs(b[1]));
    double vmean = 0;
    for (const auto& p : profiles) vmean += (p.v_e + p.v_b) / 2;
    const double alpha = (0.2 + 1.8 * u(rng)) / (bmax * vmean);

    auto objective = [&](const std::vector<ItemId>& list) {
      std::vector<double> after = prior;
      double dcg_value = 0.0;
      for (std::size_t pos = 0; pos < k; ++pos) {
        const ItemId i = list[pos];
        const ProviderProfile& p = profiles[groups[i]];
        dcg_value += ExamProb(pos + 1) * rel[i];
        after[groups[i]] += ExamProb(pos + 1) * (p.v_e + rel[i] * p.v_b);
      }
      return dcg_value + alpha * (OracleUnfairness(prior, y) - OracleUnfairness(after, y));
    };

    double best = -std::numeric_limits<double>::infinity();
    std::vector<ItemId> perm = AllItems(n);
    // Every ordered K-subset.
    std::function<void(std::vector<ItemId>&, std::vector<char>&)> search =
        [&](std::vector<ItemId>& cur, std::vector<char>& used) {
          if (cur.size() == k) {
            best = std::max(best, objective(cur));
            return;
          }
          for (ItemId i = 0; i < n; ++i) {
            if (used[i]) continue;
            used[i] = 1;
            cur.push_back(i);
            search(cur, used);
            cur.pop_back();
            used[i] = 0;
          }
        };
    std::vector<ItemId> cur;
    std::vector<char> used(n, 0);
    search(cur, used);

    const auto eq = rank_equityrank(perm, rel, prior, ctx, alpha, true);
    const double got = objective(eq);
    gaps.push_back(std::abs(best) > 0 ? (best - got) / std::abs(best) : 0.0);
  }
  const double secs = Seconds(start);
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  const auto within = std::count_if(gaps.begin(), gaps.end(),
                                    [](double g) { return g <= 0.05; });
  std::printf("  gap distribution: min %.4g  p50 %.4g  p90 %.4g  p99 %.4g  max %.4g\n",
              sorted.front(), sorted[50], sorted[90], sorted[99], sorted.back());
  const double edges[] = {0, 1e-9, 0.01, 0.02, 0.05, 0.1, 0.2, 1e300};
  std::printf("  gap histogram:");
  for (int e = 0; e + 1 < 8; ++e) {
    const auto c = std::count_if(gaps.begin(), gaps.end(), [&](double g) {
      return e == 0 ? g <= edges[1] : (g > edges[e] && g <= edges[e + 1]);
    });
    std::printf(" %s%g:%ld", e == 0 ? "<=" : ">", e == 0 ? edges[1] : edges[e],
                static_cast<long>(c));
  }
  std::printf("\n");
  Report(4, within >= 90 && secs < 30.0,
         Fmt("greedy within 5%% of the brute-force optimum in %.0f/100 instances "
             "(>= 90), worst gap %.4g, %.3f s (< 30 s)",
             static_cast<double>(within), sorted.back(), secs));
}

// --- 5, 6, 7 -----------------------------------------------------------------

struct Cell {
  double unfairness = NAN, effectiveness = NAN, msd = NAN, pearson = NAN, alpha = NAN;
};

// Per policy: the seed-averaged row at the alpha with the least unfairness.
std::map<std::string, Cell> MinUnfairness(const std::vector<SummaryRow>& summary) {
  std::map<std::string, Cell> out;
  for (const SummaryRow& s : summary) {
    Cell& c = out[s.policy];
    if (std::isnan(c.unfairness) || s.unfairness_mean < c.unfairness) {
      c = {s.unfairness_mean, s.effectiveness_mean, s.msd_mean, s.pearson_mean, s.alpha};
    }
  }
  return out;
}

ExperimentPlan OfflinePlan(const ScenarioSpec& scenario, const fs::path& out) {
  ExperimentPlan plan;  // default generator, policies, grid and seeds 1..5
  plan.scenario = scenario;
  plan.out = out;
  return plan;
}

void MinUnfairnessOrdering() {
  const auto start = Clock::now();
  const ExperimentPlan plan = OfflinePlan(ScenarioSpec::Common(), Scratch("c5"));
  const SweepOutcome out = cmd_sweep(plan);
  const double secs = Seconds(start);
  auto cells = MinUnfairness(out.summary);
  const Cell v = cells["EquityRank_v"], poor = cells["PoorK"], top = cells["TopK"];
  for (const auto& [name, c] : cells) {
    std::printf("  %-13s min unfairness %-12.5g at alpha %-8g aNDCG %.4f\n",
                name.c_str(), c.unfairness, c.alpha, c.effectiveness);
  }
  Report(5, v.unfairness <= 1.5 * poor.unfairness && top.unfairness >= 10 * v.unfairness &&
                secs < 300.0,
         Fmt("Common: EquityRank_v %.4g <= 1.5 x PoorK %.4g; TopK / EquityRank_v = "
             "%.4g (>= 10); sweep %.1f s (< 300 s)",
             v.unfairness, poor.unfairness, top.unfairness / v.unfairness, secs));
}

void GainAlignmentOrdering() {
  bool pass = true;
  std::string detail;
  for (const ScenarioSpec& s :
       {ScenarioSpec::Common(), ScenarioSpec::Exp1st(), ScenarioSpec::Sale1st()}) {
    ExperimentPlan plan = OfflinePlan(s, Scratch("c6_" + s.name));
    plan.policies = {PolicyKind::kPoorK, PolicyKind::kFairCoStar, PolicyKind::kEquityRankV};
    const SweepOutcome out = cmd_sweep(plan);
    auto cells = MinUnfairness(out.summary);
    const Cell v = cells["EquityRank_v"], poor = cells["PoorK"], fair = cells["FairCo*"];
    const bool ok = v.msd < poor.msd && v.msd < fair.msd && v.pearson > poor.pearson &&
                    v.pearson > fair.pearson;
    pass = pass && ok;
    std::printf("  %-8s MSD  EquityRank_v %-10.4g PoorK %-10.4g FairCo* %-10.4g\n",
                s.name.c_str(), v.msd, poor.msd, fair.msd);
    std::printf("  %-8s rho  EquityRank_v %-10.4f PoorK %-10.4f FairCo* %-10.4f\n",
                s.name.c_str(), v.pearson, poor.pearson, fair.pearson);
    detail += s.name + (ok ? " ok " : " violated ");
  }
  Report(6, pass, "EquityRank_v has lower MSD and higher rho than PoorK and FairCo*: " + detail);
}

void TradeoffDominance() {
  ExperimentPlan plan = OfflinePlan(ScenarioSpec::Common(), Scratch("c7"));
  plan.policies = {PolicyKind::kFairCoStar, PolicyKind::kEquityRankV};
  // Half-decade steps resolve the curves on both sides of the regime change.
  plan.alpha_grid = {0.0};
  for (int e = -20; e <= 6; ++e) plan.alpha_grid.push_back(std::pow(10.0, e / 2.0));
  const SweepOutcome out = cmd_sweep(plan);
  const auto v = PolicyEnvelope(out.summary, "EquityRank_v");
  const auto f = PolicyEnvelope(out.summary, "FairCo*");
  bool monotone = true;
  for (const auto* env : {&v, &f}) {
    for (std::size_t i = 1; i < env->size(); ++i) {
      monotone = monotone && (*env)[i - 1].effectiveness <= (*env)[i].effectiveness;
    }
  }
  std::vector<double> thresholds;
  for (const auto& p : v) thresholds.push_back(p.unfairness);
  for (const auto& p : f) thresholds.push_back(p.unfairness);
  double worst = std::numeric_limits<double>::infinity();
  double worst_at = NAN;
  std::size_t compared = 0;
  for (double th : thresholds) {
    const double ev = EnvelopeAt(v, th), ef = EnvelopeAt(f, th);
    if (std::isnan(ev) || std::isnan(ef)) continue;
    ++compared;
    if (ev - ef < worst) worst = ev - ef, worst_at = th;
  }
  Report(7, monotone && compared > 0 && worst >= -0.02,
         Fmt("Common: min (EquityRank_v - FairCo*) envelope effectiveness %.4g at "
             "threshold %.4g over %.0f thresholds (>= -0.02); envelopes monotone: ",
             worst, worst_at, static_cast<double>(compared)) +
             (monotone ? "yes" : "no"));
}

// --- 8 ----------------------------------------------------------------------

void OnlineProtocol() {
  // Estimator harness: one pair examined with probability 1, bought with
  // probability r, until E covers 3 sd of the 0.05 band (at least 200).
  bool estimator_ok = true;
  for (double r : {0.05, 0.2, 0.5, 0.7, 0.95}) {
    std::mt19937_64 rng(808);
    std::bernoulli_distribution buy(r);
    RelevanceEstimator est(1, 1);
    const double needed = std::max(200.0, 9.0 * r * (1.0 - r) / (0.05 * 0.05));
    for (int e = 0; e < needed; ++e) est.Record(0, 0, 1.0, buy(rng));
    estimator_ok = estimator_ok && std::abs(estimate_relevance(0, 0, est) - r) <= 0.05;
  }

  GeneratorSpec spec;  // n = 1000, m = 20
  const Dataset ds = generate_dataset(spec, ScenarioSpec::Common());
  SimConfig cfg;  // K = 5, gamma = 0.995, T = 250000, prefilter 20
  cfg.mode = SimMode::kOnline;
  cfg.seed = 1;
  cfg.record_ndcg = true;
  const auto start = Clock::now();
  const OnlineRun run = run_online(ds, {PolicyKind::kEquityRank, 1e-7}, cfg);
  const double secs = Seconds(start);
  double direct = 0.0;
  const std::size_t t_max = run.ndcg.size();
  for (std::size_t t = 0; t < t_max; ++t) {
    direct += std::pow(cfg.gamma, static_cast<double>(t_max - 1 - t)) * run.ndcg[t];
  }
  const double err = std::abs(direct - run.result.effectiveness);
  Report(8, secs < 600.0 && estimator_ok && err <= 1e-6 && t_max == cfg.steps,
         Fmt("online EquityRank, T = %.0f steps in %.2f s (< 600 s); cNDCG %.6f vs "
             "direct %.6f",
             static_cast<double>(t_max), secs, run.result.effectiveness, direct) +
             Fmt(", |diff| %.3g (<= 1e-6); estimator harness ", err) +
             (estimator_ok ? "ok" : "failed"));
}

// --- 9 ----------------------------------------------------------------------

double PerStepSeconds(std::size_t n, std::size_t m) {
  GeneratorSpec spec;
  spec.n_users = 10;
  spec.n_items = n;
  spec.n_providers = m;
  spec.latent_dim = 8;
  spec.seed = 9;
  const Dataset ds = generate_dataset(spec, ScenarioSpec::Common());
  SimConfig cfg;
  cfg.mode = SimMode::kOnline;
  cfg.prefilter_size = n;
  cfg.steps = std::max<std::uint64_t>(20, 2000000 / n);
  cfg.checkpoint_every = cfg.steps;
  double best = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 3; ++rep) {
    cfg.seed = rep;
    best = std::min(best, run_online(ds, {PolicyKind::kEquityRank, 1e-6}, cfg).seconds_per_step);
  }
  return best;
}

double LogLogSlope(const std::vector<double>& x, const std::vector<double>& t) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(t[i]);
  mx /= x.size();
  my /= x.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (std::log(x[i]) - mx) * (std::log(t[i]) - my);
    den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return num / den;
}

void ComplexityClaim() {
  const std::vector<double> ns = {1e3, 1e4, 1e5};
  const std::vector<double> ms = {10, 100, 1000};
  std::vector<double> tn, tm;
  for (double n : ns) tn.push_back(PerStepSeconds(static_cast<std::size_t>(n), 20));
  for (double m : ms) tm.push_back(PerStepSeconds(10000, static_cast<std::size_t>(m)));
  const double slope_n = LogLogSlope(ns, tn);
  const double slope_m = LogLogSlope(ms, tm);
  std::printf("  per-step seconds, m = 20:   n=1e3 %.3g  n=1e4 %.3g  n=1e5 %.3g\n", tn[0],
              tn[1], tn[2]);
  std::printf("  per-step seconds, n = 1e4:  m=10 %.3g  m=100 %.3g  m=1000 %.3g\n", tm[0],
              tm[1], tm[2]);
  Report(9, slope_n <= 1.15 && slope_m <= 2.0,
         Fmt("online per-step latency log-log slope in n %.3f (<= 1.15), in m %.3f (<= 2)",
             slope_n, slope_m));
}

// --- 10 ---------------------------------------------------------------------

void Determinism() {
  const fs::path data = Scratch("c10_data");
  GeneratorSpec spec;
  spec.n_users = 100;
  spec.n_items = 300;
  spec.n_providers = 10;
  spec.seed = 10;
  cmd_generate(spec, ScenarioSpec::Sale1st(), data, false);
  bool same = true;
  for (SimMode mode : {SimMode::kOffline, SimMode::kOnline}) {
    ExperimentPlan plan;
    plan.dataset = data;
    plan.sim.mode = mode;
    plan.sim.steps = 5000;
    if (mode == SimMode::kOnline) {
      plan.policies = {PolicyKind::kTopK, PolicyKind::kPoorK, PolicyKind::kFairCoStar,
                       PolicyKind::kMMFStar, PolicyKind::kEquityRank};
    }
    plan.seeds = {1, 2};
    plan.out = Scratch("c10_a");
    plan.workers = 1;
    cmd_sweep(plan);
    const std::string first = Slurp(plan.out / "results.csv");
    plan.out = Scratch("c10_b");
    plan.workers = 4;
    cmd_sweep(plan);
    same = same && !first.empty() && first == Slurp(plan.out / "results.csv");
  }
  Report(10, same, std::string("offline and online sweeps repeated (1 vs 4 workers): ") +
                       (same ? "results.csv byte-identical" : "results.csv differs"));
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void()>>> criteria = {
      {1, GradientOracle},
      {2, ReductionEquivalence},
      {3, CollapseIdentities},
      {4, MicroInstanceGap},
      {5, MinUnfairnessOrdering},
      {6, GainAlignmentOrdering},
      {7, TradeoffDominance},
      {8, OnlineProtocol},
      {9, ComplexityClaim},
      {10, Determinism},
  };
  for (const auto& [id, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      Report(id, false, std::string("threw: ") + e.what());
    }
  }
  fs::remove_all(fs::temp_directory_path() /
                 ("equityrank_accept_" + std::to_string(::getpid())));
  std::printf("%d of %zu criteria failed\n", g_failures, criteria.size());
  return g_failures == 0 ? 0 : 1;
}
