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

#include "equityrank/sim.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace equityrank {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void CheckDatasetFits(const Dataset& dataset, const SimConfig& cfg) {
  ValidateDataset(dataset);
  ValidateSimConfig(cfg);
  if (dataset.catalog.item_count() < cfg.list_size) {
    throw std::invalid_argument("dataset has fewer items than list slots");
  }
}

// Offline accrual: expected gain of every listed item.
void CommitExpected(const RankList& list, const Dataset& dataset,
                    const PositionModel& positions, GainLedger& ledger) {
  for (std::size_t k = 0; k < list.items.size(); ++k) {
    const ItemId item = list.items[k];
    const ProviderId g = dataset.catalog.group_of(item);
    const ProviderProfile& p = dataset.profiles[g];
    const double prob = positions.prob(k + 1);
    ledger.AddExposure(g, item, prob, prob * p.v_e);
    ledger.AddPurchaseGain(g, prob * dataset.relevance.at(list.user, item) * p.v_b);
  }
  ledger.AdvanceStep();
}

void FillRawGains(const GainLedger& ledger, std::vector<double>& out) {
  out.resize(ledger.provider_count());
  for (std::size_t g = 0; g < out.size(); ++g) {
    out[g] = ledger.raw_gain(static_cast<ProviderId>(g));
  }
}

void FillAlignment(const GainLedger& ledger,
                   std::span<const ProviderProfile> profiles, RunResult& r) {
  try {
    const AlignmentDiagnostics diag = alignment_diagnostics(ledger, profiles);
    r.msd = diag.msd;
    r.pearson = diag.pearson;
    r.pearson_defined = diag.pearson_defined;
    r.alignment_excluded = diag.excluded;
  } catch (const std::invalid_argument&) {
    r.msd = std::numeric_limits<double>::quiet_NaN();
    r.pearson = std::numeric_limits<double>::quiet_NaN();
    r.pearson_defined = false;
    r.alignment_excluded = profiles.size();
  }
}

double LedgerUnfairness(const GainLedger& ledger, std::span<const double> y) {
  if (ledger.step_count() == 0) return std::numeric_limits<double>::quiet_NaN();
  return unfairness(ledger.AveragedGains(), y);
}

}  // namespace

void ValidateSimConfig(const SimConfig& cfg) {
  if (cfg.list_size == 0) throw std::invalid_argument("K must be positive");
  if (cfg.cutoff < 1 || cfg.cutoff > cfg.list_size) {
    throw std::invalid_argument("cutoff must satisfy 1 <= k_c <= K");
  }
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in (0, 1]");
  }
  if (cfg.prefilter_size < cfg.list_size) {
    throw std::invalid_argument("prefilter size must be >= K");
  }
  if (!(cfg.prefilter_noise >= 0.0)) {
    throw std::invalid_argument("prefilter noise must be >= 0");
  }
  if (cfg.checkpoint_every == 0) {
    throw std::invalid_argument("checkpoint_every must be positive");
  }
}

std::mt19937_64 MakeRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

RelevanceEstimator::RelevanceEstimator(std::size_t user_count,
                                       std::size_t item_count)
    : item_count_(item_count),
      exposure_(user_count * item_count, 0.0),
      purchases_(user_count * item_count, 0) {}

void RelevanceEstimator::Record(UserId user, ItemId item, double prob,
                                bool purchased) {
  const std::size_t i = Index(user, item);
  exposure_[i] += prob;
  if (purchased) ++purchases_[i];
}

double estimate_relevance(UserId user, ItemId item,
                          const RelevanceEstimator& estimator) {
  const double exposure = estimator.exposure(user, item);
  if (exposure <= 0.0) return 1.0;
  const double r = static_cast<double>(estimator.purchases(user, item)) / exposure;
  return std::clamp(r, 0.0, 1.0);
}

std::vector<bool> apply_feedback(const RankList& list,
                                 const RelevanceTable& truth,
                                 std::span<const ProviderProfile> profiles,
                                 const Catalog& catalog, OnlineState& state,
                                 const PositionModel& positions) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<bool> bought(list.items.size(), false);
  for (std::size_t k = 0; k < list.items.size(); ++k) {
    const ItemId item = list.items[k];
    const ProviderId g = catalog.group_of(item);
    const ProviderProfile& p = profiles[g];
    const double prob = positions.prob(k + 1);
    state.ledger.AddExposure(g, item, prob, prob * p.v_e);
    const bool purchased = uniform(state.rng) < prob * truth.at(list.user, item);
    if (purchased) {
      state.ledger.AddPurchaseGain(g, p.v_b);
      bought[k] = true;
    }
    state.estimator.Record(list.user, item, prob, purchased);
  }
  state.ledger.AdvanceStep();
  ++state.step;
  return bought;
}

std::vector<ItemId> prefilter_candidates(UserId user,
                                         const RelevanceTable& truth,
                                         std::size_t size, double noise_sd,
                                         std::mt19937_64& rng) {
  const std::size_t n = truth.item_count();
  if (size > n) {
    throw std::invalid_argument("prefilter size exceeds the item count");
  }
  const auto row = truth.row(user);
  std::vector<double> noisy(row.begin(), row.end());
  if (noise_sd > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sd);
    for (double& v : noisy) v += noise(rng);
  }
  std::vector<ItemId> items = AllItems(n);
  auto cmp = [&](ItemId a, ItemId b) {
    if (noisy[a] != noisy[b]) return noisy[a] > noisy[b];
    return a < b;
  };
  std::partial_sort(items.begin(), items.begin() + size, items.end(), cmp);
  items.resize(size);
  return items;
}

OfflineRun simulate_offline(const Dataset& dataset, const PolicyConfig& policy,
                            const SimConfig& cfg) {
  CheckDatasetFits(dataset, cfg);
  ValidatePolicy(policy);
  const PositionModel positions(cfg.list_size);
  const std::vector<double> y = ExpectedGains(dataset.profiles);
  const RankingContext ctx{dataset.catalog, dataset.profiles, y, positions};
  const std::size_t users = dataset.relevance.user_count();

  std::mt19937_64 rng = MakeRng(cfg.seed, 0);
  std::vector<UserId> order(users);
  std::iota(order.begin(), order.end(), UserId{0});
  std::shuffle(order.begin(), order.end(), rng);

  OfflineRun run;
  run.ledger = GainLedger(dataset.catalog.provider_count(),
                          dataset.catalog.item_count());
  const auto start = Clock::now();
  if (policy.kind == PolicyKind::kEquityRankV) {
    std::vector<double> gains(dataset.catalog.provider_count(), 0.0);
    VerticalAllocation alloc =
        allocate_vertical(order, dataset.relevance, gains, ctx, policy.alpha);
    run.lists = std::move(alloc.lists);
    for (const RankList& list : run.lists) {
      CommitExpected(list, dataset, positions, run.ledger);
    }
  } else {
    const std::vector<ItemId> all = AllItems(dataset.catalog.item_count());
    std::vector<double> gains;
    run.lists.reserve(users);
    for (UserId u : order) {
      FillRawGains(run.ledger, gains);
      RankList list{u, RankOfflineList(policy, all, dataset.relevance.row(u),
                                       gains, ctx)};
      CommitExpected(list, dataset, positions, run.ledger);
      run.lists.push_back(std::move(list));
    }
  }
  const double elapsed = SecondsSince(start);

  RunResult& r = run.result;
  r.mode = SimMode::kOffline;
  r.policy = PolicyName(policy.kind);
  r.alpha = UsesAlpha(policy.kind) ? policy.alpha : 0.0;
  r.seed = cfg.seed;
  r.effectiveness = andcg(run.lists, dataset.relevance, cfg.cutoff, positions);
  r.unfairness = LedgerUnfairness(run.ledger, y);
  r.unfairness_defined = !std::isnan(r.unfairness);
  FillAlignment(run.ledger, dataset.profiles, r);
  r.wall_seconds = elapsed;
  return run;
}

RunResult run_offline(const Dataset& dataset, const PolicyConfig& policy,
                      const SimConfig& cfg) {
  return simulate_offline(dataset, policy, cfg).result;
}

OnlineRun run_online(const Dataset& dataset, const PolicyConfig& policy,
                     const SimConfig& cfg) {
  if (policy.kind == PolicyKind::kEquityRankV) {
    throw InvalidModeError("EquityRank_v is only available offline");
  }
  CheckDatasetFits(dataset, cfg);
  ValidatePolicy(policy);
  const std::size_t users = dataset.relevance.user_count();
  const std::size_t n = dataset.catalog.item_count();
  if (cfg.prefilter_size > n) {
    throw std::invalid_argument("prefilter size exceeds the item count");
  }
  const PositionModel positions(cfg.list_size);
  const std::vector<double> y = ExpectedGains(dataset.profiles);
  const RankingContext ctx{dataset.catalog, dataset.profiles, y, positions};

  OnlineState state;
  state.ledger = GainLedger(dataset.catalog.provider_count(), n);
  state.estimator = RelevanceEstimator(users, n);
  state.rng = MakeRng(cfg.seed, 1);
  state.candidates.resize(users);
  std::vector<double> ideal(users);
  for (UserId u = 0; u < users; ++u) {
    state.candidates[u] = prefilter_candidates(
        u, dataset.relevance, cfg.prefilter_size, cfg.prefilter_noise, state.rng);
    ideal[u] = ideal_dcg(dataset.relevance.row(u), cfg.cutoff, positions);
  }

  OnlineRun run;
  if (cfg.record_ndcg) run.ndcg.reserve(cfg.steps);
  std::uniform_int_distribution<std::size_t> pick_user(0, users - 1);
  std::vector<double> gains;
  std::vector<double> estimated;
  const auto start = Clock::now();
  for (std::uint64_t t = 1; t <= cfg.steps; ++t) {
    const UserId u = static_cast<UserId>(pick_user(state.rng));
    const std::vector<ItemId>& candidates = state.candidates[u];
    estimated.resize(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      estimated[i] = estimate_relevance(u, candidates[i], state.estimator);
    }
    FillRawGains(state.ledger, gains);
    RankList list{u, online_step_rank(policy, candidates, estimated, gains, ctx)};
    apply_feedback(list, dataset.relevance, dataset.profiles, dataset.catalog,
                   state, positions);
    const double step_ndcg = ndcg_with_ideal(
        list.items, dataset.relevance.row(u), cfg.cutoff, ideal[u], positions);
    state.cndcg = cndcg_update(state.cndcg, step_ndcg, cfg.gamma);
    if (cfg.record_ndcg) run.ndcg.push_back(step_ndcg);
    if (t % cfg.checkpoint_every == 0 || t == cfg.steps) {
      run.series.push_back({t, state.cndcg, LedgerUnfairness(state.ledger, y)});
    }
  }
  const double elapsed = SecondsSince(start);
  run.seconds_per_step =
      cfg.steps > 0 ? elapsed / static_cast<double>(cfg.steps) : 0.0;

  RunResult& r = run.result;
  r.mode = SimMode::kOnline;
  r.policy = PolicyName(policy.kind);
  r.alpha = UsesAlpha(policy.kind) ? policy.alpha : 0.0;
  r.seed = cfg.seed;
  r.effectiveness = state.cndcg;
  r.unfairness = LedgerUnfairness(state.ledger, y);
  r.unfairness_defined = !std::isnan(r.unfairness);
  FillAlignment(state.ledger, dataset.profiles, r);
  r.wall_seconds = elapsed;
  run.ledger = std::move(state.ledger);
  return run;
}

std::string TimeSeriesCsv(std::span<const Checkpoint> series) {
  std::string out = "step,cndcg,unfairness\n";
  for (const Checkpoint& c : series) {
    out += std::to_string(c.step) + "," + FormatReal(c.cndcg) + "," +
           FormatReal(c.unfairness) + "\n";
  }
  return out;
}

}  // namespace equityrank
