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

#ifndef EQUITYRANK_SIM_H_
#define EQUITYRANK_SIM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "equityrank/core.h"
#include "equityrank/metrics.h"
#include "equityrank/rankers.h"

namespace equityrank {

struct SimConfig {
  std::size_t list_size = 5;           // K
  std::uint64_t steps = 250000;        // online requests
  double gamma = 0.995;                // cNDCG discount
  std::size_t cutoff = 5;              // k_c
  std::size_t prefilter_size = 20;     // online candidate set per user
  double prefilter_noise = 0.1;        // sd of the coarse ranker's noise
  std::uint64_t checkpoint_every = 1000;
  SimMode mode = SimMode::kOffline;
  std::uint64_t seed = 0;
  bool record_ndcg = false;            // keep the per-step NDCG series
};

// Throws std::invalid_argument on inconsistent settings.
void ValidateSimConfig(const SimConfig& cfg);

// Per-(user, item) click-model counters behind r_hat = cumB / E.
class RelevanceEstimator {
 public:
  RelevanceEstimator() = default;
  RelevanceEstimator(std::size_t user_count, std::size_t item_count);

  double exposure(UserId user, ItemId item) const {
    return exposure_[Index(user, item)];
  }
  std::uint32_t purchases(UserId user, ItemId item) const {
    return purchases_[Index(user, item)];
  }
  void Record(UserId user, ItemId item, double prob, bool purchased);

 private:
  std::size_t Index(UserId user, ItemId item) const {
    return static_cast<std::size_t>(user) * item_count_ + item;
  }

  std::size_t item_count_ = 0;
  std::vector<double> exposure_;
  std::vector<std::uint32_t> purchases_;
};

// cumB / E clamped to [0, 1]; 1.0 for a pair that was never exposed.
double estimate_relevance(UserId user, ItemId item,
                          const RelevanceEstimator& estimator);

struct OnlineState {
  GainLedger ledger;
  RelevanceEstimator estimator;
  std::vector<std::vector<ItemId>> candidates;  // fixed per user for the run
  double cndcg = 0.0;
  std::uint64_t step = 0;
  std::mt19937_64 rng;
};

// Serves `list` to its user: every position adds p_k * v_e exposure gain and
// p_k exposure; a purchase is drawn with probability p_k * r and earns v_b.
// Advances the step counter. Returns one purchase flag per position.
std::vector<bool> apply_feedback(const RankList& list,
                                 const RelevanceTable& truth,
                                 std::span<const ProviderProfile> profiles,
                                 const Catalog& catalog, OnlineState& state,
                                 const PositionModel& positions);

// Top `size` items of the user by true relevance plus N(0, noise_sd) noise;
// ties go to the lower item id. Throws if size exceeds the item count.
std::vector<ItemId> prefilter_candidates(UserId user,
                                         const RelevanceTable& truth,
                                         std::size_t size, double noise_sd,
                                         std::mt19937_64& rng);

// Everything an offline run produced, for inspection.
struct OfflineRun {
  RunResult result;
  std::vector<RankList> lists;  // in service order
  GainLedger ledger;
};

OfflineRun simulate_offline(const Dataset& dataset, const PolicyConfig& policy,
                            const SimConfig& cfg);

RunResult run_offline(const Dataset& dataset, const PolicyConfig& policy,
                      const SimConfig& cfg);

struct Checkpoint {
  std::uint64_t step = 0;
  double cndcg = 0.0;
  double unfairness = 0.0;
};

struct OnlineRun {
  RunResult result;
  std::vector<Checkpoint> series;
  std::vector<double> ndcg;       // per step, when cfg.record_ndcg
  double seconds_per_step = 0.0;  // serving loop only
  GainLedger ledger;
};

// Throws InvalidModeError for EquityRank_v.
OnlineRun run_online(const Dataset& dataset, const PolicyConfig& policy,
                     const SimConfig& cfg);

// "step,cndcg,unfairness" with one row per checkpoint.
std::string TimeSeriesCsv(std::span<const Checkpoint> series);

// Independent RNG stream for (seed, stream).
std::mt19937_64 MakeRng(std::uint64_t seed, std::uint64_t stream);

}  // namespace equityrank

#endif  // EQUITYRANK_SIM_H_
