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

#ifndef EQUITYRANK_RANKERS_H_
#define EQUITYRANK_RANKERS_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "equityrank/core.h"

namespace equityrank {

enum class PolicyKind {
  kTopK,
  kPoorK,
  kFairCoStar,
  kMMFStar,
  kEquityRank,
  kEquityRankV,
};

// Only one tie rule exists: score desc, then relevance desc, then item id asc.
enum class TieBreak { kRelevanceThenLowestId };

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kTopK;
  double alpha = 0.0;  // ignored by TopK and PoorK
  TieBreak tie_break = TieBreak::kRelevanceThenLowestId;
};

std::string PolicyName(PolicyKind kind);
// Accepts display names ("FairCo*", "EquityRank_v") and lowercase aliases
// ("fairco", "equityrank_v", "mmfstar", ...).
PolicyKind ParsePolicy(const std::string& name);
bool UsesAlpha(PolicyKind kind);
// Throws std::invalid_argument for alpha < 0, or alpha > 1 with MMF*.
void ValidatePolicy(const PolicyConfig& policy);

// Per-candidate scores, aligned with the candidate list.
using ScoreVector = std::vector<double>;

// Static inputs shared by all policies for one dataset.
struct RankingContext {
  const Catalog& catalog;
  std::span<const ProviderProfile> profiles;
  std::span<const double> expected;  // y per provider
  const PositionModel& positions;

  std::size_t list_size() const { return positions.list_size(); }
};

// Per-item score of the fairness-corrected objective:
//   r + alpha * B(g) * (v_e + r * v_b).
inline double EquityScore(double relevance, double alpha, double b, double v_e,
                          double v_b) {
  return relevance + alpha * b * (v_e + relevance * v_b);
}

// Scores every candidate from the raw cumulative provider gains. B(g) is
// computed once per call. Throws std::invalid_argument on unknown item ids.
ScoreVector equityrank_scores(std::span<const ItemId> candidates,
                              std::span<const double> relevance,
                              std::span<const double> provider_gains,
                              const RankingContext& ctx, double alpha);

// Top `list_size` candidates by descending score; ties broken by relevance
// desc, then item id asc. Throws if fewer than `list_size` candidates.
std::vector<ItemId> rank_by_scores(std::span<const ItemId> candidates,
                                   std::span<const double> scores,
                                   std::span<const double> relevance,
                                   std::size_t list_size);

std::vector<ItemId> rank_topk(std::span<const ItemId> candidates,
                              std::span<const double> relevance,
                              std::size_t list_size);

// Slot by slot: take the provider with the smallest G/y among providers that
// still have candidates, then its most relevant remaining candidate. The
// expected gain of each placed item is added to a slot-local gain copy.
std::vector<ItemId> rank_poork(std::span<const ItemId> candidates,
                               std::span<const double> relevance,
                               std::span<const double> provider_gains,
                               const RankingContext& ctx);

// Proportional controller on the equity imbalance D = G / y:
//   score = r + alpha * max(0, max_g' D(g') - D(g)).
// With slot_local the error is refreshed after every placed slot.
std::vector<ItemId> rank_fairco_star(std::span<const ItemId> candidates,
                                     std::span<const double> relevance,
                                     std::span<const double> provider_gains,
                                     const RankingContext& ctx, double alpha,
                                     bool slot_local);

// Per slot: score = (1 - alpha) * minmax(r) + alpha * [group is worst off].
// alpha = 1 reproduces rank_poork. Throws unless 0 <= alpha <= 1.
std::vector<ItemId> rank_mmf_star(std::span<const ItemId> candidates,
                                  std::span<const double> relevance,
                                  std::span<const double> provider_gains,
                                  const RankingContext& ctx, double alpha);

// Sorts by the equity score. With slot_local, B(g) is recomputed after every
// slot from a slot-local gain copy and the best remaining item is taken.
std::vector<ItemId> rank_equityrank(std::span<const ItemId> candidates,
                                    std::span<const double> relevance,
                                    std::span<const double> provider_gains,
                                    const RankingContext& ctx, double alpha,
                                    bool slot_local);

struct VerticalAllocation {
  std::vector<RankList> lists;  // same order as the input users
  std::vector<std::pair<UserId, std::size_t>> order;  // (user, 1-based slot)
};

// Fills slot 1 for every user, then slot 2, and so on. Each (user, slot)
// takes the user's unassigned item with the largest current equity score and
// immediately adds its expected gain p_k * (v_e + r v_b) to
// `provider_gains`.
VerticalAllocation allocate_vertical(std::span<const UserId> users,
                                     const RelevanceTable& relevance,
                                     std::vector<double>& provider_gains,
                                     const RankingContext& ctx, double alpha);

// Offline single-list dispatch; stateful policies use slot-local updates.
// EquityRank_v needs the whole user batch and is rejected here.
std::vector<ItemId> RankOfflineList(const PolicyConfig& policy,
                                    std::span<const ItemId> candidates,
                                    std::span<const double> relevance,
                                    std::span<const double> provider_gains,
                                    const RankingContext& ctx);

// Online dispatch over estimated relevance. Throws InvalidModeError for
// EquityRank_v.
std::vector<ItemId> online_step_rank(const PolicyConfig& policy,
                                     std::span<const ItemId> candidates,
                                     std::span<const double> estimated,
                                     std::span<const double> provider_gains,
                                     const RankingContext& ctx);

}  // namespace equityrank

#endif  // EQUITYRANK_RANKERS_H_
