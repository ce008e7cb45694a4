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

#include "equityrank/rankers.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <stdexcept>

#include "equityrank/metrics.h"

namespace equityrank {
namespace {

// Strict "ranks before" for the shared tie rule.
inline bool Before(double score_a, double rel_a, ItemId id_a, double score_b,
                   double rel_b, ItemId id_b) {
  if (score_a != score_b) return score_a > score_b;
  if (rel_a != rel_b) return rel_a > rel_b;
  return id_a < id_b;
}

void CheckCandidates(std::span<const ItemId> candidates,
                     std::span<const double> relevance, std::size_t list_size,
                     std::size_t item_count) {
  if (candidates.size() != relevance.size()) {
    throw std::invalid_argument("candidates and relevance differ in size");
  }
  if (candidates.size() < list_size) {
    throw std::invalid_argument("fewer candidates than list slots");
  }
  for (ItemId item : candidates) {
    if (item >= item_count) {
      throw std::invalid_argument("unknown item id " + std::to_string(item));
    }
  }
}

double SlotGain(const ProviderProfile& profile, double relevance, double prob) {
  return prob * (profile.v_e + relevance * profile.v_b);
}

// Index of the best candidate among those not yet placed, by a per-candidate
// score callback.
template <typename ScoreFn>
std::size_t BestRemaining(std::span<const ItemId> candidates,
                          std::span<const double> relevance,
                          const std::vector<char>& placed, ScoreFn score) {
  std::size_t best = candidates.size();
  double best_score = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (placed[i]) continue;
    const double s = score(i);
    if (best == candidates.size() ||
        Before(s, relevance[i], candidates[i], best_score, relevance[best],
               candidates[best])) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

// Candidates bucketed by provider, for the group-first policies.
struct GroupBuckets {
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> remaining;
};

GroupBuckets BucketByGroup(std::span<const ItemId> candidates,
                           const Catalog& catalog) {
  GroupBuckets buckets;
  buckets.members.resize(catalog.provider_count());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    buckets.members[catalog.group_of(candidates[i])].push_back(i);
  }
  buckets.remaining.resize(buckets.members.size());
  for (std::size_t g = 0; g < buckets.members.size(); ++g) {
    buckets.remaining[g] = buckets.members[g].size();
  }
  return buckets;
}

// Provider with the smallest G/y among providers with remaining candidates;
// lowest id on ties.
ProviderId WorstOffGroup(const GroupBuckets& buckets,
                         std::span<const double> gains,
                         std::span<const double> expected) {
  ProviderId worst = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t g = 0; g < buckets.remaining.size(); ++g) {
    if (buckets.remaining[g] == 0) continue;
    const double ratio = gains[g] / expected[g];
    if (!found || ratio < worst_ratio) {
      worst = static_cast<ProviderId>(g);
      worst_ratio = ratio;
      found = true;
    }
  }
  if (!found) throw std::logic_error("no provider has remaining candidates");
  return worst;
}

}  // namespace

std::string PolicyName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kTopK: return "TopK";
    case PolicyKind::kPoorK: return "PoorK";
    case PolicyKind::kFairCoStar: return "FairCo*";
    case PolicyKind::kMMFStar: return "MMF*";
    case PolicyKind::kEquityRank: return "EquityRank";
    case PolicyKind::kEquityRankV: return "EquityRank_v";
  }
  return "unknown";
}

PolicyKind ParsePolicy(const std::string& name) {
  std::string key;
  for (char c : name) {
    if (c == '*' || c == '_' || c == '-') continue;
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (key == "topk") return PolicyKind::kTopK;
  if (key == "poork") return PolicyKind::kPoorK;
  if (key == "fairco" || key == "faircostar") return PolicyKind::kFairCoStar;
  if (key == "mmf" || key == "mmfstar") return PolicyKind::kMMFStar;
  if (key == "equityrank") return PolicyKind::kEquityRank;
  if (key == "equityrankv") return PolicyKind::kEquityRankV;
  throw std::invalid_argument("unknown policy '" + name + "'");
}

bool UsesAlpha(PolicyKind kind) {
  return kind != PolicyKind::kTopK && kind != PolicyKind::kPoorK;
}

void ValidatePolicy(const PolicyConfig& policy) {
  if (!(policy.alpha >= 0.0) || !std::isfinite(policy.alpha)) {
    throw std::invalid_argument("alpha must be finite and >= 0");
  }
  if (policy.kind == PolicyKind::kMMFStar && policy.alpha > 1.0) {
    throw std::invalid_argument("MMF* requires 0 <= alpha <= 1");
  }
}

ScoreVector equityrank_scores(std::span<const ItemId> candidates,
                              std::span<const double> relevance,
                              std::span<const double> provider_gains,
                              const RankingContext& ctx, double alpha) {
  CheckCandidates(candidates, relevance, 0, ctx.catalog.item_count());
  const std::vector<double> b = fairness_gradient(provider_gains, ctx.expected);
  ScoreVector scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const ProviderId g = ctx.catalog.group_of(candidates[i]);
    const ProviderProfile& p = ctx.profiles[g];
    scores[i] = EquityScore(relevance[i], alpha, b[g], p.v_e, p.v_b);
  }
  return scores;
}

std::vector<ItemId> rank_by_scores(std::span<const ItemId> candidates,
                                   std::span<const double> scores,
                                   std::span<const double> relevance,
                                   std::size_t list_size) {
  if (scores.size() != candidates.size() ||
      relevance.size() != candidates.size()) {
    throw std::invalid_argument("scores, relevance and candidates differ in size");
  }
  if (candidates.size() < list_size) {
    throw std::invalid_argument("fewer candidates than list slots");
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto cmp = [&](std::size_t a, std::size_t b) {
    return Before(scores[a], relevance[a], candidates[a], scores[b],
                  relevance[b], candidates[b]);
  };
  if (list_size < order.size()) {
    std::nth_element(order.begin(), order.begin() + list_size, order.end(), cmp);
  }
  std::sort(order.begin(), order.begin() + list_size, cmp);
  std::vector<ItemId> ranked(list_size);
  for (std::size_t k = 0; k < list_size; ++k) ranked[k] = candidates[order[k]];
  return ranked;
}

std::vector<ItemId> rank_topk(std::span<const ItemId> candidates,
                              std::span<const double> relevance,
                              std::size_t list_size) {
  return rank_by_scores(candidates, relevance, relevance, list_size);
}

std::vector<ItemId> rank_poork(std::span<const ItemId> candidates,
                               std::span<const double> relevance,
                               std::span<const double> provider_gains,
                               const RankingContext& ctx) {
  const std::size_t list_size = ctx.list_size();
  CheckCandidates(candidates, relevance, list_size, ctx.catalog.item_count());
  std::vector<double> gains(provider_gains.begin(), provider_gains.end());
  GroupBuckets buckets = BucketByGroup(candidates, ctx.catalog);
  std::vector<char> placed(candidates.size(), 0);
  std::vector<ItemId> ranked;
  ranked.reserve(list_size);
  for (std::size_t k = 1; k <= list_size; ++k) {
    const ProviderId g = WorstOffGroup(buckets, gains, ctx.expected);
    std::size_t best = candidates.size();
    for (std::size_t i : buckets.members[g]) {
      if (placed[i]) continue;
      if (best == candidates.size() ||
          Before(relevance[i], relevance[i], candidates[i], relevance[best],
                 relevance[best], candidates[best])) {
        best = i;
      }
    }
    placed[best] = 1;
    --buckets.remaining[g];
    ranked.push_back(candidates[best]);
    gains[g] += SlotGain(ctx.profiles[g], relevance[best], ctx.positions.prob(k));
  }
  return ranked;
}

std::vector<ItemId> rank_fairco_star(std::span<const ItemId> candidates,
                                     std::span<const double> relevance,
                                     std::span<const double> provider_gains,
                                     const RankingContext& ctx, double alpha,
                                     bool slot_local) {
  const std::size_t list_size = ctx.list_size();
  CheckCandidates(candidates, relevance, list_size, ctx.catalog.item_count());
  const std::size_t m = ctx.catalog.provider_count();
  std::vector<double> gains(provider_gains.begin(), provider_gains.end());
  std::vector<double> error(m);
  auto refresh_error = [&] {
    double max_ratio = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < m; ++g) {
      max_ratio = std::max(max_ratio, gains[g] / ctx.expected[g]);
    }
    for (std::size_t g = 0; g < m; ++g) {
      error[g] = std::max(0.0, max_ratio - gains[g] / ctx.expected[g]);
    }
  };
  refresh_error();
  auto score = [&](std::size_t i) {
    return relevance[i] + alpha * error[ctx.catalog.group_of(candidates[i])];
  };
  if (!slot_local) {
    ScoreVector scores(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) scores[i] = score(i);
    return rank_by_scores(candidates, scores, relevance, list_size);
  }
  std::vector<char> placed(candidates.size(), 0);
  std::vector<ItemId> ranked;
  ranked.reserve(list_size);
  for (std::size_t k = 1; k <= list_size; ++k) {
    const std::size_t best = BestRemaining(candidates, relevance, placed, score);
    placed[best] = 1;
    ranked.push_back(candidates[best]);
    const ProviderId g = ctx.catalog.group_of(candidates[best]);
    gains[g] += SlotGain(ctx.profiles[g], relevance[best], ctx.positions.prob(k));
    refresh_error();
  }
  return ranked;
}

std::vector<ItemId> rank_mmf_star(std::span<const ItemId> candidates,
                                  std::span<const double> relevance,
                                  std::span<const double> provider_gains,
                                  const RankingContext& ctx, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("MMF* requires 0 <= alpha <= 1");
  }
  const std::size_t list_size = ctx.list_size();
  CheckCandidates(candidates, relevance, list_size, ctx.catalog.item_count());
  std::vector<double> gains(provider_gains.begin(), provider_gains.end());
  GroupBuckets buckets = BucketByGroup(candidates, ctx.catalog);
  std::vector<char> placed(candidates.size(), 0);
  std::vector<ItemId> ranked;
  ranked.reserve(list_size);
  for (std::size_t k = 1; k <= list_size; ++k) {
    const ProviderId worst = WorstOffGroup(buckets, gains, ctx.expected);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (placed[i]) continue;
      lo = std::min(lo, relevance[i]);
      hi = std::max(hi, relevance[i]);
    }
    const double span = hi - lo;
    auto score = [&](std::size_t i) {
      const double normalized = span > 0.0 ? (relevance[i] - lo) / span : 0.0;
      const double indicator =
          ctx.catalog.group_of(candidates[i]) == worst ? 1.0 : 0.0;
      return (1.0 - alpha) * normalized + alpha * indicator;
    };
    const std::size_t best = BestRemaining(candidates, relevance, placed, score);
    placed[best] = 1;
    const ProviderId g = ctx.catalog.group_of(candidates[best]);
    --buckets.remaining[g];
    ranked.push_back(candidates[best]);
    gains[g] += SlotGain(ctx.profiles[g], relevance[best], ctx.positions.prob(k));
  }
  return ranked;
}

std::vector<ItemId> rank_equityrank(std::span<const ItemId> candidates,
                                    std::span<const double> relevance,
                                    std::span<const double> provider_gains,
                                    const RankingContext& ctx, double alpha,
                                    bool slot_local) {
  const std::size_t list_size = ctx.list_size();
  CheckCandidates(candidates, relevance, list_size, ctx.catalog.item_count());
  if (!slot_local) {
    const ScoreVector scores =
        equityrank_scores(candidates, relevance, provider_gains, ctx, alpha);
    return rank_by_scores(candidates, scores, relevance, list_size);
  }
  std::vector<double> gains(provider_gains.begin(), provider_gains.end());
  std::vector<char> placed(candidates.size(), 0);
  std::vector<ItemId> ranked;
  ranked.reserve(list_size);
  for (std::size_t k = 1; k <= list_size; ++k) {
    const std::vector<double> b = fairness_gradient(gains, ctx.expected);
    auto score = [&](std::size_t i) {
      const ProviderId g = ctx.catalog.group_of(candidates[i]);
      const ProviderProfile& p = ctx.profiles[g];
      return EquityScore(relevance[i], alpha, b[g], p.v_e, p.v_b);
    };
    const std::size_t best = BestRemaining(candidates, relevance, placed, score);
    placed[best] = 1;
    ranked.push_back(candidates[best]);
    const ProviderId g = ctx.catalog.group_of(candidates[best]);
    gains[g] += SlotGain(ctx.profiles[g], relevance[best], ctx.positions.prob(k));
  }
  return ranked;
}

VerticalAllocation allocate_vertical(std::span<const UserId> users,
                                     const RelevanceTable& relevance,
                                     std::vector<double>& provider_gains,
                                     const RankingContext& ctx, double alpha) {
  const std::size_t n = ctx.catalog.item_count();
  const std::size_t m = ctx.catalog.provider_count();
  const std::size_t list_size = ctx.list_size();
  if (n < list_size) {
    throw std::invalid_argument("fewer items than list slots");
  }
  if (relevance.item_count() != n || provider_gains.size() != m) {
    throw std::invalid_argument("vertical allocation inputs disagree in size");
  }
  VerticalAllocation out;
  out.lists.resize(users.size());
  out.order.reserve(users.size() * list_size);
  for (std::size_t u = 0; u < users.size(); ++u) {
    out.lists[u].user = users[u];
    out.lists[u].items.reserve(list_size);
  }
  std::vector<char> assigned(users.size() * n, 0);
  std::vector<double> slope(m);      // alpha * B(g) * v_b
  std::vector<double> intercept(m);  // alpha * B(g) * v_e
  for (std::size_t k = 1; k <= list_size; ++k) {
    const double prob = ctx.positions.prob(k);
    for (std::size_t u = 0; u < users.size(); ++u) {
      const std::vector<double> b = fairness_gradient(provider_gains, ctx.expected);
      for (std::size_t g = 0; g < m; ++g) {
        intercept[g] = alpha * b[g] * ctx.profiles[g].v_e;
        slope[g] = alpha * b[g] * ctx.profiles[g].v_b;
      }
      const auto row = relevance.row(users[u]);
      const char* taken = assigned.data() + u * n;
      std::size_t best = n;
      double best_score = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        const ProviderId g = ctx.catalog.group_of(static_cast<ItemId>(i));
        // EquityScore up to rounding, factored per group.
        const double r = row[i];
        const double s = r + (intercept[g] + r * slope[g]);
        if (best == n || Before(s, r, static_cast<ItemId>(i), best_score,
                                row[best], static_cast<ItemId>(best))) {
          best = i;
          best_score = s;
        }
      }
      assigned[u * n + best] = 1;
      out.lists[u].items.push_back(static_cast<ItemId>(best));
      out.order.emplace_back(users[u], k);
      const ProviderId g = ctx.catalog.group_of(static_cast<ItemId>(best));
      provider_gains[g] += SlotGain(ctx.profiles[g], row[best], prob);
    }
  }
  return out;
}

std::vector<ItemId> RankOfflineList(const PolicyConfig& policy,
                                    std::span<const ItemId> candidates,
                                    std::span<const double> relevance,
                                    std::span<const double> provider_gains,
                                    const RankingContext& ctx) {
  ValidatePolicy(policy);
  switch (policy.kind) {
    case PolicyKind::kTopK:
      return rank_topk(candidates, relevance, ctx.list_size());
    case PolicyKind::kPoorK:
      return rank_poork(candidates, relevance, provider_gains, ctx);
    case PolicyKind::kFairCoStar:
      return rank_fairco_star(candidates, relevance, provider_gains, ctx,
                              policy.alpha, /*slot_local=*/true);
    case PolicyKind::kMMFStar:
      return rank_mmf_star(candidates, relevance, provider_gains, ctx,
                           policy.alpha);
    case PolicyKind::kEquityRank:
      return rank_equityrank(candidates, relevance, provider_gains, ctx,
                             policy.alpha, /*slot_local=*/true);
    case PolicyKind::kEquityRankV:
      throw std::invalid_argument(
          "EquityRank_v allocates a whole user batch; use allocate_vertical");
  }
  throw std::logic_error("unhandled policy");
}

std::vector<ItemId> online_step_rank(const PolicyConfig& policy,
                                     std::span<const ItemId> candidates,
                                     std::span<const double> estimated,
                                     std::span<const double> provider_gains,
                                     const RankingContext& ctx) {
  ValidatePolicy(policy);
  switch (policy.kind) {
    case PolicyKind::kTopK:
      return rank_topk(candidates, estimated, ctx.list_size());
    case PolicyKind::kPoorK:
      return rank_poork(candidates, estimated, provider_gains, ctx);
    case PolicyKind::kFairCoStar:
      return rank_fairco_star(candidates, estimated, provider_gains, ctx,
                              policy.alpha, /*slot_local=*/false);
    case PolicyKind::kMMFStar:
      return rank_mmf_star(candidates, estimated, provider_gains, ctx,
                           policy.alpha);
    case PolicyKind::kEquityRank:
      return rank_equityrank(candidates, estimated, provider_gains, ctx,
                             policy.alpha, /*slot_local=*/false);
    case PolicyKind::kEquityRankV:
      throw InvalidModeError("EquityRank_v is only available offline");
  }
  throw std::logic_error("unhandled policy");
}

}  // namespace equityrank
