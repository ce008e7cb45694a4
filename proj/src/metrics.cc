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

#include "equityrank/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace equityrank {
namespace {

void CheckCutoff(std::size_t cutoff, const PositionModel& positions) {
  if (cutoff < 1 || cutoff > positions.list_size()) {
    throw std::invalid_argument("cutoff must satisfy 1 <= k_c <= K");
  }
}

void CheckFairnessInputs(std::span<const double> gains,
                         std::span<const double> expected) {
  if (gains.size() != expected.size()) {
    throw std::invalid_argument("gain and expected-gain vectors differ in size");
  }
  if (gains.size() < 2) {
    throw std::invalid_argument(
        "pairwise unfairness needs at least two providers");
  }
  for (double y : expected) {
    if (!(y > 0.0)) {
      throw std::invalid_argument("expected gains must be > 0");
    }
  }
}

}  // namespace

double dcg(std::span<const ItemId> ranking,
           std::span<const double> user_relevance, std::size_t cutoff,
           const PositionModel& positions) {
  CheckCutoff(cutoff, positions);
  const std::size_t depth = std::min(cutoff, ranking.size());
  double total = 0.0;
  for (std::size_t k = 0; k < depth; ++k) {
    total += user_relevance[ranking[k]] * positions.prob(k + 1);
  }
  return total;
}

double ideal_dcg(std::span<const double> user_relevance, std::size_t cutoff,
                 const PositionModel& positions) {
  CheckCutoff(cutoff, positions);
  const std::size_t depth = std::min(cutoff, user_relevance.size());
  std::vector<double> top(depth);
  std::partial_sort_copy(user_relevance.begin(), user_relevance.end(),
                         top.begin(), top.end(), std::greater<>());
  double total = 0.0;
  for (std::size_t k = 0; k < depth; ++k) {
    total += top[k] * positions.prob(k + 1);
  }
  return total;
}

double ndcg_with_ideal(std::span<const ItemId> ranking,
                       std::span<const double> user_relevance,
                       std::size_t cutoff, double ideal,
                       const PositionModel& positions) {
  if (ideal <= 0.0) return 1.0;
  return dcg(ranking, user_relevance, cutoff, positions) / ideal;
}

double ndcg(std::span<const ItemId> ranking,
            std::span<const double> user_relevance, std::size_t cutoff,
            const PositionModel& positions) {
  return ndcg_with_ideal(ranking, user_relevance, cutoff,
                         ideal_dcg(user_relevance, cutoff, positions),
                         positions);
}

double cndcg_update(double prev, double ndcg_t, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in (0, 1]");
  }
  if (!(prev >= 0.0)) {
    throw std::invalid_argument("cumulative NDCG must be >= 0");
  }
  return gamma * prev + ndcg_t;
}

double andcg(std::span<const RankList> lists, const RelevanceTable& relevance,
             std::size_t cutoff, const PositionModel& positions) {
  if (lists.empty()) {
    throw std::invalid_argument("aNDCG over an empty set of lists");
  }
  double total = 0.0;
  for (const RankList& list : lists) {
    total += ndcg(list.items, relevance.row(list.user), cutoff, positions);
  }
  return total / static_cast<double>(lists.size());
}

double expected_gain(ProviderId provider, const RankList& list,
                     const Catalog& catalog,
                     std::span<const ProviderProfile> profiles,
                     const RelevanceTable& relevance,
                     const PositionModel& positions) {
  const ProviderProfile& profile = profiles[provider];
  double total = 0.0;
  for (std::size_t k = 0; k < list.items.size(); ++k) {
    const ItemId item = list.items[k];
    if (catalog.group_of(item) != provider) continue;
    total += positions.prob(k + 1) *
             (relevance.at(list.user, item) * profile.v_b + profile.v_e);
  }
  return total;
}

double unfairness(std::span<const double> gains,
                  std::span<const double> expected) {
  CheckFairnessInputs(gains, expected);
  const std::size_t m = gains.size();
  double total = 0.0;
  // i == j terms vanish identically.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = gains[i] * expected[j] - gains[j] * expected[i];
      total += 2.0 * d * d;
    }
  }
  return total / (static_cast<double>(m) * static_cast<double>(m - 1));
}

std::vector<double> fairness_gradient(std::span<const double> gains,
                                      std::span<const double> expected) {
  CheckFairnessInputs(gains, expected);
  const std::size_t m = gains.size();
  double cross = 0.0;
  double sq = 0.0;
  for (std::size_t g = 0; g < m; ++g) {
    cross += gains[g] * expected[g];
    sq += expected[g] * expected[g];
  }
  const double scale =
      4.0 / (static_cast<double>(m) * static_cast<double>(m - 1));
  std::vector<double> b(m);
  for (std::size_t g = 0; g < m; ++g) {
    b[g] = scale * (expected[g] * cross - gains[g] * sq);
  }
  return b;
}

std::vector<double> ExpectedGains(std::span<const ProviderProfile> profiles) {
  std::vector<double> y(profiles.size());
  std::transform(profiles.begin(), profiles.end(), y.begin(),
                 [](const ProviderProfile& p) { return p.y; });
  return y;
}

GainLedger::GainLedger(std::size_t provider_count, std::size_t item_count)
    : exposure_gain_(provider_count, 0.0),
      purchase_gain_(provider_count, 0.0),
      item_exposure_(item_count, 0.0),
      group_exposure_(provider_count, 0.0) {}

void GainLedger::AddExposure(ProviderId provider, ItemId item, double prob,
                             double gain) {
  if (!(prob >= 0.0) || !(gain >= 0.0)) {
    throw std::invalid_argument("ledger increments must be >= 0");
  }
  exposure_gain_[provider] += gain;
  item_exposure_[item] += prob;
  group_exposure_[provider] += prob;
}

void GainLedger::AddPurchaseGain(ProviderId provider, double gain) {
  if (!(gain >= 0.0)) {
    throw std::invalid_argument("ledger increments must be >= 0");
  }
  purchase_gain_[provider] += gain;
}

std::vector<double> GainLedger::RawGains() const {
  std::vector<double> g(provider_count());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = exposure_gain_[i] + purchase_gain_[i];
  }
  return g;
}

std::vector<double> GainLedger::AveragedGains() const {
  if (step_count_ == 0) {
    throw std::logic_error("averaged gains are undefined before any step");
  }
  std::vector<double> g = RawGains();
  const double t = static_cast<double>(step_count_);
  for (double& v : g) v /= t;
  return g;
}

std::vector<double> GroupMeanRelevance(const Catalog& catalog,
                                       const RelevanceTable& relevance) {
  const std::size_t users = relevance.user_count();
  std::vector<double> item_mean(catalog.item_count(), 0.0);
  for (UserId u = 0; u < users; ++u) {
    const auto row = relevance.row(u);
    for (std::size_t i = 0; i < row.size(); ++i) item_mean[i] += row[i];
  }
  std::vector<double> group(catalog.provider_count(), 0.0);
  for (ProviderId g = 0; g < catalog.provider_count(); ++g) {
    const auto items = catalog.items_of(g);
    double sum = 0.0;
    for (ItemId item : items) sum += item_mean[item];
    group[g] = sum / (static_cast<double>(users) *
                      static_cast<double>(items.size()));
  }
  return group;
}

double exposure_unfairness(const GainLedger& ledger, const Catalog& catalog,
                           const RelevanceTable& relevance) {
  const std::vector<double> merit = GroupMeanRelevance(catalog, relevance);
  for (std::size_t g = 0; g < merit.size(); ++g) {
    if (!(merit[g] > 0.0)) {
      throw std::invalid_argument("degenerate group " + std::to_string(g) +
                                  ": zero mean relevance");
    }
  }
  if (ledger.step_count() == 0) {
    throw std::logic_error("exposure unfairness is undefined before any step");
  }
  std::vector<double> exposure(ledger.group_exposure().begin(),
                               ledger.group_exposure().end());
  // Mean exposure per item of the group, per step.
  const double t = static_cast<double>(ledger.step_count());
  for (std::size_t g = 0; g < exposure.size(); ++g) {
    exposure[g] /= t * static_cast<double>(catalog.items_of(g).size());
  }
  return unfairness(exposure, merit);
}

double PearsonCorrelation(std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("pearson inputs must be nonempty and equal size");
  }
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return sab / std::sqrt(saa * sbb);
}

AlignmentDiagnostics alignment_diagnostics(
    const GainLedger& ledger, std::span<const ProviderProfile> profiles) {
  if (profiles.size() != ledger.provider_count()) {
    throw std::invalid_argument("profile count does not match the ledger");
  }
  AlignmentDiagnostics out;
  std::vector<double> allocated;
  std::vector<double> target;
  for (std::size_t g = 0; g < profiles.size(); ++g) {
    const double exposure = ledger.exposure_gain()[g];
    if (!(exposure > 0.0) || !(profiles[g].v_e > 0.0)) {
      ++out.excluded;
      continue;
    }
    allocated.push_back(ledger.purchase_gain()[g] / exposure);
    target.push_back(profiles[g].v_b / profiles[g].v_e);
  }
  if (allocated.empty()) {
    throw std::invalid_argument(
        "alignment diagnostics: every provider has zero exposure gain");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < allocated.size(); ++i) {
    const double d = allocated[i] - target[i];
    sum += d * d;
  }
  out.msd = sum / static_cast<double>(allocated.size());
  out.pearson = PearsonCorrelation(allocated, target);
  out.pearson_defined = !std::isnan(out.pearson);
  return out;
}

std::vector<TradeoffPoint> tradeoff_envelope(
    std::span<const TradeoffPoint> points) {
  std::map<double, double> best_at;
  for (const auto& p : points) {
    auto [it, inserted] = best_at.emplace(p.unfairness, p.effectiveness);
    if (!inserted) it->second = std::max(it->second, p.effectiveness);
  }
  std::vector<TradeoffPoint> envelope;
  envelope.reserve(best_at.size());
  double running = -std::numeric_limits<double>::infinity();
  for (const auto& [u, eff] : best_at) {
    running = std::max(running, eff);
    envelope.push_back({u, running});
  }
  return envelope;
}

double EnvelopeAt(std::span<const TradeoffPoint> envelope, double threshold) {
  double value = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : envelope) {
    if (p.unfairness > threshold) break;
    value = p.effectiveness;
  }
  return value;
}

std::string ModeName(SimMode mode) {
  return mode == SimMode::kOffline ? "offline" : "online";
}

SimMode ParseMode(const std::string& name) {
  if (name == "offline") return SimMode::kOffline;
  if (name == "online") return SimMode::kOnline;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string FormatReal(double value) {
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string RunResultCsvHeader() {
  return "mode,policy,alpha,seed,effectiveness,unfairness,msd,pearson,wall_ms";
}

std::string RunResultCsvRow(const RunResult& r, bool include_timing) {
  std::string row = ModeName(r.mode) + "," + r.policy + "," +
                    FormatReal(r.alpha) + "," + std::to_string(r.seed) + "," +
                    FormatReal(r.effectiveness) + "," +
                    FormatReal(r.unfairness) + "," + FormatReal(r.msd) + "," +
                    FormatReal(r.pearson) + ",";
  if (include_timing) row += FormatReal(r.wall_seconds * 1000.0);
  return row;
}

}  // namespace equityrank
