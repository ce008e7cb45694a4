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

#ifndef EQUITYRANK_METRICS_H_
#define EQUITYRANK_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "equityrank/core.h"

namespace equityrank {

// ---------------------------------------------------------------------------
// Effectiveness
// ---------------------------------------------------------------------------

// Sum over the first `cutoff` positions of r(item) * p_k. `user_relevance` is
// indexed by item id. Throws std::invalid_argument unless 1 <= cutoff <= K.
double dcg(std::span<const ItemId> ranking,
           std::span<const double> user_relevance, std::size_t cutoff,
           const PositionModel& positions);

// DCG of the relevance-sorted ordering over all items of the user.
double ideal_dcg(std::span<const double> user_relevance, std::size_t cutoff,
                 const PositionModel& positions);

// dcg / ideal_dcg; 1.0 when the ideal DCG is zero.
double ndcg(std::span<const ItemId> ranking,
            std::span<const double> user_relevance, std::size_t cutoff,
            const PositionModel& positions);

// Same as above with a precomputed ideal DCG.
double ndcg_with_ideal(std::span<const ItemId> ranking,
                       std::span<const double> user_relevance,
                       std::size_t cutoff, double ideal,
                       const PositionModel& positions);

// gamma * prev + ndcg_t. Throws unless gamma in (0, 1] and prev >= 0.
double cndcg_update(double prev, double ndcg_t, double gamma);

// Mean NDCG over the given lists. Throws on an empty list.
double andcg(std::span<const RankList> lists, const RelevanceTable& relevance,
             std::size_t cutoff, const PositionModel& positions);

// ---------------------------------------------------------------------------
// Provider gains and fairness
// ---------------------------------------------------------------------------

// Expected gain harvested by `provider` from one served list:
//   sum over owned listed items of p_rank * (r * v_b + v_e).
double expected_gain(ProviderId provider, const RankList& list,
                     const Catalog& catalog,
                     std::span<const ProviderProfile> profiles,
                     const RelevanceTable& relevance,
                     const PositionModel& positions);

// Mean over ordered provider pairs of (G_i y_j - G_j y_i)^2. Zero iff G is
// proportional to y. Throws for fewer than two providers or y <= 0.
double unfairness(std::span<const double> gains,
                  std::span<const double> expected);

// d fair / d G(g) with fair = -unfairness:
//   B(g) = 4 / (m (m - 1)) * (y_g * sum G'y' - G(g) * sum y'^2).
std::vector<double> fairness_gradient(std::span<const double> gains,
                                      std::span<const double> expected);

std::vector<double> ExpectedGains(std::span<const ProviderProfile> profiles);

// Running per-provider gains, exposures and the step counter of one run.
//
// All accumulators are nonnegative and nondecreasing. Rankers read the raw
// cumulative gains; unfairness reads gains averaged over the step count.
class GainLedger {
 public:
  GainLedger() = default;
  GainLedger(std::size_t provider_count, std::size_t item_count);

  std::size_t provider_count() const { return exposure_gain_.size(); }
  std::size_t item_count() const { return item_exposure_.size(); }
  std::uint64_t step_count() const { return step_count_; }

  // Records examination probability mass `prob` on `item` owned by
  // `provider`, worth `gain` to that provider.
  void AddExposure(ProviderId provider, ItemId item, double prob, double gain);
  void AddPurchaseGain(ProviderId provider, double gain);
  void AdvanceStep() { ++step_count_; }

  std::span<const double> exposure_gain() const { return exposure_gain_; }
  std::span<const double> purchase_gain() const { return purchase_gain_; }
  std::span<const double> item_exposure() const { return item_exposure_; }
  std::span<const double> group_exposure() const { return group_exposure_; }

  double raw_gain(ProviderId provider) const {
    return exposure_gain_[provider] + purchase_gain_[provider];
  }
  std::vector<double> RawGains() const;
  // G_raw / T. Throws std::logic_error when no step has been recorded.
  std::vector<double> AveragedGains() const;

 private:
  std::uint64_t step_count_ = 0;
  std::vector<double> exposure_gain_;
  std::vector<double> purchase_gain_;
  std::vector<double> item_exposure_;
  std::vector<double> group_exposure_;
};

// Mean relevance of each provider's items, where an item's relevance is its
// mean over users.
std::vector<double> GroupMeanRelevance(const Catalog& catalog,
                                       const RelevanceTable& relevance);

// Unfairness of the mean per-item exposure of each group (per step) against
// merit y_g = mean group relevance. Throws std::invalid_argument if a group has
// zero mean relevance.
double exposure_unfairness(const GainLedger& ledger, const Catalog& catalog,
                           const RelevanceTable& relevance);

struct AlignmentDiagnostics {
  double msd = 0.0;
  double pearson = 0.0;        // NaN when either side has zero variance
  bool pearson_defined = false;
  std::size_t excluded = 0;    // providers skipped for zero exposure gain
};

// Compares each provider's purchase/exposure gain ratio with its v_b/v_e.
// Providers with zero exposure gain are skipped and counted; throws
// std::invalid_argument if every provider is skipped.
AlignmentDiagnostics alignment_diagnostics(
    const GainLedger& ledger, std::span<const ProviderProfile> profiles);

// Pearson correlation; NaN if either input has zero variance.
double PearsonCorrelation(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Trade-off envelopes and run records
// ---------------------------------------------------------------------------

struct TradeoffPoint {
  double unfairness = 0.0;
  double effectiveness = 0.0;
  bool operator==(const TradeoffPoint&) const = default;
};

// For every distinct unfairness value u* (ascending), the best effectiveness
// among points with unfairness <= u*.
std::vector<TradeoffPoint> tradeoff_envelope(
    std::span<const TradeoffPoint> points);

// Envelope value at `threshold`; NaN below the smallest threshold.
double EnvelopeAt(std::span<const TradeoffPoint> envelope, double threshold);

enum class SimMode { kOffline, kOnline };

std::string ModeName(SimMode mode);
SimMode ParseMode(const std::string& name);

struct RunResult {
  SimMode mode = SimMode::kOffline;
  std::string policy;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  double effectiveness = 0.0;  // aNDCG offline, final cNDCG online
  double unfairness = 0.0;     // NaN when undefined (no steps)
  bool unfairness_defined = true;
  double msd = 0.0;
  double pearson = 0.0;
  bool pearson_defined = false;
  std::size_t alignment_excluded = 0;
  double wall_seconds = 0.0;
};

// "mode,policy,alpha,seed,effectiveness,unfairness,msd,pearson,wall_ms"
std::string RunResultCsvHeader();
// Reals use 17 significant digits. Pass include_timing = false to leave the
// wall_ms field empty so that rows are reproducible byte for byte.
std::string RunResultCsvRow(const RunResult& result, bool include_timing);

// Formats a real with 17 significant digits ("nan" for NaN).
std::string FormatReal(double value);

}  // namespace equityrank

#endif  // EQUITYRANK_METRICS_H_
