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

#ifndef EQUITYRANK_CORE_H_
#define EQUITYRANK_CORE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace equityrank {

// Dense 0-based ids assigned at load time.
using ItemId = std::uint32_t;
using UserId = std::uint32_t;
using ProviderId = std::uint32_t;

// Raised when a policy is used in a simulation mode it does not support.
class InvalidModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Items partitioned into provider groups.
//
// group_of is total on 0..n-1 and items_of is its exact inverse partition.
// Every provider owns at least one item.
class Catalog {
 public:
  Catalog() = default;
  Catalog(std::vector<ProviderId> group_of, std::size_t provider_count);

  std::size_t item_count() const { return group_of_.size(); }
  std::size_t provider_count() const { return items_of_.size(); }

  ProviderId group_of(ItemId item) const { return group_of_[item]; }
  std::span<const ProviderId> groups() const { return group_of_; }
  std::span<const ItemId> items_of(ProviderId provider) const {
    return items_of_[provider];
  }

 private:
  std::vector<ProviderId> group_of_;
  std::vector<std::vector<ItemId>> items_of_;
};

// Per-provider gain weights and expected gain.
struct ProviderProfile {
  double v_e = 0.0;  // gain per unit of expected examination
  double v_b = 0.0;  // gain per purchase
  double y = 1.0;    // expected gain weight, strictly positive
};

void ValidateProfile(const ProviderProfile& profile);

// Position-bias examination model: p_k = 1 / (log2(k) + 1) for k <= K, else 0.
class PositionModel {
 public:
  explicit PositionModel(std::size_t list_size);

  std::size_t list_size() const { return probs_.size(); }

  // 1-based position. Returns 0 beyond the list size.
  double prob(std::size_t k) const {
    return (k >= 1 && k <= probs_.size()) ? probs_[k - 1] : 0.0;
  }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Throws std::invalid_argument for k < 1.
double examination_prob(std::int64_t k, const PositionModel& positions);

struct RankList {
  UserId user = 0;
  std::vector<ItemId> items;
};

// Throws std::invalid_argument unless the list holds exactly `list_size`
// distinct valid item ids.
void ValidateRankList(const RankList& list, std::size_t list_size,
                      std::size_t item_count);

// Dense user x item table of relevance probabilities in [0, 1]. Pairs that
// were never set read as 0.
class RelevanceTable {
 public:
  RelevanceTable() = default;
  RelevanceTable(std::size_t user_count, std::size_t item_count);

  std::size_t user_count() const { return user_count_; }
  std::size_t item_count() const { return item_count_; }

  double at(UserId user, ItemId item) const {
    return values_[static_cast<std::size_t>(user) * item_count_ + item];
  }
  void set(UserId user, ItemId item, double value);

  std::span<const double> row(UserId user) const {
    return {values_.data() + static_cast<std::size_t>(user) * item_count_,
            item_count_};
  }

  bool operator==(const RelevanceTable&) const = default;

 private:
  std::size_t user_count_ = 0;
  std::size_t item_count_ = 0;
  std::vector<double> values_;
};

// A complete simulation input. The *_names vectors map dense ids back to the
// external ids used in the dataset files.
struct Dataset {
  Catalog catalog;
  std::vector<ProviderProfile> profiles;
  RelevanceTable relevance;
  std::vector<std::string> item_names;
  std::vector<std::string> provider_names;
  std::vector<std::string> user_names;
};

// Throws std::invalid_argument when the parts disagree on sizes.
void ValidateDataset(const Dataset& dataset);

std::vector<ItemId> AllItems(std::size_t item_count);

}  // namespace equityrank

#endif  // EQUITYRANK_CORE_H_
