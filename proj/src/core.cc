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

#include "equityrank/core.h"

#include <cmath>
#include <numeric>
#include <string>

namespace equityrank {

Catalog::Catalog(std::vector<ProviderId> group_of, std::size_t provider_count)
    : group_of_(std::move(group_of)), items_of_(provider_count) {
  if (provider_count == 0) {
    throw std::invalid_argument("catalog needs at least one provider");
  }
  if (group_of_.empty()) {
    throw std::invalid_argument("catalog needs at least one item");
  }
  for (std::size_t item = 0; item < group_of_.size(); ++item) {
    const ProviderId g = group_of_[item];
    if (g >= provider_count) {
      throw std::invalid_argument("item " + std::to_string(item) +
                                  " maps to unknown provider " +
                                  std::to_string(g));
    }
    items_of_[g].push_back(static_cast<ItemId>(item));
  }
  for (std::size_t g = 0; g < provider_count; ++g) {
    if (items_of_[g].empty()) {
      throw std::invalid_argument("provider " + std::to_string(g) +
                                  " owns no items");
    }
  }
}

void ValidateProfile(const ProviderProfile& profile) {
  if (!(profile.v_e >= 0.0) || !(profile.v_b >= 0.0)) {
    throw std::invalid_argument("provider gain weights must be >= 0");
  }
  if (!(profile.y > 0.0) || !std::isfinite(profile.y)) {
    throw std::invalid_argument("provider expected gain y must be > 0");
  }
}

PositionModel::PositionModel(std::size_t list_size) {
  if (list_size == 0) {
    throw std::invalid_argument("list size must be positive");
  }
  probs_.resize(list_size);
  for (std::size_t k = 1; k <= list_size; ++k) {
    probs_[k - 1] = 1.0 / (std::log2(static_cast<double>(k)) + 1.0);
  }
}

double examination_prob(std::int64_t k, const PositionModel& positions) {
  if (k < 1) {
    throw std::invalid_argument("position index must be >= 1");
  }
  return positions.prob(static_cast<std::size_t>(k));
}

void ValidateRankList(const RankList& list, std::size_t list_size,
                      std::size_t item_count) {
  if (list.items.size() != list_size) {
    throw std::invalid_argument("rank list has " +
                                std::to_string(list.items.size()) +
                                " items, expected " + std::to_string(list_size));
  }
  std::vector<bool> seen(item_count, false);
  for (ItemId item : list.items) {
    if (item >= item_count) {
      throw std::invalid_argument("rank list holds unknown item " +
                                  std::to_string(item));
    }
    if (seen[item]) {
      throw std::invalid_argument("rank list repeats item " +
                                  std::to_string(item));
    }
    seen[item] = true;
  }
}

RelevanceTable::RelevanceTable(std::size_t user_count, std::size_t item_count)
    : user_count_(user_count),
      item_count_(item_count),
      values_(user_count * item_count, 0.0) {}

void RelevanceTable::set(UserId user, ItemId item, double value) {
  if (user >= user_count_ || item >= item_count_) {
    throw std::invalid_argument("relevance index out of range");
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("relevance must lie in [0, 1]");
  }
  values_[static_cast<std::size_t>(user) * item_count_ + item] = value;
}

void ValidateDataset(const Dataset& dataset) {
  const std::size_t m = dataset.catalog.provider_count();
  if (dataset.profiles.size() != m) {
    throw std::invalid_argument("profile count does not match provider count");
  }
  for (const auto& p : dataset.profiles) ValidateProfile(p);
  if (dataset.relevance.item_count() != dataset.catalog.item_count()) {
    throw std::invalid_argument(
        "relevance table item count does not match catalog");
  }
  if (dataset.relevance.user_count() == 0) {
    throw std::invalid_argument("dataset has no users");
  }
}

std::vector<ItemId> AllItems(std::size_t item_count) {
  std::vector<ItemId> items(item_count);
  std::iota(items.begin(), items.end(), ItemId{0});
  return items;
}

}  // namespace equityrank
