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

#ifndef EQUITYRANK_SYNTH_H_
#define EQUITYRANK_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "equityrank/core.h"

namespace equityrank {

// Normal parameters for the provider gain weights and expected gains.
struct ScenarioSpec {
  std::string name = "Custom";
  double ve_mean = 10.0;
  double ve_sd = 2.5;
  double vb_mean = 100.0;
  double vb_sd = 25.0;
  double y_mean = 50.0;
  double y_sd = 25.0;

  static ScenarioSpec Common();
  static ScenarioSpec Exp1st();   // exposure-driven providers
  static ScenarioSpec Sale1st();  // sales-driven providers
};

// "common", "exp1st" or "sale1st" (case-insensitive).
ScenarioSpec ScenarioByName(const std::string& name);

struct GeneratorSpec {
  std::size_t n_users = 500;
  std::size_t n_items = 1000;
  std::size_t n_providers = 20;
  double group_size_skew = 0.8;  // group sizes proportional to rank^-skew
  std::size_t latent_dim = 16;
  double sparsity = 0.05;        // fraction of items kept relevant per user
  std::uint64_t seed = 0;
};

void ValidateGeneratorSpec(const GeneratorSpec& spec);

// Draws v_e, v_b and y per provider from their Normals, redrawing any value
// <= 0. Throws for m < 2, non-positive means or negative sds.
std::vector<ProviderProfile> sample_profiles(std::size_t provider_count,
                                             const ScenarioSpec& scenario,
                                             std::mt19937_64& rng);

// r(u, i) = logistic(<p_u, q_i> / sqrt(dim)) with standard-normal latent
// factors; each user keeps round(sparsity * n) uniformly chosen items (at
// least one) and the rest are zero.
RelevanceTable generate_relevance(const GeneratorSpec& spec,
                                  std::mt19937_64& rng);

// Group sizes by largest remainder on n * rank^-skew / sum, each >= 1; items
// are laid out contiguously by group and then shuffled.
std::vector<std::size_t> GroupSizes(std::size_t n_items,
                                    std::size_t n_providers, double skew);
Catalog assign_groups(std::size_t n_items, std::size_t n_providers,
                      double skew, std::mt19937_64& rng);

Dataset generate_dataset(const GeneratorSpec& spec,
                         const ScenarioSpec& scenario);

// Raised for unreadable or malformed dataset files; the message names the
// file and row.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadOptions {
  // Reject relevance above 1 instead of dividing the user's row by its max.
  bool strict = false;
};

// Reads catalog.csv, providers.csv and relevance.csv from `dir`.
Dataset load_dataset(const std::filesystem::path& dir,
                     const LoadOptions& options = {});

// Writes the three dataset files; reals use 17 significant digits so that a
// reload is bit-identical.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

}  // namespace equityrank

#endif  // EQUITYRANK_SYNTH_H_
