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

#include "equityrank/synth.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <unordered_map>

#include "equityrank/metrics.h"
#include "equityrank/sim.h"

namespace equityrank {
namespace {

double DrawPositive(double mean, double sd, std::mt19937_64& rng) {
  if (sd == 0.0) return mean;
  std::normal_distribution<double> dist(mean, sd);
  for (;;) {
    const double v = dist(rng);
    if (v > 0.0) return v;
  }
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// --- CSV helpers ----------------------------------------------------------

std::vector<std::string> SplitRow(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string field = line.substr(start, comma - start);
    const auto first = field.find_first_not_of(" \t");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos
                         ? std::string()
                         : field.substr(first, last - first + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

class CsvReader {
 public:
  CsvReader(const std::filesystem::path& path, const std::string& header)
      : path_(path), in_(path) {
    if (!in_) throw DatasetError(Where() + ": cannot open file");
    std::string line;
    if (!std::getline(in_, line)) throw DatasetError(Where() + ": empty file");
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) {
      throw DatasetError(Where() + ": expected header '" + header + "'");
    }
    width_ = SplitRow(header).size();
  }

  bool Next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fields = SplitRow(line);
      if (fields.size() != width_) {
        throw DatasetError(Where() + ": expected " + std::to_string(width_) +
                           " fields");
      }
      return true;
    }
    return false;
  }

  double Real(const std::string& field) const {
    double value = 0.0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      throw DatasetError(Where() + ": '" + field + "' is not a finite number");
    }
    return value;
  }

  std::string Where() const {
    return path_.filename().string() + " row " + std::to_string(line_no_);
  }
  std::size_t line() const { return line_no_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
  std::size_t width_ = 0;
};

void WriteFile(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write " + path.string());
  out << body;
  if (!out) throw DatasetError("failed writing " + path.string());
}

}  // namespace

ScenarioSpec ScenarioSpec::Common() {
  return {"Common", 10.0, 2.5, 100.0, 25.0, 50.0, 25.0};
}
ScenarioSpec ScenarioSpec::Exp1st() {
  return {"Exp1st", 100.0, 25.0, 100.0, 25.0, 50.0, 25.0};
}
ScenarioSpec ScenarioSpec::Sale1st() {
  return {"Sale1st", 10.0, 2.5, 1000.0, 250.0, 50.0, 25.0};
}

ScenarioSpec ScenarioByName(const std::string& name) {
  const std::string key = Lower(name);
  if (key == "common") return ScenarioSpec::Common();
  if (key == "exp1st") return ScenarioSpec::Exp1st();
  if (key == "sale1st") return ScenarioSpec::Sale1st();
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

void ValidateGeneratorSpec(const GeneratorSpec& spec) {
  if (spec.n_users == 0 || spec.n_items == 0 || spec.n_providers == 0) {
    throw std::invalid_argument("generator sizes must be positive");
  }
  if (spec.n_providers > spec.n_items) {
    throw std::invalid_argument("more providers than items");
  }
  if (!(spec.group_size_skew >= 0.0)) {
    throw std::invalid_argument("group size skew must be >= 0");
  }
  if (spec.latent_dim == 0) {
    throw std::invalid_argument("latent dimension must be positive");
  }
  if (!(spec.sparsity > 0.0 && spec.sparsity <= 1.0)) {
    throw std::invalid_argument("sparsity must lie in (0, 1]");
  }
}

std::vector<ProviderProfile> sample_profiles(std::size_t provider_count,
                                             const ScenarioSpec& s,
                                             std::mt19937_64& rng) {
  if (provider_count < 2) {
    throw std::invalid_argument("need at least two providers");
  }
  if (!(s.ve_mean > 0.0 && s.vb_mean > 0.0 && s.y_mean > 0.0)) {
    throw std::invalid_argument("scenario means must be > 0");
  }
  if (!(s.ve_sd >= 0.0 && s.vb_sd >= 0.0 && s.y_sd >= 0.0)) {
    throw std::invalid_argument("scenario sds must be >= 0");
  }
  std::vector<ProviderProfile> profiles(provider_count);
  for (auto& p : profiles) {
    p.v_e = DrawPositive(s.ve_mean, s.ve_sd, rng);
    p.v_b = DrawPositive(s.vb_mean, s.vb_sd, rng);
    p.y = DrawPositive(s.y_mean, s.y_sd, rng);
  }
  return profiles;
}

RelevanceTable generate_relevance(const GeneratorSpec& spec,
                                  std::mt19937_64& rng) {
  ValidateGeneratorSpec(spec);
  const std::size_t users = spec.n_users;
  const std::size_t n = spec.n_items;
  const std::size_t d = spec.latent_dim;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> user_factors(users * d);
  std::vector<double> item_factors(n * d);
  for (double& v : user_factors) v = normal(rng);
  for (double& v : item_factors) v = normal(rng);

  const std::size_t keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(spec.sparsity * static_cast<double>(n))));
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  RelevanceTable table(users, n);
  std::vector<ItemId> items = AllItems(n);
  for (UserId u = 0; u < users; ++u) {
    // Partial Fisher-Yates: the first `keep` entries are a uniform sample.
    for (std::size_t i = 0; i < keep; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(items[i], items[pick(rng)]);
    }
    const double* pu = user_factors.data() + static_cast<std::size_t>(u) * d;
    for (std::size_t i = 0; i < keep; ++i) {
      const double* qi = item_factors.data() + static_cast<std::size_t>(items[i]) * d;
      const double dot = std::inner_product(pu, pu + d, qi, 0.0);
      table.set(u, items[i], 1.0 / (1.0 + std::exp(-dot * scale)));
    }
  }
  return table;
}

std::vector<std::size_t> GroupSizes(std::size_t n_items,
                                    std::size_t n_providers, double skew) {
  if (n_providers == 0 || n_providers > n_items) {
    throw std::invalid_argument("need 1 <= providers <= items");
  }
  if (!(skew >= 0.0)) throw std::invalid_argument("skew must be >= 0");
  std::vector<double> weight(n_providers);
  for (std::size_t g = 0; g < n_providers; ++g) {
    weight[g] = std::pow(static_cast<double>(g + 1), -skew);
  }
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  std::vector<std::size_t> sizes(n_providers);
  std::vector<double> remainder(n_providers);
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < n_providers; ++g) {
    const double quota = static_cast<double>(n_items) * weight[g] / total;
    sizes[g] = static_cast<std::size_t>(std::floor(quota));
    remainder[g] = quota - std::floor(quota);
    assigned += sizes[g];
  }
  std::vector<std::size_t> by_remainder(n_providers);
  std::iota(by_remainder.begin(), by_remainder.end(), std::size_t{0});
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t a, std::size_t b) {
                     return remainder[a] > remainder[b];
                   });
  for (std::size_t i = 0; assigned < n_items; ++i, ++assigned) {
    ++sizes[by_remainder[i % n_providers]];
  }
  for (std::size_t g = 0; g < n_providers; ++g) {
    if (sizes[g] > 0) continue;
    const auto largest = std::max_element(sizes.begin(), sizes.end());
    --*largest;
    sizes[g] = 1;
  }
  return sizes;
}

Catalog assign_groups(std::size_t n_items, std::size_t n_providers,
                      double skew, std::mt19937_64& rng) {
  const std::vector<std::size_t> sizes = GroupSizes(n_items, n_providers, skew);
  std::vector<ProviderId> group_of;
  group_of.reserve(n_items);
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    group_of.insert(group_of.end(), sizes[g], static_cast<ProviderId>(g));
  }
  std::shuffle(group_of.begin(), group_of.end(), rng);
  return Catalog(std::move(group_of), n_providers);
}

Dataset generate_dataset(const GeneratorSpec& spec,
                         const ScenarioSpec& scenario) {
  ValidateGeneratorSpec(spec);
  std::mt19937_64 rng = MakeRng(spec.seed, 0x5eed);
  Dataset ds;
  ds.catalog = assign_groups(spec.n_items, spec.n_providers,
                             spec.group_size_skew, rng);
  ds.profiles = sample_profiles(spec.n_providers, scenario, rng);
  ds.relevance = generate_relevance(spec, rng);
  for (std::size_t i = 0; i < spec.n_items; ++i) ds.item_names.push_back(std::to_string(i));
  for (std::size_t g = 0; g < spec.n_providers; ++g) ds.provider_names.push_back(std::to_string(g));
  for (std::size_t u = 0; u < spec.n_users; ++u) ds.user_names.push_back(std::to_string(u));
  return ds;
}

Dataset load_dataset(const std::filesystem::path& dir,
                     const LoadOptions& options) {
  Dataset ds;
  std::vector<std::string> f;

  std::unordered_map<std::string, ProviderId> provider_ids;
  {
    CsvReader in(dir / "providers.csv", "provider_id,v_e,v_b,y");
    while (in.Next(f)) {
      ProviderProfile p{in.Real(f[1]), in.Real(f[2]), in.Real(f[3])};
      try {
        ValidateProfile(p);
      } catch (const std::invalid_argument& e) {
        throw DatasetError(in.Where() + ": " + e.what());
      }
      const auto id = static_cast<ProviderId>(ds.profiles.size());
      if (!provider_ids.emplace(f[0], id).second) {
        throw DatasetError(in.Where() + ": duplicate provider '" + f[0] + "'");
      }
      ds.profiles.push_back(p);
      ds.provider_names.push_back(f[0]);
    }
  }

  std::unordered_map<std::string, ItemId> item_ids;
  {
    CsvReader in(dir / "catalog.csv", "item_id,provider_id");
    std::vector<ProviderId> group_of;
    while (in.Next(f)) {
      const auto it = provider_ids.find(f[1]);
      if (it == provider_ids.end()) {
        throw DatasetError(in.Where() + ": unknown provider '" + f[1] + "'");
      }
      const auto id = static_cast<ItemId>(group_of.size());
      if (!item_ids.emplace(f[0], id).second) {
        throw DatasetError(in.Where() + ": duplicate item '" + f[0] + "'");
      }
      group_of.push_back(it->second);
      ds.item_names.push_back(f[0]);
    }
    try {
      ds.catalog = Catalog(std::move(group_of), ds.profiles.size());
    } catch (const std::invalid_argument& e) {
      throw DatasetError(std::string("catalog.csv: ") + e.what());
    }
  }

  struct Entry {
    UserId user;
    ItemId item;
    double value;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::string, UserId> user_ids;
  {
    CsvReader in(dir / "relevance.csv", "user_id,item_id,relevance");
    while (in.Next(f)) {
      const auto item = item_ids.find(f[1]);
      if (item == item_ids.end()) {
        throw DatasetError(in.Where() + ": unknown item '" + f[1] + "'");
      }
      const double value = in.Real(f[2]);
      if (value < 0.0) {
        throw DatasetError(in.Where() + ": negative relevance");
      }
      if (value > 1.0 && options.strict) {
        throw DatasetError(in.Where() + ": relevance above 1 in strict mode");
      }
      auto [user, fresh] =
          user_ids.emplace(f[0], static_cast<UserId>(ds.user_names.size()));
      if (fresh) ds.user_names.push_back(f[0]);
      entries.push_back({user->second, item->second, value, in.line()});
    }
  }
  if (ds.user_names.empty()) {
    throw DatasetError("relevance.csv: no rows");
  }

  // Rows holding a value above 1 are divided by the row maximum.
  std::vector<double> row_max(ds.user_names.size(), 0.0);
  for (const Entry& e : entries) row_max[e.user] = std::max(row_max[e.user], e.value);
  for (UserId u = 0; u < row_max.size(); ++u) {
    if (row_max[u] > 1.0) {
      std::clog << "load_dataset: rescaling relevance of user '"
                << ds.user_names[u] << "' by 1/" << row_max[u] << "\n";
    }
  }
  ds.relevance = RelevanceTable(ds.user_names.size(), ds.catalog.item_count());
  for (const Entry& e : entries) {
    const double value = row_max[e.user] > 1.0 ? e.value / row_max[e.user] : e.value;
    ds.relevance.set(e.user, e.item, value);
  }
  return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  ValidateDataset(ds);
  std::filesystem::create_directories(dir);
  auto name = [](const std::vector<std::string>& names, std::size_t i) {
    return i < names.size() ? names[i] : std::to_string(i);
  };

  std::string providers = "provider_id,v_e,v_b,y\n";
  for (std::size_t g = 0; g < ds.profiles.size(); ++g) {
    const ProviderProfile& p = ds.profiles[g];
    providers += name(ds.provider_names, g) + "," + FormatReal(p.v_e) + "," +
                 FormatReal(p.v_b) + "," + FormatReal(p.y) + "\n";
  }
  std::string catalog = "item_id,provider_id\n";
  for (std::size_t i = 0; i < ds.catalog.item_count(); ++i) {
    catalog += name(ds.item_names, i) + "," +
               name(ds.provider_names, ds.catalog.group_of(static_cast<ItemId>(i))) +
               "\n";
  }
  std::string relevance = "user_id,item_id,relevance\n";
  for (UserId u = 0; u < ds.relevance.user_count(); ++u) {
    const auto row = ds.relevance.row(u);
    bool any = false;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] <= 0.0) continue;
      relevance += name(ds.user_names, u) + "," + name(ds.item_names, i) + "," +
                   FormatReal(row[i]) + "\n";
      any = true;
    }
    // Keeps users without relevant items in the user set.
    if (!any) {
      relevance += name(ds.user_names, u) + "," + name(ds.item_names, 0) + ",0\n";
    }
  }
  WriteFile(dir / "providers.csv", providers);
  WriteFile(dir / "catalog.csv", catalog);
  WriteFile(dir / "relevance.csv", relevance);
}

}  // namespace equityrank
