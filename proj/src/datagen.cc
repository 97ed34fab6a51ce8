//
// Copyright 2026 The dpepi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpepi/datagen.h"

#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "dpepi/dp.h"
#include "dpepi/error.h"

namespace dpepi::datagen {
namespace {

// d_hat per grid week and lag (0..3) for one country.
using LaggedSeries = std::vector<std::array<double, 4>>;

LaggedSeries BuildLagged(const epi::EpiWeeklySeries& series,
                         const std::vector<Date>& grid) {
  LaggedSeries out(grid.size());
  const Date first = series.week_end_dates.empty()
                         ? Date::Parse("9999-12-31")
                         : series.week_end_dates.front();
  for (std::size_t t = 0; t < grid.size(); ++t) {
    if (!series.IndexOf(grid[t])) {
      throw GenerationError("epidemiological series for " + series.country +
                            " does not cover week " + grid[t].ToString());
    }
    for (int lag = 0; lag < 4; ++lag) {
      const Date d = grid[t] - kWeekDays * lag;
      if (d < first) {
        out[t][lag] = 0.0;
        continue;
      }
      auto idx = series.IndexOf(d);
      if (!idx) {
        throw GenerationError("epidemiological series for " + series.country +
                              " does not cover week " + d.ToString());
      }
      out[t][lag] = series.deaths_normalized[*idx];
    }
  }
  return out;
}

}  // namespace

CityTable DefaultCities() {
  return {{City::kMedellin, 2569000},
          {City::kBogota, 7181000},
          {City::kBrasilia, 4935000},
          {City::kSantiago, 5561000}};
}

std::vector<CategoryProfile> DefaultCategories() {
  // name, share, multiplier, lag, volume, ticket, online share
  return {
      {"Airlines", 1.0, -0.6, 1, 40, 320, 0.7},
      {"Bars/Discotheques", 1.0, -0.8, 1, 60, 25, 0.05},
      {"Computer Network/Information Services", 1.0, 0.2, 1, 30, 80, 0.8},
      {"Drug Stores/Pharmacies", 1.0, 0.4, 1, 90, 18, 0.15},
      {"General Retail Stores", 1.0, -0.4, 1, 110, 35, 0.25},
      {"Grocery Stores/Supermarkets", 1.0, 0.3, 1, 150, 30, 0.1},
      {"Hospitals", 1.0, 0.5, 1, 45, 120, 0.05},
      {"Hotels/Motels", 1.0, -0.7, 1, 35, 180, 0.5},
      {"Restaurants", 1.0, -0.7, 1, 120, 22, 0.1},
      {"Utilities: Electric, Gas, Water", 1.0, 0.0, 1, 25, 90, 0.6},
  };
}

void ValidateProfiles(const std::vector<CategoryProfile>& profiles) {
  if (profiles.empty()) throw ParameterError("no category profiles");
  std::set<std::string_view> names;
  for (const auto& p : profiles) {
    if (!names.insert(p.name).second) {
      throw ParameterError("duplicate category profile '" + p.name + "'");
    }
    if (!(p.share_weight > 0) || !(p.base_volume > 0) ||
        !(p.typical_ticket > 0) || p.response_lag < 0 || p.response_lag > 3 ||
        !(p.online_share >= 0 && p.online_share <= 1) ||
        !std::isfinite(p.covid_multiplier)) {
      throw ParameterError("invalid category profile '" + p.name + "'");
    }
  }
}

std::vector<double> CityShares(const CityTable& cities) {
  double total = 0;
  for (const auto& c : cities) {
    if (!(c.population >= 0)) {
      throw ParameterError("negative population for " +
                           std::string(CityName(c.city)));
    }
    total += c.population;
  }
  if (!(total > 0)) throw DegenerateInputError("total population is zero");
  std::vector<double> shares;
  shares.reserve(cities.size());
  for (const auto& c : cities) shares.push_back(c.population / total * 100.0);
  return shares;
}

std::string AssignPostalCode(City city, Rng& rng, int districts) {
  if (districts < 1 || districts > 99) {
    throw ParameterError("postal districts must be in 1..99");
  }
  std::uniform_int_distribution<int> pick(0, districts - 1);
  const int k = pick(rng);
  switch (city) {
    case City::kMedellin: return fmt::format("05{:03d}", 1 + 10 * k);
    case City::kBogota: return fmt::format("11{:04d}", 111 + 10 * k);
    case City::kBrasilia: return fmt::format("7{:02d}00-000", k);
    case City::kSantiago: return fmt::format("83{:02d}000", k);
  }
  return {};
}

double CovidFactor(double multiplier, double d_hat) {
  if (!(d_hat >= 0 && d_hat <= 1)) {
    throw ParameterError("normalized deaths must lie in [0, 1], got " +
                         std::to_string(d_hat));
  }
  return std::max(0.0, 1.0 + multiplier * d_hat);
}

TransactionTable Generate(const GenerationConfig& config,
                          const epi::WeeklyByCountry& epi) {
  if (config.merchant_count < 1) {
    throw ParameterError("merchant_count must be >= 1");
  }
  if (!(config.noise_sigma >= 0)) {
    throw ParameterError("noise_sigma must be >= 0");
  }
  ValidateProfiles(config.categories);
  const auto shares = CityShares(config.cities);
  const auto grid = WeekGrid(config.start, config.end);

  std::map<std::string_view, LaggedSeries> lagged;
  for (const auto& c : config.cities) {
    const std::string_view country = CountryOf(c.city);
    if (lagged.contains(country)) continue;
    auto it = epi.find(std::string(country));
    if (it == epi.end()) {
      throw GenerationError("no epidemiological series for " +
                            std::string(country));
    }
    lagged.emplace(country, BuildLagged(it->second, grid));
  }

  std::vector<double> category_weights;
  for (const auto& p : config.categories) {
    category_weights.push_back(p.share_weight);
  }

  TransactionTable table;
  for (const auto& p : config.categories) table.categories.push_back(p.name);
  table.rows.reserve(static_cast<std::size_t>(config.merchant_count) *
                     grid.size());

  for (int merchant = 1; merchant <= config.merchant_count; ++merchant) {
    Rng rng = SubstreamRng(config.seed, static_cast<std::uint64_t>(merchant));
    std::discrete_distribution<std::size_t> pick_city(shares.begin(),
                                                      shares.end());
    std::discrete_distribution<std::size_t> pick_category(
        category_weights.begin(), category_weights.end());
    const City city = config.cities[pick_city(rng)].city;
    const std::size_t cat = pick_category(rng);
    const CategoryProfile& profile = config.categories[cat];
    const std::string postal =
        AssignPostalCode(city, rng, config.postal_districts);
    const TransactionType type =
        std::bernoulli_distribution(profile.online_share)(rng)
            ? TransactionType::kOnline
            : TransactionType::kOffline;
    const LaggedSeries& d_hat = lagged.at(CountryOf(city));
    std::normal_distribution<double> eta(0.0, 1.0);

    for (std::size_t t = 0; t < grid.size(); ++t) {
      const double factor = CovidFactor(profile.covid_multiplier,
                                        d_hat[t][profile.response_lag]);
      const double volume_noise = config.noise_sigma * eta(rng);
      const double spend_noise = config.noise_sigma * eta(rng);
      const double expected = profile.base_volume * factor * std::exp(volume_noise);
      const auto count = std::max<std::int64_t>(0, std::llround(expected));
      const double spend = static_cast<double>(count) * profile.typical_ticket *
                           std::exp(spend_noise);

      TransactionRecord r;
      r.id = merchant;
      r.merchant_id = merchant;
      r.date = grid[t];
      r.category = static_cast<std::uint16_t>(cat);
      r.postal_code = postal;
      r.type = type;
      r.spendamt = std::round(spend * 100.0) / 100.0;
      r.nb_transactions = count;
      table.rows.push_back(std::move(r));
    }
  }
  return table;
}

const FieldNoise& BaselinePrivacy::For(const std::string& category) const {
  auto it = per_category.find(category);
  return it == per_category.end() ? fallback : it->second;
}

BaselinePrivacy DefaultBaselinePrivacy(
    const std::vector<CategoryProfile>& profiles) {
  BaselinePrivacy out;
  for (const auto& p : profiles) {
    out.per_category[p.name] = {
        dp::PaperScale(dp::kDefaultSensitivity, 1, std::ceil(p.base_volume), 1.0),
        p.typical_ticket};
  }
  return out;
}

TransactionTable PrivatizeBaseline(const TransactionTable& table,
                                   const BaselinePrivacy& params, Rng& rng) {
  auto check = [](const FieldNoise& f, const std::string& what) {
    if (!(f.count_scale >= 0) || !(f.spend_scale >= 0) ||
        !std::isfinite(f.count_scale) || !std::isfinite(f.spend_scale)) {
      throw ParameterError("noise scales must be finite and >= 0 (" + what + ")");
    }
  };
  check(params.fallback, "fallback");
  for (const auto& [name, f] : params.per_category) check(f, name);

  std::vector<FieldNoise> by_index;
  for (const auto& c : table.categories) by_index.push_back(params.For(c));

  TransactionTable out = table;
  for (auto& r : out.rows) {
    const FieldNoise& f = by_index[r.category];
    const double count = dp::AddGaussianNoise(
        static_cast<double>(r.nb_transactions), f.count_scale, rng);
    const double spend = dp::AddGaussianNoise(r.spendamt, f.spend_scale, rng);
    r.nb_transactions = dp::PostProcessCount(count);
    r.spendamt = std::max(0.0, std::round(spend * 100.0) / 100.0);
  }
  return out;
}

}  // namespace dpepi::datagen
