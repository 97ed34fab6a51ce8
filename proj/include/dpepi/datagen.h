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

#ifndef DPEPI_DATAGEN_H_
#define DPEPI_DATAGEN_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dpepi/date.h"
#include "dpepi/epi_ingest.h"
#include "dpepi/geo.h"
#include "dpepi/random.h"
#include "dpepi/transactions.h"

namespace dpepi::datagen {

struct CityPopulation {
  City city;
  double population;
};

using CityTable = std::vector<CityPopulation>;

// Medellin 2,569,000; Bogota DC 7,181,000; Brasilia 4,935,000;
// Santiago 5,561,000.
CityTable DefaultCities();

// Behaviour of one merchant category.
struct CategoryProfile {
  std::string name;
  double share_weight = 1.0;      // relative merchant frequency
  double covid_multiplier = 0.0;  // signed response to normalized deaths
  int response_lag = 1;           // weeks, 0..3
  double base_volume = 50.0;      // expected weekly transactions / merchant
  double typical_ticket = 30.0;   // mean spend per transaction
  double online_share = 0.2;      // probability a merchant sells ONLINE
};

// The ten categories of the reference dataset, in canonical order.
std::vector<CategoryProfile> DefaultCategories();

// Throws ParameterError if any profile breaks its invariants.
void ValidateProfiles(const std::vector<CategoryProfile>& profiles);

struct GenerationConfig {
  std::uint64_t seed = 20190101;
  int merchant_count = 10000;
  Date start = kGridStart;
  Date end = kGridEnd;
  double noise_sigma = 0.2;  // lognormal dispersion of weekly volume/spend
  int postal_districts = 20; // distinct postal codes per city
  CityTable cities = DefaultCities();
  std::vector<CategoryProfile> categories = DefaultCategories();
};

// Percentage of the total population living in each city (same order).
// Throws ParameterError for a negative population and DegenerateInputError
// when the total is zero.
std::vector<double> CityShares(const CityTable& cities);

// Draws one of `districts` postal codes for the city. Medellin codes start
// "05", Bogota codes "11", Brasilia codes end "-000" and Santiago codes are
// seven digits starting "83".
std::string AssignPostalCode(City city, Rng& rng, int districts = 20);

// max(0, 1 + multiplier * d_hat). Throws ParameterError unless
// 0 <= d_hat <= 1.
double CovidFactor(double multiplier, double d_hat);

// Builds the merchant-week table on WeekGrid(config.start, config.end).
// Per merchant-week the expected count is
//   base_volume * CovidFactor(m, d_hat[t - lag]) * exp(eta),
// rounded and clamped at zero; spend is count * ticket * exp(eta'), with
// eta, eta' ~ N(0, noise_sigma^2). d_hat comes from the series of the
// merchant's country; lagged weeks before the series start read as zero.
// Each merchant draws from its own substream of `config.seed`, so the
// result is fully determined by the config. Rows are ordered by
// (merchant_id, date); id equals merchant_id.
//
// Throws GenerationError if a country series is missing or lacks a grid
// week that is needed.
TransactionTable Generate(const GenerationConfig& config,
                          const epi::WeeklyByCountry& epi);

// Noise scales for the baseline privacy template.
struct FieldNoise {
  double count_scale = 0;
  double spend_scale = 0;
};

struct BaselinePrivacy {
  FieldNoise fallback;
  std::map<std::string, FieldNoise> per_category;

  const FieldNoise& For(const std::string& category) const;
};

// count scale = PaperScale(3, 1, ceil(base_volume), 1); spend scale =
// typical_ticket.
BaselinePrivacy DefaultBaselinePrivacy(
    const std::vector<CategoryProfile>& profiles);

// Adds independent Gaussian noise to nb_transactions and spendamt of every
// row, then rounds/clamps the count at zero and clamps spend at zero
// (rounded to cents). Throws ParameterError for a negative scale.
TransactionTable PrivatizeBaseline(const TransactionTable& table,
                                   const BaselinePrivacy& params, Rng& rng);

}  // namespace dpepi::datagen

#endif  // DPEPI_DATAGEN_H_
