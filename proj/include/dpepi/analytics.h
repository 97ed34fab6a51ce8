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

#ifndef DPEPI_ANALYTICS_H_
#define DPEPI_ANALYTICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dpepi/date.h"
#include "dpepi/dp.h"
#include "dpepi/geo.h"
#include "dpepi/random.h"
#include "dpepi/transactions.h"

namespace dpepi::analytics {

// 99th percentile of per-merchant weekly nb_transactions under the default
// generator profiles. Contributions are clipped to this before aggregation.
inline constexpr double kDefaultUpperBound = 202.0;

// Inclusive date range within one city.
struct AnalysisWindow {
  Date start;
  Date end;
  City city = City::kBogota;

  // Throws ParameterError if end < start.
  void Validate() const;
};

enum class SuperCategory {
  kRetailAndRecreation,
  kGroceryAndPharmacy,
  kTransitStations,
};

std::string_view SuperCategoryName(SuperCategory s);
// Throws ParameterError for anything but the three snake_case names.
SuperCategory ParseSuperCategory(std::string_view name);

struct SuperCategoryMap {
  std::map<std::string, SuperCategory> membership;

  std::optional<SuperCategory> Of(std::string_view category) const;
  static SuperCategoryMap Default();
};

// Essential vs luxury partition used by the adherence analysis.
struct AdherenceClasses {
  std::set<std::string, std::less<>> essential;
  std::set<std::string, std::less<>> luxury;

  // Throws ParameterError if the two sets intersect.
  void Validate() const;
  static AdherenceClasses Default();
};

struct AnalysisSettings {
  double upper_bound = kDefaultUpperBound;
  double sensitivity = dp::kDefaultSensitivity;
  dp::NoiseMode mode = dp::NoiseMode::kPaperLinear;
  double delta = dp::kDefaultDelta;
  // Week grid used to enumerate time steps inside a window.
  Date grid_origin = kGridStart;
  // Percent-change baseline: median of the first `baseline_weeks` steps on
  // or after `baseline_start` (falls back to the first steps of the series).
  Date baseline_start{2020, 1, 1};
  int baseline_weeks = 5;
  SuperCategoryMap super_categories = SuperCategoryMap::Default();
  AdherenceClasses adherence = AdherenceClasses::Default();

  dp::PrivacyParams Params(double epsilon, int time_steps) const;
};

struct HotspotMap {
  std::map<std::string, long long> counts;  // released, rounded, >= 0
  std::map<std::string, double> raw;        // unrounded noisy sums
  dp::ReleaseMetadata privacy;
};

struct MobilitySeries {
  std::vector<Date> dates;
  std::vector<long long> noisy_counts;
  std::vector<double> raw;
  // NaN where undefined (baseline <= 0).
  std::vector<double> pct_change_from_baseline;
  double baseline = 0;
  // Filled only when requested: per-postal noisy series whose sum is the
  // city-level series.
  std::map<std::string, std::vector<long long>> per_postal;
  dp::ReleaseMetadata privacy;
};

struct AdherenceSeries {
  std::vector<Date> dates;
  std::vector<long long> essential;
  std::vector<long long> luxury;
  std::vector<double> raw_essential;
  std::vector<double> raw_luxury;
  std::vector<double> ratio;  // NaN where luxury == 0
  dp::ReleaseMetadata privacy;
};

// Grid dates (from settings.grid_origin) inside the window.
std::vector<Date> WindowSteps(const AnalysisWindow& window, Date grid_origin);

// Sum of OFFLINE nb_transactions per postal code of the window's city,
// noised at PaperScale(3, 1, U, epsilon). Charges `epsilon` once.
HotspotMap Hotspot(const TransactionTable& table, const AnalysisWindow& window,
                   double epsilon, Rng& rng, dp::BudgetLedger& ledger,
                   const AnalysisSettings& settings = {});

// City-wide weekly volume of the categories mapped to `super_category`,
// noised at (3 * T * U) / epsilon_total with T = number of grid steps in the
// window; the ledger receives T charges of epsilon_total / T.
MobilitySeries Mobility(const TransactionTable& table,
                        const AnalysisWindow& window,
                        SuperCategory super_category, double epsilon_total,
                        Rng& rng, dp::BudgetLedger& ledger,
                        const AnalysisSettings& settings = {},
                        bool per_postal = false);

// Weekly essential and luxury volume (ONLINE and OFFLINE) with independent
// noise draws at (3 * T * U) / epsilon; one charge of epsilon / T per step
// covers both classes since every merchant belongs to at most one.
AdherenceSeries Adherence(const TransactionTable& table,
                          const AnalysisWindow& window, double epsilon,
                          Rng& rng, dp::BudgetLedger& ledger,
                          const AnalysisSettings& settings = {});

std::string FormatHotspotCsv(const HotspotMap& map);
std::string FormatMobilityCsv(const MobilitySeries& series);
std::string FormatAdherenceCsv(const AdherenceSeries& series);

}  // namespace dpepi::analytics

#endif  // DPEPI_ANALYTICS_H_
