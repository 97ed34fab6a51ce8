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

#include "dpepi/validation.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "dpepi/csv.h"
#include "dpepi/error.h"

namespace dpepi::validation {
namespace {

constexpr std::size_t kMinMobilityOverlap = 8;

int Sign(double v) { return (v > 0) - (v < 0); }

}  // namespace

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ParameterError(fmt::format(
        "pearson needs two series of equal length >= 2 (got {} and {})",
        x.size(), y.size()));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0) || !(syy > 0)) {
    throw UndefinedCorrelationError("correlation undefined for a constant series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CcfResult Ccf(std::span<const double> epi, std::span<const double> txn,
              int max_lag) {
  if (max_lag < 0 || epi.size() != txn.size() ||
      epi.size() <= static_cast<std::size_t>(max_lag) + 2) {
    throw ParameterError(fmt::format(
        "ccf needs equal-length series longer than max_lag + 2 (lengths {} "
        "and {}, max_lag {})",
        epi.size(), txn.size(), max_lag));
  }
  const std::size_t n = epi.size();
  CcfResult out;
  out.r.resize(static_cast<std::size_t>(max_lag) + 1);
  for (int lag = 0; lag <= max_lag; ++lag) {
    const std::size_t m = n - static_cast<std::size_t>(lag);
    try {
      out.r[lag] = Pearson(epi.subspan(0, m), txn.subspan(lag, m));
    } catch (const UndefinedCorrelationError&) {
      out.r[lag] = 0.0;
    }
  }
  for (int lag = 1; lag <= max_lag; ++lag) {
    if (std::abs(out.r[lag]) > std::abs(out.r[out.lag_max])) out.lag_max = lag;
  }
  out.ccf_max = out.r[out.lag_max];
  return out;
}

std::vector<double> WeeklyVolume(const TransactionTable& table, City city,
                                 std::uint16_t category,
                                 std::span<const Date> dates) {
  std::vector<double> out(dates.size(), 0.0);
  for (const auto& r : table.rows) {
    if (r.category != category || CityOfPostal(r.postal_code) != city) continue;
    auto it = std::lower_bound(dates.begin(), dates.end(), r.date);
    if (it != dates.end() && *it == r.date) {
      out[static_cast<std::size_t>(it - dates.begin())] +=
          static_cast<double>(r.nb_transactions);
    }
  }
  return out;
}

bool ValidationReport::AllPassed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::vector<const CheckResult*> ValidationReport::Failures() const {
  std::vector<const CheckResult*> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(&c);
  }
  return out;
}

std::string ValidationReport::ToCsv() const {
  std::string out = "check,status,measured,expected\n";
  for (const auto& c : checks) {
    out += csv::FormatRow({c.name, c.passed ? "pass" : "fail", c.measured, c.expected});
  }
  return out;
}

std::string ValidationReport::ToText() const {
  std::string out;
  std::size_t failed = 0;
  for (const auto& c : checks) {
    failed += !c.passed;
    out += fmt::format("[{}] {}: measured {} (expected {})\n",
                       c.passed ? "PASS" : "FAIL", c.name, c.measured,
                       c.expected);
  }
  out += fmt::format("{} checks, {} failed\n", checks.size(), failed);
  return out;
}

ValidationReport ValidateDataset(const TransactionTable& table,
                                 const epi::WeeklyByCountry& epi,
                                 const datagen::GenerationConfig& generation,
                                 const ValidationConfig& config) {
  ValidationReport report;

  // (1) non-negative counts
  std::size_t negatives = 0;
  for (const auto& r : table.rows) negatives += r.nb_transactions < 0;
  report.checks.push_back({"nonnegative_counts", negatives == 0,
                           fmt::format("{} negative rows", negatives),
                           "0 negative rows"});

  // (2) merchant share per city
  std::map<std::int32_t, City> merchant_city;
  for (const auto& r : table.rows) {
    merchant_city.try_emplace(r.merchant_id, CityOfPostal(r.postal_code));
  }
  const auto expected_shares = datagen::CityShares(generation.cities);
  for (std::size_t i = 0; i < generation.cities.size(); ++i) {
    const City city = generation.cities[i].city;
    std::size_t n = 0;
    for (const auto& [id, c] : merchant_city) n += c == city;
    const double share =
        merchant_city.empty() ? 0.0 : 100.0 * n / merchant_city.size();
    report.checks.push_back(
        {fmt::format("city_share:{}", CityName(city)),
         std::abs(share - expected_shares[i]) <= config.share_tolerance_pp,
         fmt::format("{:.4f}%", share),
         fmt::format("{:.4f}% +/- {} pp", expected_shares[i],
                     config.share_tolerance_pp)});
  }

  // (3), (4) CCF against weekly deaths
  std::vector<Date> dates;
  for (const auto& r : table.rows) dates.push_back(r.date);
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());

  // One pass: weekly volume per (city, category).
  std::map<std::pair<City, std::uint16_t>, std::vector<double>> volumes;
  for (const auto& r : table.rows) {
    auto& v = volumes[{CityOfPostal(r.postal_code), r.category}];
    if (v.empty()) v.assign(dates.size(), 0.0);
    auto it = std::lower_bound(dates.begin(), dates.end(), r.date);
    v[static_cast<std::size_t>(it - dates.begin())] +=
        static_cast<double>(r.nb_transactions);
  }

  for (const auto& cp : generation.cities) {
    const City city = cp.city;
    const bool exempt = config.ccf_exempt_cities.contains(city);
    auto series_it = epi.find(std::string(CountryOf(city)));
    std::vector<double> deaths(dates.size(), 0.0);
    if (series_it != epi.end()) {
      for (std::size_t k = 0; k < dates.size(); ++k) {
        if (auto idx = series_it->second.IndexOf(dates[k])) {
          deaths[k] = series_it->second.new_deaths[*idx];
        }
      }
    }
    for (const auto& profile : generation.categories) {
      const bool null_check = profile.covid_multiplier == 0.0;
      CheckResult check;
      check.name = fmt::format("{}:{}:{}", null_check ? "ccf_null" : "ccf_lag_sign",
                               CityName(city), profile.name);
      check.expected =
          null_check
              ? fmt::format("|ccf_max| < {}", config.null_ccf_max_abs)
              : fmt::format("lag_max in [0,{}], sign {}", config.lag_band_max,
                            profile.covid_multiplier > 0 ? "+" : "-");
      auto cat = table.CategoryIndex(profile.name);
      if (series_it == epi.end()) {
        check.measured = "no epidemiological series";
      } else if (!cat) {
        check.measured = "category absent";
      } else {
        try {
          auto vit = volumes.find({city, *cat});
          const auto volume = vit != volumes.end()
                                  ? vit->second
                                  : std::vector<double>(dates.size(), 0.0);
          const auto ccf = Ccf(deaths, volume, config.ccf_max_lag);
          check.measured =
              fmt::format("lag_max={} ccf_max={:.3f}", ccf.lag_max, ccf.ccf_max);
          check.passed =
              null_check
                  ? std::abs(ccf.ccf_max) < config.null_ccf_max_abs
                  : ccf.lag_max <= config.lag_band_max &&
                        Sign(ccf.ccf_max) == Sign(profile.covid_multiplier);
        } catch (const ParameterError& e) {
          check.measured = e.what();
        }
      }
      if (exempt && !check.passed) {
        check.passed = true;
        check.measured += " (exempt)";
      }
      report.checks.push_back(std::move(check));
    }
  }

  // (5) grid length
  report.checks.push_back(
      {"distinct_dates", static_cast<int>(dates.size()) == config.expected_dates,
       std::to_string(dates.size()), std::to_string(config.expected_dates)});
  return report;
}

MobilityComparison CompareMobility(const analytics::MobilitySeries& dp_series,
                                   const epi::MobilityReferenceSeries& ref) {
  std::vector<double> a, b;
  for (std::size_t i = 0; i < dp_series.dates.size(); ++i) {
    const double x = dp_series.pct_change_from_baseline[i];
    if (std::isnan(x)) continue;
    auto it = std::lower_bound(ref.week_end_dates.begin(),
                               ref.week_end_dates.end(), dp_series.dates[i]);
    if (it == ref.week_end_dates.end() || *it != dp_series.dates[i]) continue;
    const double y = ref.pct_change_from_baseline[static_cast<std::size_t>(
        it - ref.week_end_dates.begin())];
    if (std::isnan(y)) continue;
    a.push_back(x);
    b.push_back(y);
  }
  if (a.size() < kMinMobilityOverlap) {
    throw ParameterError(fmt::format(
        "mobility comparison needs >= {} overlapping weeks, found {}",
        kMinMobilityOverlap, a.size()));
  }
  return {Pearson(a, b), a.size()};
}

}  // namespace dpepi::validation
