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

#ifndef DPEPI_VALIDATION_H_
#define DPEPI_VALIDATION_H_

#include <set>
#include <span>
#include <string>
#include <vector>

#include "dpepi/analytics.h"
#include "dpepi/datagen.h"
#include "dpepi/date.h"
#include "dpepi/epi_ingest.h"
#include "dpepi/geo.h"
#include "dpepi/transactions.h"

namespace dpepi::validation {

// Sample Pearson correlation. Throws ParameterError unless both series have
// the same length >= 2, and UndefinedCorrelationError if either is constant.
double Pearson(std::span<const double> x, std::span<const double> y);

struct CcfResult {
  std::vector<double> r;  // r[l] for l = 0..max_lag
  int lag_max = 0;        // argmax |r|, ties to the smaller lag
  double ccf_max = 0;     // r[lag_max]
};

// r[l] = Pearson(epi[t], txn[t + l]) over the overlapping range, i.e. the
// transaction series trails the epidemiological one by l steps. A lag whose
// overlap is constant in either series scores 0. Throws ParameterError
// unless the lengths match and exceed max_lag + 2.
CcfResult Ccf(std::span<const double> epi, std::span<const double> txn,
              int max_lag);

// Total nb_transactions of (city, category) on each of `dates`.
std::vector<double> WeeklyVolume(const TransactionTable& table, City city,
                                 std::uint16_t category,
                                 std::span<const Date> dates);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string measured;
  std::string expected;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool AllPassed() const;
  std::vector<const CheckResult*> Failures() const;
  // CSV: check,status,measured,expected
  std::string ToCsv() const;
  std::string ToText() const;
};

struct ValidationConfig {
  int ccf_max_lag = 12;          // lags searched by the CCF checks
  int lag_band_max = 3;          // accepted lag_max is 0..lag_band_max
  double null_ccf_max_abs = 0.3; // |ccf_max| bound for m_c == 0
  double share_tolerance_pp = 1.5;
  int expected_dates = 209;
  // Cities whose CCF checks are reported but always pass.
  std::set<City> ccf_exempt_cities;
};

// Conformance checks on a transaction table:
//   nonnegative_counts           no nb_transactions < 0
//   city_share:<city>            merchant share within tolerance of the
//                                population share
//   ccf_lag_sign:<city>:<cat>    (m_c != 0) lag_max in band and
//                                sign(ccf_max) == sign(m_c)
//   ccf_null:<city>:<cat>        (m_c == 0) |ccf_max| below bound
//   distinct_dates               exactly expected_dates dates
// Transaction series are aligned with the country's weekly new deaths by
// date (dates absent from the epi series read as zero).
ValidationReport ValidateDataset(const TransactionTable& table,
                                 const epi::WeeklyByCountry& epi,
                                 const datagen::GenerationConfig& generation,
                                 const ValidationConfig& config = {});

struct MobilityComparison {
  double r = 0;
  std::size_t overlap = 0;
};

// Pearson correlation of the percent-change columns over the dates both
// series define (NaN entries skipped). Throws ParameterError when fewer than
// 8 weeks overlap.
MobilityComparison CompareMobility(const analytics::MobilitySeries& dp_series,
                                   const epi::MobilityReferenceSeries& ref);

}  // namespace dpepi::validation

#endif  // DPEPI_VALIDATION_H_
