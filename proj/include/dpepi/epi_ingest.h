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

#ifndef DPEPI_EPI_INGEST_H_
#define DPEPI_EPI_INGEST_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpepi/date.h"

namespace dpepi::epi {

struct EpiDailyRecord {
  std::string country;
  Date date;
  double new_cases = 0;
  double new_deaths = 0;
};

using DailyByCountry = std::map<std::string, std::vector<EpiDailyRecord>>;

struct EpiColumns {
  std::string location = "location";
  std::string date = "date";
  std::string new_cases = "new_cases";
  std::string new_deaths = "new_deaths";
};

// Parses an OWID-style daily CSV. Blank numeric cells read as 0 and negative
// revisions clamp to 0. When `countries` is non-empty, rows for any other
// location are skipped without being validated.
//
// Throws SchemaError for a missing column and RowError (with the 1-based
// line number) for an unparseable date or count.
DailyByCountry ParseEpiCsv(std::string_view text,
                           std::span<const std::string> countries = {},
                           const EpiColumns& columns = {});

// Weekly deaths/cases on a 7-day grid. `deaths_normalized` is new_deaths
// divided by its maximum (all zeros if there are no deaths) and drives the
// transaction generator's pandemic factor.
struct EpiWeeklySeries {
  std::string country;
  std::vector<Date> week_end_dates;
  std::vector<double> new_deaths;
  std::vector<double> new_cases;
  std::vector<double> deaths_normalized;

  std::size_t size() const { return week_end_dates.size(); }
  // Index of `date` in week_end_dates, if present.
  std::optional<std::size_t> IndexOf(Date date) const;
};

// Buckets daily records into the weeks of WeekGrid(grid_start, grid_end).
// Each bucket is the 7-day window ending on (and including) its grid date.
// Records outside every bucket are ignored.
EpiWeeklySeries WeeklyAggregate(std::string country,
                                std::span<const EpiDailyRecord> daily,
                                Date grid_start, Date grid_end);

using WeeklyByCountry = std::map<std::string, EpiWeeklySeries>;

// Convenience: parse + aggregate every requested country on the grid.
// Requested countries with no rows get an all-zero series.
WeeklyByCountry LoadWeekly(std::string_view text,
                           std::span<const std::string> countries,
                           Date grid_start = kGridStart,
                           Date grid_end = kGridEnd,
                           const EpiColumns& columns = {});

struct MobilityReferenceSeries {
  std::string region;
  std::string category;
  std::vector<Date> week_end_dates;
  std::vector<double> pct_change_from_baseline;
};

struct MobilityColumns {
  std::string region = "region";
  std::string date = "date";
  // Empty: every other column is a category.
  std::vector<std::string> categories;
};

// Averages the daily percent changes of `region` into grid weeks (same
// bucket rule as WeeklyAggregate). Weeks with no non-blank observation are
// omitted. A "_percent_change_from_baseline" suffix is stripped from
// category column names. Throws NotFoundError listing available regions.
std::vector<MobilityReferenceSeries> ParseMobilityCsv(
    std::string_view text, std::string_view region,
    Date grid_start = kGridStart, Date grid_end = kGridEnd,
    const MobilityColumns& columns = {});

}  // namespace dpepi::epi

#endif  // DPEPI_EPI_INGEST_H_
