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

#include "dpepi/epi_ingest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "dpepi/csv.h"
#include "dpepi/error.h"

namespace dpepi::epi {
namespace {

// Grid bucket whose 7-day window (ending on the grid date) holds `d`.
std::optional<std::size_t> BucketOf(Date d, Date grid_start, std::size_t n) {
  int offset = d - grid_start + (kWeekDays - 1);
  if (offset < 0) return std::nullopt;
  auto k = static_cast<std::size_t>(offset / kWeekDays);
  if (k >= n) return std::nullopt;
  return k;
}

double ParseCount(const std::string& cell, std::size_t line,
                  const std::string& column) {
  std::string_view s = cell;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return 0.0;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw RowError(line, "bad " + column + " value '" + cell + "'");
  }
  return std::max(v, 0.0);
}

const std::string& Cell(const std::vector<std::string>& row, std::size_t i) {
  static const std::string kEmpty;
  return i < row.size() ? row[i] : kEmpty;
}

}  // namespace

DailyByCountry ParseEpiCsv(std::string_view text,
                           std::span<const std::string> countries,
                           const EpiColumns& columns) {
  auto table = csv::Table::Parse(text);
  const std::size_t loc = table.RequireColumn(columns.location);
  const std::size_t date = table.RequireColumn(columns.date);
  const std::size_t cases = table.RequireColumn(columns.new_cases);
  const std::size_t deaths = table.RequireColumn(columns.new_deaths);
  const std::set<std::string, std::less<>> wanted(countries.begin(),
                                                  countries.end());

  DailyByCountry out;
  for (std::size_t i = 0; i < table.rows().size(); ++i) {
    const auto& row = table.rows()[i];
    const std::string& country = Cell(row, loc);
    if (!wanted.empty() && !wanted.contains(country)) continue;
    const std::size_t line = table.line_of(i);
    EpiDailyRecord rec;
    rec.country = country;
    try {
      rec.date = Date::Parse(Cell(row, date));
    } catch (const ParameterError& e) {
      throw RowError(line, e.what());
    }
    rec.new_cases = ParseCount(Cell(row, cases), line, columns.new_cases);
    rec.new_deaths = ParseCount(Cell(row, deaths), line, columns.new_deaths);
    out[country].push_back(std::move(rec));
  }
  return out;
}

std::optional<std::size_t> EpiWeeklySeries::IndexOf(Date date) const {
  auto it = std::lower_bound(week_end_dates.begin(), week_end_dates.end(), date);
  if (it == week_end_dates.end() || *it != date) return std::nullopt;
  return static_cast<std::size_t>(it - week_end_dates.begin());
}

EpiWeeklySeries WeeklyAggregate(std::string country,
                                std::span<const EpiDailyRecord> daily,
                                Date grid_start, Date grid_end) {
  EpiWeeklySeries s;
  s.country = std::move(country);
  s.week_end_dates = WeekGrid(grid_start, grid_end);
  const std::size_t n = s.week_end_dates.size();
  s.new_deaths.assign(n, 0.0);
  s.new_cases.assign(n, 0.0);
  for (const auto& rec : daily) {
    if (auto k = BucketOf(rec.date, grid_start, n)) {
      s.new_deaths[*k] += std::max(rec.new_deaths, 0.0);
      s.new_cases[*k] += std::max(rec.new_cases, 0.0);
    }
  }
  const double max_deaths =
      n ? *std::max_element(s.new_deaths.begin(), s.new_deaths.end()) : 0.0;
  s.deaths_normalized.assign(n, 0.0);
  if (max_deaths > 0) {
    for (std::size_t k = 0; k < n; ++k) {
      s.deaths_normalized[k] = s.new_deaths[k] / max_deaths;
    }
  }
  return s;
}

WeeklyByCountry LoadWeekly(std::string_view text,
                           std::span<const std::string> countries,
                           Date grid_start, Date grid_end,
                           const EpiColumns& columns) {
  auto daily = ParseEpiCsv(text, countries, columns);
  WeeklyByCountry out;
  for (const auto& c : countries) {
    auto it = daily.find(c);
    std::span<const EpiDailyRecord> rows;
    if (it != daily.end()) rows = it->second;
    out.emplace(c, WeeklyAggregate(c, rows, grid_start, grid_end));
  }
  return out;
}

std::vector<MobilityReferenceSeries> ParseMobilityCsv(
    std::string_view text, std::string_view region, Date grid_start,
    Date grid_end, const MobilityColumns& columns) {
  auto table = csv::Table::Parse(text);
  const std::size_t region_col = table.RequireColumn(columns.region);
  const std::size_t date_col = table.RequireColumn(columns.date);

  std::vector<std::size_t> cat_cols;
  if (columns.categories.empty()) {
    for (std::size_t i = 0; i < table.header().size(); ++i) {
      if (i != region_col && i != date_col) cat_cols.push_back(i);
    }
  } else {
    for (const auto& c : columns.categories) {
      cat_cols.push_back(table.RequireColumn(c));
    }
  }

  const auto grid = WeekGrid(grid_start, grid_end);
  const std::size_t n = grid.size();
  std::vector<std::vector<double>> sums(cat_cols.size(),
                                        std::vector<double>(n, 0.0));
  std::vector<std::vector<int>> counts(cat_cols.size(),
                                       std::vector<int>(n, 0));
  std::set<std::string> regions;
  bool found = false;

  for (std::size_t i = 0; i < table.rows().size(); ++i) {
    const auto& row = table.rows()[i];
    const std::string& r = Cell(row, region_col);
    regions.insert(r);
    if (r != region) continue;
    found = true;
    const std::size_t line = table.line_of(i);
    Date d;
    try {
      d = Date::Parse(Cell(row, date_col));
    } catch (const ParameterError& e) {
      throw RowError(line, e.what());
    }
    auto k = BucketOf(d, grid_start, n);
    if (!k) continue;
    for (std::size_t c = 0; c < cat_cols.size(); ++c) {
      const std::string& cell = Cell(row, cat_cols[c]);
      if (cell.empty()) continue;
      double v = 0;
      auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw RowError(line, "bad percent change '" + cell + "'");
      }
      sums[c][*k] += v;
      counts[c][*k] += 1;
    }
  }
  if (!found) {
    std::string list;
    for (const auto& r : regions) {
      if (!list.empty()) list += ", ";
      list += r;
    }
    throw NotFoundError("region '" + std::string(region) +
                        "' not found; available: " + list);
  }

  static constexpr std::string_view kSuffix = "_percent_change_from_baseline";
  std::vector<MobilityReferenceSeries> out;
  for (std::size_t c = 0; c < cat_cols.size(); ++c) {
    MobilityReferenceSeries s;
    s.region = std::string(region);
    s.category = table.header()[cat_cols[c]];
    if (s.category.ends_with(kSuffix)) {
      s.category.resize(s.category.size() - kSuffix.size());
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (counts[c][k] == 0) continue;
      s.week_end_dates.push_back(grid[k]);
      s.pct_change_from_baseline.push_back(sums[c][k] / counts[c][k]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace dpepi::epi
