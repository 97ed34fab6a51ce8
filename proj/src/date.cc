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

#include "dpepi/date.h"

#include <charconv>
#include <cstdio>

#include "dpepi/error.h"

namespace dpepi {
namespace {

bool ParseDigits(std::string_view s, int& out) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Date Date::Parse(std::string_view iso) {
  int y = 0, m = 0, d = 0;
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
      !ParseDigits(iso.substr(0, 4), y) || !ParseDigits(iso.substr(5, 2), m) ||
      !ParseDigits(iso.substr(8, 2), d)) {
    throw ParameterError("not an ISO-8601 date: '" + std::string(iso) + "'");
  }
  std::chrono::year_month_day ymd{std::chrono::year{y},
                                  std::chrono::month{unsigned(m)},
                                  std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) {
    throw ParameterError("invalid calendar date: '" + std::string(iso) + "'");
  }
  return Date(std::chrono::sys_days{ymd});
}

std::string Date::ToString() const {
  std::chrono::year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

std::vector<Date> WeekGrid(Date start, Date end) {
  if (end < start) {
    throw ParameterError("week grid end " + end.ToString() +
                         " precedes start " + start.ToString());
  }
  std::vector<Date> grid;
  grid.reserve(static_cast<std::size_t>((end - start) / kWeekDays + 1));
  for (Date d = start; d <= end; d = d + kWeekDays) grid.push_back(d);
  return grid;
}

bool OnWeekGrid(Date d, Date origin) { return (d - origin) % kWeekDays == 0; }

}  // namespace dpepi
