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

#ifndef DPEPI_DATE_H_
#define DPEPI_DATE_H_

#include <chrono>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace dpepi {

// Calendar day. Thin value wrapper over std::chrono::sys_days so that
// arithmetic is in whole days and ordering is chronological.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  constexpr Date(int year, unsigned month, unsigned day)
      : days_(std::chrono::year{year} / std::chrono::month{month} /
              std::chrono::day{day}) {}

  // Parses strict "YYYY-MM-DD". Throws ParameterError on anything else,
  // including impossible dates like 2021-02-30.
  static Date Parse(std::string_view iso);

  std::string ToString() const;

  constexpr std::chrono::sys_days days() const { return days_; }
  constexpr int year() const {
    return int(std::chrono::year_month_day{days_}.year());
  }

  constexpr Date operator+(int n) const {
    return Date(days_ + std::chrono::days{n});
  }
  constexpr Date operator-(int n) const {
    return Date(days_ - std::chrono::days{n});
  }
  // Signed number of days from `other` to *this.
  constexpr int operator-(Date other) const {
    return static_cast<int>((days_ - other.days_).count());
  }

  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::chrono::sys_days days_{};
};

// Canonical weekly grid of the transaction dataset.
inline constexpr Date kGridStart{2019, 1, 1};
inline constexpr Date kGridEnd{2022, 12, 27};
inline constexpr int kWeekDays = 7;

// Dates start, start+7, ... up to and including the last one <= end.
// Throws ParameterError if end < start.
std::vector<Date> WeekGrid(Date start, Date end);

// True when `d` is reachable from `origin` in whole weeks (either direction).
bool OnWeekGrid(Date d, Date origin);

}  // namespace dpepi

#endif  // DPEPI_DATE_H_
