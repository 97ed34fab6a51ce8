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

#ifndef DPEPI_TESTS_SUPPORT_OWID_FIXTURE_H_
#define DPEPI_TESTS_SUPPORT_OWID_FIXTURE_H_

#include <string>
#include <string_view>

#include "dpepi/date.h"

namespace dpepi::testing {

// Deterministic OWID-layout CSV (iso_code,continent,location,date,
// total_cases,new_cases,total_deaths,new_deaths) with daily rows from
// 2020-01-01 to 2022-12-31 for Colombia, Brazil, Chile and Peru. Deaths are
// a sum of Gaussian waves starting in March 2020; cases are about 50x deaths
// a few days earlier.
std::string OwidFixtureCsv();

// Daily deaths of the fixture for one country at one date.
double FixtureDailyDeaths(std::string_view country, Date date);

// Writes the fixture into a temp file once per process and returns its path.
const std::string& OwidFixturePath();

}  // namespace dpepi::testing

#endif  // DPEPI_TESTS_SUPPORT_OWID_FIXTURE_H_
