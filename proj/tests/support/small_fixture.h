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

#ifndef DPEPI_TESTS_SUPPORT_SMALL_FIXTURE_H_
#define DPEPI_TESTS_SUPPORT_SMALL_FIXTURE_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dpepi/transactions.h"

namespace dpepi::testing {

// Plain row of the hand-written analysis fixture.
struct FixtureRow {
  int merchant;
  std::string date;
  std::string category;
  std::string postal;
  bool online;
  long long count;
};

// 40 rows over four grid weeks of January 2020 in Bogota and Medellin, with
// ONLINE rows, an Airlines-only merchant and one count above the default
// upper bound.
const std::vector<FixtureRow>& SmallFixture();

TransactionTable ToTable(const std::vector<FixtureRow>& rows);

// Brute-force aggregation oracles. Each clips every row's count to
// [0, upper_bound] and matches cities by postal prefix rules written out
// independently of the library.
std::string OracleCity(const std::string& postal);

std::map<std::string, long long> HotspotOracle(const std::vector<FixtureRow>& rows,
                                               const std::string& city,
                                               const std::string& start,
                                               const std::string& end,
                                               double upper_bound);

std::vector<long long> VolumeOracle(const std::vector<FixtureRow>& rows,
                                    const std::string& city,
                                    const std::set<std::string>& categories,
                                    const std::vector<std::string>& dates,
                                    double upper_bound);

// Normalized symmetric contact matrix of one city's exact category volumes:
// n = D c, M = n n^T / sum(n), C = (diag(m) M + (diag(m) M)^T) / 2, C / sum(C).
std::vector<std::vector<double>> ContactOracle(
    const std::vector<std::vector<double>>& consumption,
    const std::vector<double>& category_counts,
    const std::vector<double>& mixing);

}  // namespace dpepi::testing

#endif  // DPEPI_TESTS_SUPPORT_SMALL_FIXTURE_H_
