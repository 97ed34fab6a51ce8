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

// Writes the synthetic OWID-style epidemiological CSV used by the demo and
// the tests.

#include <iostream>

#include "dpepi/csv.h"
#include "owid_fixture.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_owid_fixture <out.csv>\n";
    return 2;
  }
  dpepi::csv::WriteFile(argv[1], dpepi::testing::OwidFixtureCsv());
  return 0;
}
