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

#ifndef DPEPI_SVG_H_
#define DPEPI_SVG_H_

#include <map>
#include <string>
#include <vector>

#include "dpepi/date.h"

namespace dpepi::svg {

// Grid of postal-code cells shaded by count (white = 0, dark = max).
std::string Heatmap(const std::map<std::string, long long>& counts,
                    const std::string& title);

struct Line {
  std::string label;
  std::vector<double> values;  // NaN leaves a gap
};

// Lines over a shared date axis.
std::string LineChart(const std::vector<Date>& dates,
                      const std::vector<Line>& lines, const std::string& title);

}  // namespace dpepi::svg

#endif  // DPEPI_SVG_H_
