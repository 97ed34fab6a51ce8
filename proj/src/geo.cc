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

#include "dpepi/geo.h"

#include <algorithm>
#include <cctype>
#include <string>

namespace dpepi {

std::string_view CityName(City city) {
  switch (city) {
    case City::kMedellin: return "Medellin";
    case City::kBogota: return "Bogota";
    case City::kBrasilia: return "Brasilia";
    case City::kSantiago: return "Santiago";
  }
  return "";
}

std::optional<City> ParseCity(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "medellin") return City::kMedellin;
  if (lower == "bogota" || lower == "bogota dc") return City::kBogota;
  if (lower == "brasilia") return City::kBrasilia;
  if (lower == "santiago") return City::kSantiago;
  return std::nullopt;
}

std::string_view CountryOf(City city) {
  switch (city) {
    case City::kMedellin:
    case City::kBogota: return "Colombia";
    case City::kBrasilia: return "Brazil";
    case City::kSantiago: return "Chile";
  }
  return "";
}

City CityOfPostal(std::string_view code) {
  if (code.starts_with("05")) return City::kMedellin;
  if (code.starts_with("11")) return City::kBogota;
  if (code.ends_with("-000")) return City::kBrasilia;
  return City::kSantiago;
}

}  // namespace dpepi
