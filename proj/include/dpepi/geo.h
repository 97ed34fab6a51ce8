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

#ifndef DPEPI_GEO_H_
#define DPEPI_GEO_H_

#include <array>
#include <optional>
#include <string_view>

namespace dpepi {

enum class City { kMedellin, kBogota, kBrasilia, kSantiago };

inline constexpr std::array<City, 4> kAllCities = {
    City::kMedellin, City::kBogota, City::kBrasilia, City::kSantiago};

std::string_view CityName(City city);

// Accepts the canonical names plus "Bogota DC"; case-insensitive.
std::optional<City> ParseCity(std::string_view name);

// Country whose national epidemiological series drives the city.
std::string_view CountryOf(City city);

// Postal-code encoding of the dataset: Medellin codes start "05", Bogota
// codes start "11", Brasilia codes end "-000", anything else is Santiago.
City CityOfPostal(std::string_view code);

}  // namespace dpepi

#endif  // DPEPI_GEO_H_
