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

#ifndef DPEPI_CONFIG_H_
#define DPEPI_CONFIG_H_

#include <optional>
#include <string>
#include <string_view>

#include "dpepi/analytics.h"
#include "dpepi/contact_matrix.h"
#include "dpepi/datagen.h"
#include "dpepi/rt.h"
#include "dpepi/validation.h"

namespace dpepi {

// Environment variable consulted when no --config flag is given.
inline constexpr const char* kConfigEnvVar = "DPEPI_CONFIG";

struct PrivacySection {
  double total_epsilon = 1.0;  // ledger budget of one run
  double epsilon = 1.0;        // budget of one analysis
  // Overrides the per-category baseline template when set.
  std::optional<datagen::FieldNoise> baseline;
};

struct ContactSection {
  int age_groups = contact::kDefaultAgeGroups;
  std::vector<double> mixing_factors;  // empty: all ones
  contact::CityWeighting weighting = contact::CityWeighting::kUnweighted;
  contact::TrainingHyperparams training;
};

struct RtSection {
  double si_mean = 6.5;  // days
  double si_sd = 4.0;    // days
  int si_max = 30;
  rt::TimeUnit unit = rt::TimeUnit::kDay;
  int window = 7;
  double prior_shape = 1.0;
  double prior_rate = 0.2;
};

// Whole-run configuration. One JSON document with the sections "cities",
// "categories", "generation", "privacy" and optionally "analysis",
// "contact", "rt", "validation"; absent keys keep their defaults.
struct Config {
  datagen::GenerationConfig generation;
  std::string epi_csv;  // generation.epi_csv
  PrivacySection privacy;
  analytics::AnalysisSettings analysis;
  analytics::AnalysisWindow window{Date{2020, 1, 1}, Date{2020, 12, 31},
                                   City::kBogota};
  ContactSection contact;
  RtSection rt;
  validation::ValidationConfig validation;

  // Throws ParameterError on malformed JSON, unknown sections or bad values.
  static Config FromJson(std::string_view text);
  static Config Load(const std::string& path);
};

}  // namespace dpepi

#endif  // DPEPI_CONFIG_H_
