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

#include "dpepi/config.h"

#include <set>

#include "json.hpp"

#include "dpepi/csv.h"
#include "dpepi/error.h"

namespace dpepi {
namespace {

using nlohmann::json;

Date GetDate(const json& j, const char* key, Date fallback) {
  if (!j.contains(key)) return fallback;
  return Date::Parse(j.at(key).get<std::string>());
}

City GetCity(const std::string& name) {
  auto city = ParseCity(name);
  if (!city) throw ParameterError("unknown city '" + name + "'");
  return *city;
}

void CheckKeys(const json& j, std::string_view section,
               const std::set<std::string>& allowed) {
  if (!j.is_object()) {
    throw ParameterError("config section '" + std::string(section) +
                         "' must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ParameterError("unknown key '" + key + "' in config section '" +
                           std::string(section) + "'");
    }
  }
}

void LoadCities(const json& j, datagen::CityTable& cities) {
  if (!j.is_object()) throw ParameterError("'cities' must map city -> population");
  cities.clear();
  for (const auto& [name, pop] : j.items()) {
    cities.push_back({GetCity(name), pop.get<double>()});
  }
  if (cities.empty()) throw ParameterError("'cities' must list at least one city");
}

void LoadCategories(const json& j, std::vector<datagen::CategoryProfile>& out) {
  if (!j.is_array()) throw ParameterError("'categories' must be an array");
  out.clear();
  for (const auto& c : j) {
    CheckKeys(c, "categories[]",
              {"name", "share_weight", "covid_multiplier", "response_lag",
               "base_volume", "typical_ticket", "online_share"});
    datagen::CategoryProfile p;
    p.name = c.at("name").get<std::string>();
    p.share_weight = c.value("share_weight", p.share_weight);
    p.covid_multiplier = c.value("covid_multiplier", p.covid_multiplier);
    p.response_lag = c.value("response_lag", p.response_lag);
    p.base_volume = c.value("base_volume", p.base_volume);
    p.typical_ticket = c.value("typical_ticket", p.typical_ticket);
    p.online_share = c.value("online_share", p.online_share);
    out.push_back(std::move(p));
  }
  datagen::ValidateProfiles(out);
}

void LoadGeneration(const json& j, Config& cfg) {
  CheckKeys(j, "generation",
            {"seed", "merchant_count", "start", "end", "noise_sigma",
             "postal_districts", "epi_csv"});
  auto& g = cfg.generation;
  g.seed = j.value("seed", g.seed);
  g.merchant_count = j.value("merchant_count", g.merchant_count);
  g.start = GetDate(j, "start", g.start);
  g.end = GetDate(j, "end", g.end);
  g.noise_sigma = j.value("noise_sigma", g.noise_sigma);
  g.postal_districts = j.value("postal_districts", g.postal_districts);
  cfg.epi_csv = j.value("epi_csv", cfg.epi_csv);
}

void LoadPrivacy(const json& j, Config& cfg) {
  CheckKeys(j, "privacy",
            {"total_epsilon", "epsilon", "delta", "mode", "sensitivity",
             "upper_bound", "baseline_count_scale", "baseline_spend_scale"});
  cfg.privacy.total_epsilon = j.value("total_epsilon", cfg.privacy.total_epsilon);
  cfg.privacy.epsilon = j.value("epsilon", cfg.privacy.epsilon);
  auto& a = cfg.analysis;
  a.delta = j.value("delta", a.delta);
  if (j.contains("mode")) a.mode = dp::ParseNoiseMode(j.at("mode").get<std::string>());
  a.sensitivity = j.value("sensitivity", a.sensitivity);
  a.upper_bound = j.value("upper_bound", a.upper_bound);
  if (j.contains("baseline_count_scale") || j.contains("baseline_spend_scale")) {
    cfg.privacy.baseline = datagen::FieldNoise{
        j.value("baseline_count_scale", 0.0), j.value("baseline_spend_scale", 0.0)};
  }
}

void LoadAnalysis(const json& j, Config& cfg) {
  CheckKeys(j, "analysis",
            {"city", "start", "end", "baseline_start", "baseline_weeks",
             "super_categories", "essential", "luxury"});
  if (j.contains("city")) cfg.window.city = GetCity(j.at("city").get<std::string>());
  cfg.window.start = GetDate(j, "start", cfg.window.start);
  cfg.window.end = GetDate(j, "end", cfg.window.end);
  auto& a = cfg.analysis;
  a.baseline_start = GetDate(j, "baseline_start", a.baseline_start);
  a.baseline_weeks = j.value("baseline_weeks", a.baseline_weeks);
  if (j.contains("super_categories")) {
    a.super_categories.membership.clear();
    for (const auto& [cat, super] : j.at("super_categories").items()) {
      a.super_categories.membership[cat] =
          analytics::ParseSuperCategory(super.get<std::string>());
    }
  }
  if (j.contains("essential")) {
    a.adherence.essential.clear();
    for (const auto& c : j.at("essential")) a.adherence.essential.insert(c.get<std::string>());
  }
  if (j.contains("luxury")) {
    a.adherence.luxury.clear();
    for (const auto& c : j.at("luxury")) a.adherence.luxury.insert(c.get<std::string>());
  }
  a.adherence.Validate();
}

void LoadContact(const json& j, Config& cfg) {
  CheckKeys(j, "contact",
            {"age_groups", "mixing_factors", "weighting", "step", "fd_epsilon",
             "max_iterations", "loss_tolerance", "seed"});
  auto& c = cfg.contact;
  c.age_groups = j.value("age_groups", c.age_groups);
  if (j.contains("mixing_factors")) {
    c.mixing_factors = j.at("mixing_factors").get<std::vector<double>>();
  }
  if (j.contains("weighting")) {
    const auto w = j.at("weighting").get<std::string>();
    if (w == "unweighted") c.weighting = contact::CityWeighting::kUnweighted;
    else if (w == "population") c.weighting = contact::CityWeighting::kPopulation;
    else throw ParameterError("unknown weighting '" + w + "'");
  }
  c.training.step = j.value("step", c.training.step);
  c.training.fd_epsilon = j.value("fd_epsilon", c.training.fd_epsilon);
  c.training.max_iterations = j.value("max_iterations", c.training.max_iterations);
  c.training.loss_tolerance = j.value("loss_tolerance", c.training.loss_tolerance);
  c.training.seed = j.value("seed", c.training.seed);
}

void LoadRt(const json& j, Config& cfg) {
  CheckKeys(j, "rt",
            {"si_mean", "si_sd", "si_max", "unit", "window", "prior_shape",
             "prior_rate"});
  auto& r = cfg.rt;
  r.si_mean = j.value("si_mean", r.si_mean);
  r.si_sd = j.value("si_sd", r.si_sd);
  r.si_max = j.value("si_max", r.si_max);
  if (j.contains("unit")) {
    const auto u = j.at("unit").get<std::string>();
    if (u == "day") {
      r.unit = rt::TimeUnit::kDay;
    } else if (u == "week") {
      r.unit = rt::TimeUnit::kWeek;
      // Weekly defaults unless overridden below.
      r.window = 2;
      r.si_max = 5;
    } else {
      throw ParameterError("unknown time unit '" + u + "'");
    }
  }
  r.window = j.value("window", r.window);
  r.si_max = j.value("si_max", r.si_max);
  r.prior_shape = j.value("prior_shape", r.prior_shape);
  r.prior_rate = j.value("prior_rate", r.prior_rate);
}

void LoadValidation(const json& j, Config& cfg) {
  CheckKeys(j, "validation",
            {"ccf_max_lag", "lag_band_max", "null_ccf_max_abs",
             "share_tolerance_pp", "expected_dates", "ccf_exempt_cities"});
  auto& v = cfg.validation;
  v.ccf_max_lag = j.value("ccf_max_lag", v.ccf_max_lag);
  v.lag_band_max = j.value("lag_band_max", v.lag_band_max);
  v.null_ccf_max_abs = j.value("null_ccf_max_abs", v.null_ccf_max_abs);
  v.share_tolerance_pp = j.value("share_tolerance_pp", v.share_tolerance_pp);
  v.expected_dates = j.value("expected_dates", v.expected_dates);
  if (j.contains("ccf_exempt_cities")) {
    for (const auto& c : j.at("ccf_exempt_cities")) {
      v.ccf_exempt_cities.insert(GetCity(c.get<std::string>()));
    }
  }
}

}  // namespace

Config Config::FromJson(std::string_view text) {
  Config cfg;
  try {
    const json j = json::parse(text);
    CheckKeys(j, "<root>",
              {"cities", "categories", "generation", "privacy", "analysis",
               "contact", "rt", "validation"});
    if (j.contains("cities")) LoadCities(j.at("cities"), cfg.generation.cities);
    if (j.contains("categories")) LoadCategories(j.at("categories"), cfg.generation.categories);
    if (j.contains("generation")) LoadGeneration(j.at("generation"), cfg);
    if (j.contains("privacy")) LoadPrivacy(j.at("privacy"), cfg);
    if (j.contains("analysis")) LoadAnalysis(j.at("analysis"), cfg);
    if (j.contains("contact")) LoadContact(j.at("contact"), cfg);
    if (j.contains("rt")) LoadRt(j.at("rt"), cfg);
    if (j.contains("validation")) LoadValidation(j.at("validation"), cfg);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  return cfg;
}

Config Config::Load(const std::string& path) {
  return FromJson(csv::ReadFile(path));
}

}  // namespace dpepi
