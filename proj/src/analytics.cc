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

#include "dpepi/analytics.h"

#include <algorithm>
#include <cmath>
#include <iterator>

#include <fmt/format.h>

#include "dpepi/error.h"

namespace dpepi::analytics {
namespace {

// Per merchant-week contribution after clipping to [0, U].
double Clipped(const TransactionRecord& r, double upper_bound) {
  return std::clamp(static_cast<double>(r.nb_transactions), 0.0, upper_bound);
}

bool InWindow(const TransactionRecord& r, const AnalysisWindow& w) {
  return r.date >= w.start && r.date <= w.end &&
         CityOfPostal(r.postal_code) == w.city;
}

// Index of `d` within the ascending step list, if it is one of the steps.
std::optional<std::size_t> StepIndex(const std::vector<Date>& steps, Date d) {
  auto it = std::lower_bound(steps.begin(), steps.end(), d);
  if (it == steps.end() || *it != d) return std::nullopt;
  return static_cast<std::size_t>(it - steps.begin());
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "NA";
  return fmt::format("{:.6f}", v);
}

}  // namespace

void AnalysisWindow::Validate() const {
  if (end < start) {
    throw ParameterError("analysis window end " + end.ToString() +
                         " precedes start " + start.ToString());
  }
}

std::string_view SuperCategoryName(SuperCategory s) {
  switch (s) {
    case SuperCategory::kRetailAndRecreation: return "retail_and_recreation";
    case SuperCategory::kGroceryAndPharmacy: return "grocery_and_pharmacy";
    case SuperCategory::kTransitStations: return "transit_stations";
  }
  return "";
}

SuperCategory ParseSuperCategory(std::string_view name) {
  for (auto s : {SuperCategory::kRetailAndRecreation,
                 SuperCategory::kGroceryAndPharmacy,
                 SuperCategory::kTransitStations}) {
    if (SuperCategoryName(s) == name) return s;
  }
  throw ParameterError("unknown super-category '" + std::string(name) + "'");
}

std::optional<SuperCategory> SuperCategoryMap::Of(
    std::string_view category) const {
  auto it = membership.find(std::string(category));
  if (it == membership.end()) return std::nullopt;
  return it->second;
}

SuperCategoryMap SuperCategoryMap::Default() {
  SuperCategoryMap m;
  m.membership = {
      {"General Retail Stores", SuperCategory::kRetailAndRecreation},
      {"Bars/Discotheques", SuperCategory::kRetailAndRecreation},
      {"Restaurants", SuperCategory::kRetailAndRecreation},
      {"Hotels/Motels", SuperCategory::kRetailAndRecreation},
      {"Grocery Stores/Supermarkets", SuperCategory::kGroceryAndPharmacy},
      {"Drug Stores/Pharmacies", SuperCategory::kGroceryAndPharmacy},
      {"Airlines", SuperCategory::kTransitStations},
  };
  return m;
}

void AdherenceClasses::Validate() const {
  for (const auto& e : essential) {
    if (luxury.contains(e)) {
      throw ParameterError("category '" + e + "' is both essential and luxury");
    }
  }
}

AdherenceClasses AdherenceClasses::Default() {
  AdherenceClasses c;
  c.essential = {"Utilities: Electric, Gas, Water", "Drug Stores/Pharmacies",
                 "Grocery Stores/Supermarkets", "Hospitals",
                 "General Retail Stores"};
  c.luxury = {"Hotels/Motels", "Bars/Discotheques", "Restaurants"};
  return c;
}

dp::PrivacyParams AnalysisSettings::Params(double epsilon,
                                           int time_steps) const {
  dp::PrivacyParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.sensitivity = sensitivity;
  p.time_steps = time_steps;
  p.upper_bound = upper_bound;
  p.mode = mode;
  return p;
}

std::vector<Date> WindowSteps(const AnalysisWindow& window, Date grid_origin) {
  window.Validate();
  // First grid date >= start.
  int offset = window.start - grid_origin;
  int k = offset <= 0 ? -((-offset) / kWeekDays)
                      : (offset + kWeekDays - 1) / kWeekDays;
  std::vector<Date> steps;
  for (Date d = grid_origin + k * kWeekDays; d <= window.end; d = d + kWeekDays) {
    if (d >= window.start) steps.push_back(d);
  }
  return steps;
}

HotspotMap Hotspot(const TransactionTable& table, const AnalysisWindow& window,
                   double epsilon, Rng& rng, dp::BudgetLedger& ledger,
                   const AnalysisSettings& settings) {
  window.Validate();
  const auto params = settings.Params(epsilon, 1);
  const double sigma = dp::NoiseScale(params);
  ledger.Charge(fmt::format("hotspot:{}", CityName(window.city)), epsilon);

  std::map<std::string, double> sums;
  for (const auto& r : table.rows) {
    if (r.type != TransactionType::kOffline || !InWindow(r, window)) continue;
    sums[r.postal_code] += Clipped(r, settings.upper_bound);
  }
  HotspotMap out;
  out.privacy = dp::MetadataFor(params);
  for (const auto& [code, sum] : sums) {
    const double noisy = dp::AddGaussianNoise(sum, sigma, rng);
    out.raw[code] = noisy;
    out.counts[code] = dp::PostProcessCount(noisy);
  }
  return out;
}

MobilitySeries Mobility(const TransactionTable& table,
                        const AnalysisWindow& window,
                        SuperCategory super_category, double epsilon_total,
                        Rng& rng, dp::BudgetLedger& ledger,
                        const AnalysisSettings& settings, bool per_postal) {
  const auto steps = WindowSteps(window, settings.grid_origin);
  if (steps.empty()) {
    throw ParameterError("analysis window contains no grid week");
  }
  const int T = static_cast<int>(steps.size());
  const auto params = settings.Params(epsilon_total, T);
  const double sigma = dp::NoiseScale(params);
  const std::string_view super_name = SuperCategoryName(super_category);

  ledger.Require(fmt::format("mobility:{}", super_name), epsilon_total);
  for (const Date d : steps) {
    ledger.Charge(fmt::format("mobility:{}:{}", super_name, d.ToString()),
                  epsilon_total / T);
  }

  std::vector<bool> selected(table.categories.size());
  for (std::size_t c = 0; c < table.categories.size(); ++c) {
    selected[c] = settings.super_categories.Of(table.categories[c]) ==
                  super_category;
  }

  std::vector<double> sums(steps.size(), 0.0);
  std::map<std::string, std::vector<double>> postal_sums;
  for (const auto& r : table.rows) {
    if (!selected[r.category] || !InWindow(r, window)) continue;
    auto k = StepIndex(steps, r.date);
    if (!k) continue;
    const double v = Clipped(r, settings.upper_bound);
    sums[*k] += v;
    if (per_postal) {
      auto& s = postal_sums[r.postal_code];
      if (s.empty()) s.assign(steps.size(), 0.0);
      s[*k] += v;
    }
  }

  MobilitySeries out;
  out.dates = steps;
  out.privacy = dp::MetadataFor(params);
  out.raw.assign(steps.size(), 0.0);
  if (per_postal) {
    // City series is the sum of the released per-postal series.
    for (auto& [code, s] : postal_sums) {
      auto& released = out.per_postal[code];
      for (std::size_t k = 0; k < s.size(); ++k) {
        const double noisy = dp::AddGaussianNoise(s[k], sigma, rng);
        released.push_back(dp::PostProcessCount(noisy));
        out.raw[k] += noisy;
      }
    }
    for (std::size_t k = 0; k < steps.size(); ++k) {
      long long total = 0;
      for (const auto& [code, released] : out.per_postal) total += released[k];
      out.noisy_counts.push_back(total);
    }
  } else {
    for (std::size_t k = 0; k < steps.size(); ++k) {
      out.raw[k] = dp::AddGaussianNoise(sums[k], sigma, rng);
      out.noisy_counts.push_back(dp::PostProcessCount(out.raw[k]));
    }
  }

  std::vector<double> base;
  for (std::size_t k = 0; k < steps.size() &&
                          base.size() < std::size_t(settings.baseline_weeks);
       ++k) {
    if (steps[k] >= settings.baseline_start) {
      base.push_back(static_cast<double>(out.noisy_counts[k]));
    }
  }
  if (base.size() < std::size_t(settings.baseline_weeks)) {
    base.clear();
    for (std::size_t k = 0;
         k < steps.size() && base.size() < std::size_t(settings.baseline_weeks);
         ++k) {
      base.push_back(static_cast<double>(out.noisy_counts[k]));
    }
  }
  out.baseline = Median(base);
  for (long long v : out.noisy_counts) {
    out.pct_change_from_baseline.push_back(
        out.baseline > 0 ? (static_cast<double>(v) - out.baseline) /
                               out.baseline * 100.0
                         : std::nan(""));
  }
  return out;
}

AdherenceSeries Adherence(const TransactionTable& table,
                          const AnalysisWindow& window, double epsilon,
                          Rng& rng, dp::BudgetLedger& ledger,
                          const AnalysisSettings& settings) {
  settings.adherence.Validate();
  const auto steps = WindowSteps(window, settings.grid_origin);
  if (steps.empty()) {
    throw ParameterError("analysis window contains no grid week");
  }
  const int T = static_cast<int>(steps.size());
  const auto params = settings.Params(epsilon, T);
  const double sigma = dp::NoiseScale(params);

  ledger.Require("adherence", epsilon);
  for (const Date d : steps) {
    ledger.Charge(fmt::format("adherence:{}", d.ToString()), epsilon / T);
  }

  // 0 = neither, 1 = essential, 2 = luxury.
  std::vector<int> cls(table.categories.size(), 0);
  for (std::size_t c = 0; c < table.categories.size(); ++c) {
    if (settings.adherence.essential.contains(table.categories[c])) cls[c] = 1;
    if (settings.adherence.luxury.contains(table.categories[c])) cls[c] = 2;
  }

  std::vector<double> essential(steps.size(), 0.0), luxury(steps.size(), 0.0);
  for (const auto& r : table.rows) {
    if (cls[r.category] == 0 || !InWindow(r, window)) continue;
    auto k = StepIndex(steps, r.date);
    if (!k) continue;
    (cls[r.category] == 1 ? essential : luxury)[*k] +=
        Clipped(r, settings.upper_bound);
  }

  AdherenceSeries out;
  out.dates = steps;
  out.privacy = dp::MetadataFor(params);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const double e = dp::AddGaussianNoise(essential[k], sigma, rng);
    const double l = dp::AddGaussianNoise(luxury[k], sigma, rng);
    out.raw_essential.push_back(e);
    out.raw_luxury.push_back(l);
    out.essential.push_back(dp::PostProcessCount(e));
    out.luxury.push_back(dp::PostProcessCount(l));
    out.ratio.push_back(out.luxury.back() > 0
                            ? static_cast<double>(out.essential.back()) /
                                  static_cast<double>(out.luxury.back())
                            : std::nan(""));
  }
  return out;
}

std::string FormatHotspotCsv(const HotspotMap& map) {
  std::string out = "postal_code,noisy_count\n";
  for (const auto& [code, count] : map.counts) {
    out += fmt::format("{},{}\n", code, count);
  }
  return out;
}

std::string FormatMobilityCsv(const MobilitySeries& s) {
  std::string out = "date,noisy_count,pct_change_from_baseline\n";
  for (std::size_t k = 0; k < s.dates.size(); ++k) {
    out += fmt::format("{},{},{}\n", s.dates[k].ToString(), s.noisy_counts[k],
                       FormatDouble(s.pct_change_from_baseline[k]));
  }
  return out;
}

std::string FormatAdherenceCsv(const AdherenceSeries& s) {
  std::string out = "date,essential,luxury,ratio\n";
  for (std::size_t k = 0; k < s.dates.size(); ++k) {
    out += fmt::format("{},{},{},{}\n", s.dates[k].ToString(), s.essential[k],
                       s.luxury[k], FormatDouble(s.ratio[k]));
  }
  return out;
}

}  // namespace dpepi::analytics
