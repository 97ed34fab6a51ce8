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

#include <cmath>

#include <gtest/gtest.h>

#include "dpepi/error.h"
#include "small_fixture.h"

namespace dpepi::analytics {
namespace {

using testing::SmallFixture;
using testing::ToTable;

constexpr double kHuge = 1e12;
const AnalysisWindow kJanBogota{Date{2020, 1, 1}, Date{2020, 1, 31}, City::kBogota};
const std::vector<std::string> kJanWeeks{"2020-01-07", "2020-01-14", "2020-01-21",
                                         "2020-01-28"};

TEST(WindowStepsTest, GridDatesInsideWindow) {
  const auto steps = WindowSteps(kJanBogota, kGridStart);
  ASSERT_EQ(steps.size(), 4u);
  EXPECT_EQ(steps[0], (Date{2020, 1, 7}));
  EXPECT_EQ(steps[3], (Date{2020, 1, 28}));
  // A full calendar year touches 52 grid weeks.
  EXPECT_EQ(WindowSteps({Date{2020, 1, 1}, Date{2020, 12, 31}, City::kBogota}, kGridStart)
                .size(),
            52u);
  EXPECT_TRUE(WindowSteps({Date{2020, 1, 8}, Date{2020, 1, 13}, City::kBogota}, kGridStart)
                  .empty());
}

TEST(HotspotTest, NoiseFreeMatchesOracle) {
  const auto table = ToTable(SmallFixture());
  for (City city : kAllCities) {
    AnalysisWindow w = kJanBogota;
    w.city = city;
    dp::BudgetLedger ledger(kHuge);
    Rng rng(1);
    const auto map = Hotspot(table, w, kHuge, rng, ledger);
    const auto oracle = testing::HotspotOracle(SmallFixture(), std::string(CityName(city)),
                                               "2020-01-01", "2020-01-31",
                                               kDefaultUpperBound);
    EXPECT_EQ(map.counts, oracle) << CityName(city);
    for (const auto& [code, n] : map.counts) EXPECT_EQ(CityOfPostal(code), city);
  }
}

TEST(HotspotTest, ClipsToUpperBound) {
  const auto table = ToTable(SmallFixture());
  dp::BudgetLedger ledger(kHuge);
  Rng rng(1);
  const auto map = Hotspot(table, kJanBogota, kHuge, rng, ledger);
  // 110111 offline: Restaurants 47 + Hospitals 7 + min(500, U) + 6 + 8.
  EXPECT_EQ(map.counts.at("110111"), 47 + 7 + 202 + 6 + 8);
}

TEST(HotspotTest, EmptyWindowAndOnlineOnly) {
  const auto table = ToTable(SmallFixture());
  dp::BudgetLedger ledger(10);
  Rng rng(1);
  EXPECT_TRUE(Hotspot(table, {Date{2021, 1, 1}, Date{2021, 2, 1}, City::kBogota}, 1, rng,
                      ledger)
                  .counts.empty());
  std::vector<testing::FixtureRow> online;
  for (auto r : SmallFixture()) {
    r.online = true;
    online.push_back(r);
  }
  EXPECT_TRUE(Hotspot(ToTable(online), kJanBogota, 1, rng, ledger).counts.empty());
}

TEST(HotspotTest, ScaleChargeAndReproducibility) {
  const auto table = ToTable(SmallFixture());
  dp::BudgetLedger ledger(1);
  Rng a(5), b(5);
  const auto m1 = Hotspot(table, kJanBogota, 1, a, ledger);
  EXPECT_DOUBLE_EQ(m1.privacy.sigma, 3.0 * 1 * kDefaultUpperBound / 1.0);
  ASSERT_EQ(ledger.charges().size(), 1u);
  EXPECT_EQ(ledger.charges()[0].label, "hotspot:Bogota");
  dp::BudgetLedger other(1);
  EXPECT_EQ(FormatHotspotCsv(m1), FormatHotspotCsv(Hotspot(table, kJanBogota, 1, b, other)));
  for (const auto& [code, n] : m1.counts) EXPECT_GE(n, 0);
  EXPECT_THROW(Hotspot(table, kJanBogota, 1, a, ledger), BudgetExceededError);
}

TEST(MobilityTest, NoiseFreeMatchesOracle) {
  const auto table = ToTable(SmallFixture());
  const std::map<SuperCategory, std::set<std::string>> members = {
      {SuperCategory::kRetailAndRecreation,
       {"General Retail Stores", "Bars/Discotheques", "Restaurants", "Hotels/Motels"}},
      {SuperCategory::kGroceryAndPharmacy,
       {"Grocery Stores/Supermarkets", "Drug Stores/Pharmacies"}},
      {SuperCategory::kTransitStations, {"Airlines"}},
  };
  for (City city : {City::kBogota, City::kMedellin, City::kSantiago}) {
    for (const auto& [super, cats] : members) {
      AnalysisWindow w = kJanBogota;
      w.city = city;
      dp::BudgetLedger ledger(kHuge);
      Rng rng(2);
      const auto s = Mobility(table, w, super, kHuge, rng, ledger);
      EXPECT_EQ(s.noisy_counts,
                testing::VolumeOracle(SmallFixture(), std::string(CityName(city)), cats,
                                      kJanWeeks, kDefaultUpperBound))
          << CityName(city) << " " << SuperCategoryName(super);
    }
  }
}

TEST(MobilityTest, PerStepLedgerCharges) {
  const auto table = ToTable(SmallFixture());
  dp::BudgetLedger ledger(2.0);
  Rng rng(3);
  const auto s =
      Mobility(table, kJanBogota, SuperCategory::kRetailAndRecreation, 2.0, rng, ledger);
  ASSERT_EQ(ledger.charges().size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(ledger.charges()[i].epsilon, 0.5);
    EXPECT_EQ(ledger.charges()[i].label,
              "mobility:retail_and_recreation:" + kJanWeeks[i]);
  }
  EXPECT_EQ(s.privacy.time_steps, 4);
  EXPECT_DOUBLE_EQ(s.privacy.sigma, 3.0 * 4 * kDefaultUpperBound / 2.0);
  EXPECT_THROW(ledger.Charge("fifth", 0.01), BudgetExceededError);
}

TEST(MobilityTest, InsufficientBudgetChargesNothing) {
  const auto table = ToTable(SmallFixture());
  dp::BudgetLedger ledger(1.0);
  Rng rng(3);
  EXPECT_THROW(
      Mobility(table, kJanBogota, SuperCategory::kRetailAndRecreation, 2.0, rng, ledger),
      BudgetExceededError);
  EXPECT_TRUE(ledger.charges().empty());
}

TEST(MobilityTest, ConstantCountsGiveZeroPercentChange) {
  std::vector<testing::FixtureRow> rows;
  for (int w = 0; w < 10; ++w) {
    rows.push_back({1, (Date{2020, 1, 7} + 7 * w).ToString(), "Restaurants", "110111",
                    false, 40});
  }
  dp::BudgetLedger ledger(kHuge);
  Rng rng(4);
  const auto s = Mobility(ToTable(rows), {Date{2020, 1, 1}, Date{2020, 3, 31}, City::kBogota},
                          SuperCategory::kRetailAndRecreation, kHuge, rng, ledger);
  EXPECT_EQ(s.baseline, 40.0);
  ASSERT_EQ(s.pct_change_from_baseline.size(), 13u);
  for (std::size_t k = 0; k < 10; ++k) EXPECT_NEAR(s.pct_change_from_baseline[k], 0, 1e-9);
  // Weeks without data fall to -100%.
  EXPECT_NEAR(s.pct_change_from_baseline[12], -100, 1e-9);
}

TEST(MobilityTest, BaselineIsMedianOfFirstFiveWeeksOf2020) {
  std::vector<testing::FixtureRow> rows;
  const long long counts[] = {999, 10, 30, 20, 50, 40, 77, 1};
  for (int w = 0; w < 8; ++w) {
    rows.push_back({1, (Date{2019, 12, 31} + 7 * w).ToString(), "Airlines", "110111",
                    false, counts[w]});
  }
  dp::BudgetLedger ledger(kHuge);
  Rng rng(4);
  const auto s = Mobility(ToTable(rows), {Date{2019, 12, 1}, Date{2020, 3, 1}, City::kBogota},
                          SuperCategory::kTransitStations, kHuge, rng, ledger);
  // 2020 weeks start at 01-07: 10, 30, 20, 50, 40 -> median 30.
  EXPECT_EQ(s.baseline, 30.0);
}

TEST(MobilityTest, ZeroBaselineIsNA) {
  std::vector<testing::FixtureRow> rows{
      {1, "2020-01-07", "Airlines", "110111", false, 0}};
  dp::BudgetLedger ledger(kHuge);
  Rng rng(4);
  const auto s = Mobility(ToTable(rows), kJanBogota, SuperCategory::kTransitStations,
                          kHuge, rng, ledger);
  EXPECT_TRUE(std::isnan(s.pct_change_from_baseline[0]));
  EXPECT_NE(FormatMobilityCsv(s).find("2020-01-07,0,NA\n"), std::string::npos);
}

TEST(MobilityTest, PerPostalSumsToCitySeries) {
  const auto table = ToTable(SmallFixture());
  dp::BudgetLedger ledger(10);
  Rng rng(6);
  const auto s = Mobility(table, kJanBogota, SuperCategory::kRetailAndRecreation, 1.0, rng,
                          ledger, {}, true);
  ASSERT_FALSE(s.per_postal.empty());
  for (std::size_t k = 0; k < s.dates.size(); ++k) {
    long long total = 0;
    for (const auto& [code, series] : s.per_postal) {
      EXPECT_EQ(CityOfPostal(code), City::kBogota);
      total += series[k];
    }
    EXPECT_EQ(total, s.noisy_counts[k]);
  }
}

TEST(MobilityTest, WindowWithoutGridWeekIsRejected) {
  const auto table = ToTable(SmallFixture());
  dp::BudgetLedger ledger(10);
  Rng rng(6);
  EXPECT_THROW(Mobility(table, {Date{2020, 1, 8}, Date{2020, 1, 13}, City::kBogota},
                        SuperCategory::kTransitStations, 1, rng, ledger),
               ParameterError);
  EXPECT_THROW(Mobility(table, {Date{2020, 2, 1}, Date{2020, 1, 1}, City::kBogota},
                        SuperCategory::kTransitStations, 1, rng, ledger),
               ParameterError);
}

TEST(AdherenceTest, NoiseFreeMatchesOracle) {
  const auto table = ToTable(SmallFixture());
  const std::set<std::string> essential{"Utilities: Electric, Gas, Water",
                                        "Drug Stores/Pharmacies",
                                        "Grocery Stores/Supermarkets", "Hospitals",
                                        "General Retail Stores"};
  const std::set<std::string> luxury{"Hotels/Motels", "Bars/Discotheques", "Restaurants"};
  for (City city : kAllCities) {
    AnalysisWindow w = kJanBogota;
    w.city = city;
    dp::BudgetLedger ledger(kHuge);
    Rng rng(7);
    const auto s = Adherence(table, w, kHuge, rng, ledger);
    const std::string name(CityName(city));
    EXPECT_EQ(s.essential, testing::VolumeOracle(SmallFixture(), name, essential, kJanWeeks,
                                                 kDefaultUpperBound));
    EXPECT_EQ(s.luxury, testing::VolumeOracle(SmallFixture(), name, luxury, kJanWeeks,
                                              kDefaultUpperBound));
    EXPECT_EQ(ledger.charges().size(), 4u);
  }
}

TEST(AdherenceTest, AirlinesOnlyGivesZeros) {
  std::vector<testing::FixtureRow> rows;
  for (const auto& r : SmallFixture()) {
    if (r.category == "Airlines") rows.push_back(r);
  }
  dp::BudgetLedger ledger(kHuge);
  Rng rng(8);
  const auto s = Adherence(ToTable(rows), kJanBogota, kHuge, rng, ledger);
  for (std::size_t k = 0; k < s.dates.size(); ++k) {
    EXPECT_EQ(s.essential[k], 0);
    EXPECT_EQ(s.luxury[k], 0);
    EXPECT_TRUE(std::isnan(s.ratio[k]));
  }
}

TEST(AdherenceTest, DefaultClassesAreDisjointAndSkipTransitAndComputing) {
  const auto c = AdherenceClasses::Default();
  EXPECT_NO_THROW(c.Validate());
  for (const char* skip : {"Airlines", "Computer Network/Information Services"}) {
    EXPECT_FALSE(c.essential.contains(skip));
    EXPECT_FALSE(c.luxury.contains(skip));
  }
  AdherenceClasses bad = c;
  bad.luxury.insert("Hospitals");
  EXPECT_THROW(bad.Validate(), ParameterError);
}

TEST(SuperCategoryTest, NamesRoundTripAndMembership) {
  for (auto s : {SuperCategory::kRetailAndRecreation, SuperCategory::kGroceryAndPharmacy,
                 SuperCategory::kTransitStations}) {
    EXPECT_EQ(ParseSuperCategory(SuperCategoryName(s)), s);
  }
  EXPECT_THROW(ParseSuperCategory("parks"), ParameterError);
  const auto m = SuperCategoryMap::Default();
  EXPECT_EQ(m.Of("Airlines"), SuperCategory::kTransitStations);
  EXPECT_FALSE(m.Of("Hospitals").has_value());
}

TEST(AnalyticGaussianModeTest, MetadataIsFlagged) {
  const auto table = ToTable(SmallFixture());
  AnalysisSettings settings;
  settings.mode = dp::NoiseMode::kAnalyticGaussian;
  dp::BudgetLedger ledger(1);
  Rng rng(9);
  const auto m = Hotspot(table, kJanBogota, 1, rng, ledger, settings);
  EXPECT_EQ(m.privacy.mode, dp::NoiseMode::kAnalyticGaussian);
  EXPECT_NEAR(m.privacy.sigma,
              3.0 * kDefaultUpperBound * std::sqrt(2 * std::log(1.25 / 1e-5)), 1e-9);
}

}  // namespace
}  // namespace dpepi::analytics
