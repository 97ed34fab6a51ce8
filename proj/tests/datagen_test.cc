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

#include "dpepi/datagen.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "dpepi/error.h"
#include "owid_fixture.h"

namespace dpepi::datagen {
namespace {

const epi::WeeklyByCountry& FixtureEpi() {
  static const auto* epi = [] {
    const std::vector<std::string> countries{"Colombia", "Brazil", "Chile"};
    return new epi::WeeklyByCountry(epi::LoadWeekly(testing::OwidFixtureCsv(), countries));
  }();
  return *epi;
}

GenerationConfig Small(int merchants, std::uint64_t seed = 5) {
  GenerationConfig c;
  c.merchant_count = merchants;
  c.seed = seed;
  return c;
}

TEST(CitySharesTest, DefaultPopulations) {
  const auto shares = CityShares(DefaultCities());
  ASSERT_EQ(shares.size(), 4u);
  EXPECT_NEAR(shares[0], 12.688926207645954, 1e-9);
  EXPECT_NEAR(shares[1], 35.46873456485232, 1e-9);
  EXPECT_NEAR(shares[2], 24.375185221772202, 1e-9);
  EXPECT_NEAR(shares[3], 27.467154005729526, 1e-9);
}

TEST(CitySharesTest, SymmetricAndSingleCity) {
  const auto equal = CityShares({{City::kMedellin, 5},
                                 {City::kBogota, 5},
                                 {City::kBrasilia, 5},
                                 {City::kSantiago, 5}});
  for (double s : equal) EXPECT_DOUBLE_EQ(s, 25.0);
  EXPECT_EQ(CityShares({{City::kBogota, 7}}), std::vector<double>{100.0});
}

TEST(CitySharesTest, DegenerateAndNegative) {
  EXPECT_THROW(CityShares({{City::kBogota, 0}}), DegenerateInputError);
  EXPECT_THROW(CityShares({{City::kBogota, -1}}), ParameterError);
}

TEST(PostalCodeTest, PatternsAndRoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    for (City city : kAllCities) {
      const std::string code = AssignPostalCode(city, rng);
      EXPECT_EQ(CityOfPostal(code), city) << code;
      switch (city) {
        case City::kMedellin:
          EXPECT_EQ(code.substr(0, 2), "05");
          break;
        case City::kBogota:
          EXPECT_EQ(code.substr(0, 2), "11");
          break;
        case City::kBrasilia:
          EXPECT_TRUE(code.ends_with("-000"));
          break;
        case City::kSantiago:
          EXPECT_NE(code.substr(0, 2), "05");
          EXPECT_NE(code.substr(0, 2), "11");
          EXPECT_FALSE(code.ends_with("-000"));
          break;
      }
    }
  }
}

TEST(PostalCodeTest, DistrictCountBoundsDistinctCodes) {
  Rng rng(4);
  std::set<std::string> codes;
  for (int i = 0; i < 2000; ++i) codes.insert(AssignPostalCode(City::kBogota, rng, 7));
  EXPECT_EQ(codes.size(), 7u);
  EXPECT_THROW(AssignPostalCode(City::kBogota, rng, 0), ParameterError);
}

TEST(CovidFactorTest, DeclaredExamples) {
  EXPECT_DOUBLE_EQ(CovidFactor(0.0, 0.37), 1.0);
  EXPECT_DOUBLE_EQ(CovidFactor(-0.5, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(CovidFactor(-2.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(CovidFactor(0.4, 0.5), 1.2);
  EXPECT_THROW(CovidFactor(0.1, 1.5), ParameterError);
  EXPECT_THROW(CovidFactor(0.1, -0.1), ParameterError);
}

TEST(ProfilesTest, DefaultsAreTheTenCategories) {
  const auto cats = DefaultCategories();
  ASSERT_EQ(cats.size(), 10u);
  std::map<std::string, double> m;
  for (const auto& c : cats) m[c.name] = c.covid_multiplier;
  EXPECT_EQ(m.at("Airlines"), -0.6);
  EXPECT_EQ(m.at("Bars/Discotheques"), -0.8);
  EXPECT_EQ(m.at("Restaurants"), -0.7);
  EXPECT_EQ(m.at("Hotels/Motels"), -0.7);
  EXPECT_EQ(m.at("General Retail Stores"), -0.4);
  EXPECT_EQ(m.at("Grocery Stores/Supermarkets"), 0.3);
  EXPECT_EQ(m.at("Drug Stores/Pharmacies"), 0.4);
  EXPECT_EQ(m.at("Hospitals"), 0.5);
  EXPECT_EQ(m.at("Computer Network/Information Services"), 0.2);
  EXPECT_EQ(m.at("Utilities: Electric, Gas, Water"), 0.0);
  for (const auto& c : cats) EXPECT_EQ(c.response_lag, 1);
  EXPECT_NO_THROW(ValidateProfiles(cats));
}

TEST(ProfilesTest, RejectsBadProfiles) {
  auto cats = DefaultCategories();
  cats[0].response_lag = 4;
  EXPECT_THROW(ValidateProfiles(cats), ParameterError);
  cats = DefaultCategories();
  cats[1].online_share = 1.5;
  EXPECT_THROW(ValidateProfiles(cats), ParameterError);
  cats = DefaultCategories();
  cats[2].name = cats[3].name;
  EXPECT_THROW(ValidateProfiles(cats), ParameterError);
}

TEST(GenerateTest, GridShapeAndInvariants) {
  const auto table = Generate(Small(150), FixtureEpi());
  ASSERT_EQ(table.rows.size(), 150u * 209u);
  std::set<Date> dates;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    dates.insert(r.date);
    EXPECT_GE(r.nb_transactions, 0);
    EXPECT_GE(r.spendamt, 0.0);
    EXPECT_EQ(r.id, r.merchant_id);
    if (i > 0) {
      const auto& p = table.rows[i - 1];
      EXPECT_TRUE(std::pair(p.merchant_id, p.date) < std::pair(r.merchant_id, r.date));
      if (p.merchant_id == r.merchant_id) {
        // Merchant attributes are fixed over time.
        EXPECT_EQ(p.postal_code, r.postal_code);
        EXPECT_EQ(p.category, r.category);
        EXPECT_EQ(p.type, r.type);
      }
    }
  }
  EXPECT_EQ(dates.size(), 209u);
  EXPECT_EQ(*dates.begin(), kGridStart);
  EXPECT_EQ(*dates.rbegin(), kGridEnd);
}

TEST(GenerateTest, SameSeedSameTableDifferentSeedDifferentTable) {
  const auto a = Generate(Small(40, 9), FixtureEpi());
  const auto b = Generate(Small(40, 9), FixtureEpi());
  const auto c = Generate(Small(40, 10), FixtureEpi());
  EXPECT_EQ(a, b);
  EXPECT_EQ(FormatTransactionsCsv(a), FormatTransactionsCsv(b));
  EXPECT_FALSE(a == c);
}

TEST(GenerateTest, MerchantStreamsAreIndependentOfMerchantCount) {
  const auto a = Generate(Small(10), FixtureEpi());
  const auto b = Generate(Small(20), FixtureEpi());
  ASSERT_LT(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) ASSERT_EQ(a.rows[i], b.rows[i]);
}

TEST(GenerateTest, NoiseFreeCountsFollowTheFactor) {
  GenerationConfig config = Small(300);
  config.noise_sigma = 0;
  const auto table = Generate(config, FixtureEpi());
  const auto& cats = config.categories;
  for (const auto& r : table.rows) {
    const auto& p = cats[r.category];
    ASSERT_EQ(table.categories[r.category], p.name);
    const auto& s = FixtureEpi().at(std::string(CountryOf(CityOfPostal(r.postal_code))));
    const std::size_t idx = *s.IndexOf(r.date);
    const double d_hat =
        idx >= static_cast<std::size_t>(p.response_lag)
            ? s.deaths_normalized[idx - static_cast<std::size_t>(p.response_lag)]
            : 0.0;
    const double expected = p.base_volume * std::max(0.0, 1 + p.covid_multiplier * d_hat);
    ASSERT_EQ(r.nb_transactions, std::llround(expected)) << p.name << " " << r.date.ToString();
    if (p.covid_multiplier == 0) {
      ASSERT_EQ(r.nb_transactions, std::llround(p.base_volume));
    }
    if (p.covid_multiplier < 0 && d_hat == 1.0) {
      ASSERT_LT(r.nb_transactions, p.base_volume);
    }
  }
}

TEST(GenerateTest, CityShareConcentration) {
  const auto table = Generate(Small(10000, 77), FixtureEpi());
  std::map<City, int> per_city;
  std::int32_t last = -1;
  for (const auto& r : table.rows) {
    if (r.merchant_id == last) continue;
    last = r.merchant_id;
    ++per_city[CityOfPostal(r.postal_code)];
  }
  const auto shares = CityShares(DefaultCities());
  for (std::size_t i = 0; i < 4; ++i) {
    const double got = 100.0 * per_city[DefaultCities()[i].city] / 10000.0;
    EXPECT_NEAR(got, shares[i], 1.5);
  }
}

TEST(GenerateTest, MissingSeriesOrWeekIsGenerationError) {
  epi::WeeklyByCountry epi = FixtureEpi();
  epi.erase("Chile");
  EXPECT_THROW(Generate(Small(5), epi), GenerationError);

  epi = FixtureEpi();
  auto& s = epi.at("Brazil");
  s.week_end_dates.erase(s.week_end_dates.begin() + 100);
  s.new_deaths.erase(s.new_deaths.begin() + 100);
  s.new_cases.erase(s.new_cases.begin() + 100);
  s.deaths_normalized.erase(s.deaths_normalized.begin() + 100);
  try {
    Generate(Small(50), epi);
    FAIL();
  } catch (const GenerationError& e) {
    EXPECT_NE(std::string(e.what()).find((kGridStart + 700).ToString()),
              std::string::npos)
        << e.what();
  }
}

TEST(GenerateTest, RejectsBadConfig) {
  GenerationConfig c = Small(0);
  EXPECT_THROW(Generate(c, FixtureEpi()), ParameterError);
  c = Small(5);
  c.noise_sigma = -1;
  EXPECT_THROW(Generate(c, FixtureEpi()), ParameterError);
}

TransactionTable ConstantTable(std::size_t rows, std::int64_t count) {
  TransactionTable t;
  const auto cat = t.InternCategory("Restaurants");
  for (std::size_t i = 0; i < rows; ++i) {
    TransactionRecord r;
    r.id = r.merchant_id = static_cast<std::int32_t>(i + 1);
    r.date = kGridStart;
    r.category = cat;
    r.postal_code = "110111";
    r.type = TransactionType::kOffline;
    r.spendamt = 100.0;
    r.nb_transactions = count;
    t.rows.push_back(r);
  }
  return t;
}

TEST(PrivatizeBaselineTest, ZeroScaleIsIdentity) {
  const auto table = Generate(Small(20), FixtureEpi());
  Rng rng(1);
  EXPECT_EQ(PrivatizeBaseline(table, BaselinePrivacy{}, rng), table);
}

TEST(PrivatizeBaselineTest, OutputsStayNonNegative) {
  const auto table = ConstantTable(2000, 1);
  BaselinePrivacy params;
  params.fallback = {50, 500};
  Rng rng(2);
  for (const auto& r : PrivatizeBaseline(table, params, rng).rows) {
    EXPECT_GE(r.nb_transactions, 0);
    EXPECT_GE(r.spendamt, 0.0);
  }
}

TEST(PrivatizeBaselineTest, NoiseIsCenteredOnTheCount) {
  const auto table = ConstantTable(100000, 50);
  BaselinePrivacy params;
  params.fallback = {10, 0};
  Rng rng(3);
  const auto noisy = PrivatizeBaseline(table, params, rng);
  double sum = 0;
  for (const auto& r : noisy.rows) sum += static_cast<double>(r.nb_transactions);
  // Standard error 10 / sqrt(1e5) ~ 0.032.
  EXPECT_NEAR(sum / 100000.0, 50.0, 0.2);
}

TEST(PrivatizeBaselineTest, DefaultTemplateAndNegativeScale) {
  const auto params = DefaultBaselinePrivacy(DefaultCategories());
  const auto& air = params.For("Airlines");
  EXPECT_DOUBLE_EQ(air.count_scale, 3.0 * 1 * 40 / 1.0);
  EXPECT_DOUBLE_EQ(air.spend_scale, 320.0);
  BaselinePrivacy bad;
  bad.fallback.count_scale = -1;
  Rng rng(0);
  EXPECT_THROW(PrivatizeBaseline(ConstantTable(1, 1), bad, rng), ParameterError);
}

}  // namespace
}  // namespace dpepi::datagen
