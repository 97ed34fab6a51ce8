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

#include "dpepi/dp.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dpepi/error.h"

namespace dpepi::dp {
namespace {

TEST(PaperScaleTest, Arithmetic) {
  EXPECT_DOUBLE_EQ(PaperScale(3, 1, 1, 3), 1.0);
  EXPECT_EQ(PaperScale(3, 4, 5, 2), 30.0);
  EXPECT_LT(PaperScale(3, 1, 1, 1e12), 1e-11);
}

TEST(PaperScaleTest, RejectsNonPositive) {
  EXPECT_THROW(PaperScale(0, 1, 1, 1), ParameterError);
  EXPECT_THROW(PaperScale(3, 0, 1, 1), ParameterError);
  EXPECT_THROW(PaperScale(3, 1, -1, 1), ParameterError);
  EXPECT_THROW(PaperScale(3, 1, 1, 0), ParameterError);
}

TEST(PaperScaleTest, MonotoneInEveryArgument) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.1, 100);
  for (int i = 0; i < 1000; ++i) {
    const double d = u(rng), t = u(rng), ub = u(rng), e = u(rng), k = 1 + u(rng);
    const double base = PaperScale(d, t, ub, e);
    EXPECT_GT(PaperScale(d * k, t, ub, e), base);
    EXPECT_GT(PaperScale(d, t * k, ub, e), base);
    EXPECT_GT(PaperScale(d, t, ub * k, e), base);
    EXPECT_LT(PaperScale(d, t, ub, e * k), base);
  }
}

TEST(AnalyticGaussianScaleTest, ClosedForm) {
  // sqrt(2 ln(1.25 / 0.05)) = sqrt(2 ln 25).
  const double oracle = std::sqrt(2.0 * std::log(25.0));
  EXPECT_NEAR(AnalyticGaussianScale(1, 1, 0.05), oracle, 1e-12);
  EXPECT_NEAR(AnalyticGaussianScale(1, 1, 0.05), 2.5373, 5e-5);
  EXPECT_DOUBLE_EQ(AnalyticGaussianScale(2, 1, 0.05), 2 * AnalyticGaussianScale(1, 1, 0.05));
}

TEST(AnalyticGaussianScaleTest, DeltaMustBeInUnitInterval) {
  EXPECT_THROW(AnalyticGaussianScale(1, 1, 1.0), ParameterError);
  EXPECT_THROW(AnalyticGaussianScale(1, 1, 0.0), ParameterError);
  EXPECT_THROW(AnalyticGaussianScale(1, 0, 0.1), ParameterError);
}

TEST(NoiseScaleTest, DispatchesOnMode) {
  PrivacyParams p{.epsilon = 2, .delta = 0.05, .sensitivity = 3, .time_steps = 4,
                  .upper_bound = 5};
  EXPECT_EQ(NoiseScale(p), 30.0);
  p.mode = NoiseMode::kAnalyticGaussian;
  EXPECT_NEAR(NoiseScale(p), 60.0 * std::sqrt(2.0 * std::log(25.0)) / 2.0, 1e-9);
  const auto meta = MetadataFor(p);
  EXPECT_EQ(meta.mode, NoiseMode::kAnalyticGaussian);
  EXPECT_EQ(meta.time_steps, 4);
  EXPECT_DOUBLE_EQ(meta.sigma, NoiseScale(p));
}

TEST(NoiseModeTest, NamesRoundTrip) {
  for (auto m : {NoiseMode::kPaperLinear, NoiseMode::kAnalyticGaussian}) {
    EXPECT_EQ(ParseNoiseMode(NoiseModeName(m)), m);
  }
  EXPECT_THROW(ParseNoiseMode("laplace"), ParameterError);
}

TEST(AddGaussianNoiseTest, ZeroSigmaAndDeterminism) {
  Rng rng(1);
  EXPECT_EQ(AddGaussianNoise(41.5, 0, rng), 41.5);
  Rng a(99), b(99);
  EXPECT_EQ(AddGaussianNoise(0, 3, a), AddGaussianNoise(0, 3, b));
  EXPECT_THROW(AddGaussianNoise(0, -1, rng), ParameterError);
}

TEST(AddGaussianNoiseTest, SampleMoments) {
  Rng rng(2024);
  constexpr int kN = 100000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < kN; ++i) {
    const double x = AddGaussianNoise(0, 4, rng);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / kN;
  const double sd = std::sqrt((sum_sq - kN * mean * mean) / (kN - 1));
  EXPECT_NEAR(sd, 4.0, 0.2);
  EXPECT_NEAR(mean, 0.0, 0.04);
}

TEST(PostProcessCountTest, RoundsAndClamps) {
  EXPECT_EQ(PostProcessCount(2.5), 3);
  EXPECT_EQ(PostProcessCount(2.49), 2);
  EXPECT_EQ(PostProcessCount(-0.4), 0);
  EXPECT_EQ(PostProcessCount(-7), 0);
}

TEST(BudgetLedgerTest, ChargesUntilExhausted) {
  BudgetLedger ledger(1.0);
  ledger.Charge("a", 0.4);
  ledger.Charge("b", 0.4);
  EXPECT_NEAR(ledger.remaining(), 0.2, 1e-12);
  try {
    ledger.Charge("c", 0.3);
    FAIL();
  } catch (const BudgetExceededError& e) {
    EXPECT_NEAR(e.remaining(), 0.2, 1e-12);
    EXPECT_DOUBLE_EQ(e.requested(), 0.3);
  }
  EXPECT_EQ(ledger.charges().size(), 2u);
  EXPECT_DOUBLE_EQ(ledger.charges()[1].cumulative, 0.8);
}

TEST(BudgetLedgerTest, PerStepSplitExhaustsExactly) {
  BudgetLedger ledger(2.0);
  for (int t = 0; t < 4; ++t) ledger.Charge("step", 2.0 / 4);
  EXPECT_EQ(ledger.spent(), 2.0);
  EXPECT_THROW(ledger.Charge("fifth", 1e-9), BudgetExceededError);
}

TEST(BudgetLedgerTest, RoundingSlackForManySteps) {
  BudgetLedger ledger(1.0);
  for (int t = 0; t < 52; ++t) ledger.Charge("w", 1.0 / 52);
  EXPECT_EQ(ledger.charges().size(), 52u);
  EXPECT_THROW(ledger.Charge("more", 1e-6), BudgetExceededError);
}

TEST(BudgetLedgerTest, RejectsNonPositiveCharges) {
  BudgetLedger ledger(1.0);
  EXPECT_THROW(ledger.Charge("zero", 0), ParameterError);
  EXPECT_THROW(ledger.Charge("neg", -1), ParameterError);
  EXPECT_THROW(ledger.Charge("nan", NAN), ParameterError);
  EXPECT_TRUE(ledger.charges().empty());
  EXPECT_THROW(BudgetLedger(0), ParameterError);
}

TEST(BudgetLedgerTest, RequireDoesNotCharge) {
  BudgetLedger ledger(1.0);
  EXPECT_NO_THROW(ledger.Require("x", 1.0));
  EXPECT_THROW(ledger.Require("x", 1.5), BudgetExceededError);
  EXPECT_EQ(ledger.spent(), 0.0);
}

// Random charge sequences never push the total past the budget.
TEST(BudgetLedgerTest, SequentialCompositionInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.001, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    BudgetLedger ledger(u(rng) * 4);
    for (int i = 0; i < 30; ++i) {
      try {
        ledger.Charge("x", u(rng));
      } catch (const BudgetExceededError&) {
      }
      double sum = 0;
      for (const auto& c : ledger.charges()) sum += c.epsilon;
      ASSERT_LE(sum, ledger.total() * (1 + 1e-12));
      ASSERT_DOUBLE_EQ(sum, ledger.spent());
    }
  }
}

TEST(FormatAuditTest, ListsChargesAndMetadata) {
  BudgetLedger ledger(1.0);
  ledger.Charge("hotspot:Bogota", 0.5);
  ledger.Charge("a,b", 0.25);
  PrivacyParams p{.epsilon = 0.5, .upper_bound = 10};
  const std::string audit = FormatAudit(ledger, {MetadataFor(p)});
  EXPECT_NE(audit.find("# total_epsilon=1\n"), std::string::npos);
  EXPECT_NE(audit.find("mode=paper-linear"), std::string::npos);
  EXPECT_NE(audit.find("sigma=60"), std::string::npos);
  EXPECT_NE(audit.find("label,epsilon,cumulative\nhotspot:Bogota,0.5,0.5\n\"a,b\",0.25,0.75\n"),
            std::string::npos);
}

}  // namespace
}  // namespace dpepi::dp
