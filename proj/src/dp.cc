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
#include <iterator>

#include <fmt/format.h>

#include "dpepi/csv.h"
#include "dpepi/error.h"

namespace dpepi::dp {
namespace {

// Relative slack on budget comparisons so that splitting a budget into T
// equal floating-point parts (e.g. 1/3) still exhausts it exactly.
constexpr double kBudgetSlack = 1e-12;

void RequirePositive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be finite and positive, got " +
                         std::to_string(v));
  }
}

}  // namespace

std::string_view NoiseModeName(NoiseMode mode) {
  return mode == NoiseMode::kPaperLinear ? "paper-linear" : "analytic-gaussian";
}

NoiseMode ParseNoiseMode(std::string_view name) {
  if (name == "paper-linear") return NoiseMode::kPaperLinear;
  if (name == "analytic-gaussian") return NoiseMode::kAnalyticGaussian;
  throw ParameterError("unknown noise mode '" + std::string(name) +
                       "' (expected paper-linear or analytic-gaussian)");
}

double PaperScale(double sensitivity, double time_steps, double upper_bound,
                  double epsilon) {
  RequirePositive(sensitivity, "sensitivity");
  RequirePositive(time_steps, "time_steps");
  RequirePositive(upper_bound, "upper_bound");
  RequirePositive(epsilon, "epsilon");
  return sensitivity * time_steps * upper_bound / epsilon;
}

double AnalyticGaussianScale(double sensitivity, double epsilon, double delta) {
  RequirePositive(sensitivity, "sensitivity");
  RequirePositive(epsilon, "epsilon");
  if (!(delta > 0 && delta < 1)) {
    throw ParameterError("delta must lie in (0, 1), got " + std::to_string(delta));
  }
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

double NoiseScale(const PrivacyParams& p) {
  if (p.mode == NoiseMode::kPaperLinear) {
    return PaperScale(p.sensitivity, p.time_steps, p.upper_bound, p.epsilon);
  }
  RequirePositive(p.time_steps, "time_steps");
  RequirePositive(p.upper_bound, "upper_bound");
  return AnalyticGaussianScale(p.sensitivity * p.time_steps * p.upper_bound,
                               p.epsilon, p.delta);
}

double AddGaussianNoise(double value, double sigma, Rng& rng) {
  if (!(sigma >= 0) || !std::isfinite(sigma)) {
    throw ParameterError("noise scale must be finite and >= 0, got " +
                         std::to_string(sigma));
  }
  if (sigma == 0) return value;
  std::normal_distribution<double> normal(0.0, sigma);
  return value + normal(rng);
}

long long PostProcessCount(double noisy) {
  if (!(noisy > 0)) return 0;
  return std::llround(noisy);
}

ReleaseMetadata MetadataFor(const PrivacyParams& p) {
  ReleaseMetadata m;
  m.mode = p.mode;
  m.epsilon = p.epsilon;
  m.delta = p.mode == NoiseMode::kAnalyticGaussian ? p.delta : 0.0;
  m.sensitivity = p.sensitivity;
  m.time_steps = p.time_steps;
  m.upper_bound = p.upper_bound;
  m.sigma = NoiseScale(p);
  return m;
}

BudgetLedger::BudgetLedger(double total_epsilon) : total_(total_epsilon) {
  RequirePositive(total_epsilon, "total epsilon");
}

bool BudgetLedger::Fits(double epsilon) const {
  return spent_ + epsilon <= total_ * (1.0 + kBudgetSlack);
}

void BudgetLedger::Require(std::string_view label, double epsilon) const {
  RequirePositive(epsilon, "charge epsilon");
  if (!Fits(epsilon)) {
    throw BudgetExceededError(std::string(label), epsilon, remaining());
  }
}

void BudgetLedger::Charge(std::string label, double epsilon) {
  Require(label, epsilon);
  spent_ += epsilon;
  charges_.push_back({std::move(label), epsilon, spent_});
}

std::string FormatAudit(const BudgetLedger& ledger,
                        const std::vector<ReleaseMetadata>& releases) {
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# total_epsilon={:.12g}\n# spent_epsilon={:.12g}\n", ledger.total(),
                 ledger.spent());
  for (const auto& r : releases) {
    fmt::format_to(it,
                   "# release mode={} epsilon={} delta={} sensitivity={} "
                   "time_steps={} upper_bound={} sigma={}\n",
                   NoiseModeName(r.mode), r.epsilon, r.delta, r.sensitivity,
                   r.time_steps, r.upper_bound, r.sigma);
  }
  out += "label,epsilon,cumulative\n";
  for (const auto& c : ledger.charges()) {
    csv::AppendField(out, c.label);
    fmt::format_to(it, ",{:.12g},{:.12g}\n", c.epsilon, c.cumulative);
  }
  return out;
}

}  // namespace dpepi::dp
