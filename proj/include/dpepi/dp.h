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

#ifndef DPEPI_DP_H_
#define DPEPI_DP_H_

#include <string>
#include <string_view>
#include <vector>

#include "dpepi/random.h"

namespace dpepi::dp {

// Per-merchant sensitivity of a single-step release.
inline constexpr double kDefaultSensitivity = 3.0;
inline constexpr double kDefaultDelta = 1e-5;

enum class NoiseMode {
  // sigma = sensitivity * T * U / epsilon
  kPaperLinear,
  // sigma = (sensitivity * T * U) * sqrt(2 ln(1.25 / delta)) / epsilon
  kAnalyticGaussian,
};

std::string_view NoiseModeName(NoiseMode mode);
// Accepts "paper-linear" and "analytic-gaussian".
NoiseMode ParseNoiseMode(std::string_view name);

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = kDefaultDelta;  // read in analytic mode only
  double sensitivity = kDefaultSensitivity;
  int time_steps = 1;
  double upper_bound = 1.0;
  NoiseMode mode = NoiseMode::kPaperLinear;
};

// (sensitivity * time_steps * upper_bound) / epsilon. All arguments must be
// positive; throws ParameterError otherwise.
double PaperScale(double sensitivity, double time_steps, double upper_bound,
                  double epsilon);

// Classical Gaussian-mechanism calibration
// sensitivity * sqrt(2 ln(1.25 / delta)) / epsilon, for 0 < delta < 1.
double AnalyticGaussianScale(double sensitivity, double epsilon, double delta);

// Dispatches on params.mode. In analytic mode the L2 sensitivity is taken to
// be sensitivity * time_steps * upper_bound, matching the linear formula.
double NoiseScale(const PrivacyParams& params);

// value + N(0, sigma^2). sigma == 0 returns value without drawing.
double AddGaussianNoise(double value, double sigma, Rng& rng);

// Released counts are rounded and clamped at zero.
long long PostProcessCount(double noisy);

// Record of a noisy release, written to audit sidecars.
struct ReleaseMetadata {
  NoiseMode mode = NoiseMode::kPaperLinear;
  double epsilon = 0;
  double delta = 0;
  double sensitivity = kDefaultSensitivity;
  int time_steps = 1;
  double upper_bound = 0;
  double sigma = 0;
};

ReleaseMetadata MetadataFor(const PrivacyParams& params);

// Sequential-composition epsilon accounting. Charges are append-only and the
// running total never exceeds the budget. Not thread-safe: one writer.
class BudgetLedger {
 public:
  struct Charge {
    std::string label;
    double epsilon;
    double cumulative;
  };

  explicit BudgetLedger(double total_epsilon);

  // Appends the charge iff it fits. Throws ParameterError for epsilon <= 0
  // and BudgetExceededError (carrying the remaining budget) on overdraft; the
  // ledger is unchanged in both cases.
  void Charge(std::string label, double epsilon);

  // Throws BudgetExceededError unless `epsilon` could be charged now.
  void Require(std::string_view label, double epsilon) const;

  double total() const { return total_; }
  double spent() const { return spent_; }
  double remaining() const { return total_ - spent_; }
  const std::vector<struct Charge>& charges() const { return charges_; }

 private:
  bool Fits(double epsilon) const;

  double total_;
  double spent_ = 0;
  std::vector<struct Charge> charges_;
};

// Audit sidecar text: '#'-prefixed release metadata followed by
// "label,epsilon,cumulative" rows, one per charge.
std::string FormatAudit(const BudgetLedger& ledger,
                        const std::vector<ReleaseMetadata>& releases);

}  // namespace dpepi::dp

#endif  // DPEPI_DP_H_
