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

#ifndef DPEPI_CONTACT_MATRIX_H_
#define DPEPI_CONTACT_MATRIX_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpepi/analytics.h"
#include "dpepi/dp.h"
#include "dpepi/geo.h"
#include "dpepi/random.h"
#include "dpepi/transactions.h"

namespace dpepi::contact {

// Default age groups: 0-17, 18-30, 31-45, 46-64, 65+.
inline constexpr int kDefaultAgeGroups = 5;

// Consumption distribution D is A x K (age groups x categories); column k
// splits category k's volume across age groups and sums to one.
// Throws ParameterError on a negative entry or a column off the simplex.
void ValidateConsumption(const Eigen::MatrixXd& consumption);

// Uniform 1/A in every column.
Eigen::MatrixXd UniformConsumption(int age_groups, int categories);

// Random column-stochastic matrix (normalized Exp(1) draws per column).
Eigen::MatrixXd RandomConsumption(int age_groups, int categories, Rng& rng);

// n = D c. Throws DimensionError on a shape mismatch and ParameterError for
// a negative count.
Eigen::VectorXd AgeCounts(const Eigen::MatrixXd& consumption,
                          const Eigen::VectorXd& category_counts);

// M[i][j] = n_i n_j / sum(n). Throws DegenerateInputError when sum(n) == 0.
Eigen::MatrixXd ProportionateMixing(const Eigen::VectorXd& age_counts);

// (diag(m) M + (diag(m) M)^T) / 2. Throws ParameterError for m_a <= 0 and
// DimensionError on a shape mismatch.
Eigen::MatrixXd Symmetrize(const Eigen::MatrixXd& mixing,
                           const Eigen::VectorXd& mixing_factors);

// Euclidean projection onto the probability simplex (sort-and-threshold).
Eigen::VectorXd SimplexProject(const Eigen::VectorXd& v);

enum class CityWeighting { kUnweighted, kPopulation };

// Pipeline shared by estimation and training: per city age counts and
// proportionate mixing, (weighted) mean over cities with positive volume,
// symmetrization, then normalization to unit sum. `weights` is ignored when
// empty. Throws DegenerateInputError if no city has positive volume.
Eigen::MatrixXd ContactFromCounts(
    const Eigen::MatrixXd& consumption,
    std::span<const Eigen::VectorXd> city_counts,
    const Eigen::VectorXd& mixing_factors,
    std::span<const double> weights = {});

struct ContactEstimate {
  Eigen::MatrixXd contact;  // symmetric, non-negative, sums to one
  std::vector<Eigen::VectorXd> category_counts;  // released per city
  dp::ReleaseMetadata privacy;
};

struct EstimateOptions {
  CityWeighting weighting = CityWeighting::kUnweighted;
  // Used only for population weighting, aligned with `cities`.
  std::vector<double> populations;
  analytics::AnalysisSettings settings;
};

// DP national contact matrix. For each city, the category volume vector
// (ordered as `categories`, i.e. the columns of D) is noised at
// NoiseScale(epsilon, T = distinct weeks in the table), rounded and clamped,
// and the ledger is charged `epsilon` once per city.
ContactEstimate EstimateContactMatrix(const TransactionTable& table,
                                      const Eigen::MatrixXd& consumption,
                                      const Eigen::VectorXd& mixing_factors,
                                      std::span<const City> cities,
                                      std::span<const std::string> categories,
                                      double epsilon, Rng& rng,
                                      dp::BudgetLedger& ledger,
                                      const EstimateOptions& options = {});

struct TrainingHyperparams {
  double step = 50.0;          // initial step of each iteration
  double fd_epsilon = 1e-6;    // central-difference half width
  int max_iterations = 5000;
  double loss_tolerance = 1e-10;
  double min_step = 1e-14;     // below this the iteration has stalled
  std::uint64_t seed = 7;      // random initial D when none is given
};

struct TrainingLogEntry {
  int iteration;
  double loss;
  double step;
};

struct TrainingResult {
  Eigen::MatrixXd consumption;
  double final_loss = 0;
  int iterations = 0;
  bool converged = false;  // loss reached the tolerance
  std::vector<TrainingLogEntry> log;  // accepted iterations, iteration 0 = init
};

// ||ContactFromCounts(D) - target||_F^2.
double ContactLoss(const Eigen::MatrixXd& consumption,
                   std::span<const Eigen::VectorXd> city_counts,
                   const Eigen::VectorXd& mixing_factors,
                   const Eigen::MatrixXd& target);

// Central finite-difference gradient of ContactLoss w.r.t. every entry of D.
Eigen::MatrixXd LossGradient(const Eigen::MatrixXd& consumption,
                             std::span<const Eigen::VectorXd> city_counts,
                             const Eigen::VectorXd& mixing_factors,
                             const Eigen::MatrixXd& target, double h);

// Projected gradient descent on ContactLoss. Every step is followed by a
// per-column simplex projection; a step that would raise the loss is halved
// until it does not. Stops at loss_tolerance, max_iterations or a stalled
// step. Throws DimensionError for a target of the wrong shape and
// TrainingError on a non-finite loss.
TrainingResult TrainConsumption(std::span<const Eigen::VectorXd> city_counts,
                                const Eigen::MatrixXd& target,
                                const Eigen::MatrixXd& initial,
                                const Eigen::VectorXd& mixing_factors,
                                const TrainingHyperparams& hyper = {});

std::string FormatTrainingLog(const TrainingResult& result);

// Headerless CSV <-> matrix.
Eigen::MatrixXd ParseMatrixCsv(std::string_view text);
std::string FormatMatrixCsv(const Eigen::MatrixXd& m);

}  // namespace dpepi::contact

#endif  // DPEPI_CONTACT_MATRIX_H_
