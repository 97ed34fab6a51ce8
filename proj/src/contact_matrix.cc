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

#include "dpepi/contact_matrix.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>

#include <fmt/format.h>

#include "dpepi/csv.h"
#include "dpepi/error.h"

namespace dpepi::contact {
namespace {

constexpr double kColumnSumTolerance = 1e-9;

Eigen::MatrixXd ProjectColumns(Eigen::MatrixXd d) {
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    d.col(k) = SimplexProject(d.col(k));
  }
  return d;
}

}  // namespace

void ValidateConsumption(const Eigen::MatrixXd& d) {
  if (d.rows() == 0 || d.cols() == 0) {
    throw DimensionError("consumption distribution is empty");
  }
  if ((d.array() < 0).any() || !d.allFinite()) {
    throw ParameterError("consumption distribution has a negative entry");
  }
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    if (std::abs(d.col(k).sum() - 1.0) > kColumnSumTolerance) {
      throw ParameterError(
          fmt::format("consumption column {} sums to {}", k, d.col(k).sum()));
    }
  }
}

Eigen::MatrixXd UniformConsumption(int age_groups, int categories) {
  return Eigen::MatrixXd::Constant(age_groups, categories, 1.0 / age_groups);
}

Eigen::MatrixXd RandomConsumption(int age_groups, int categories, Rng& rng) {
  std::exponential_distribution<double> draw(1.0);
  Eigen::MatrixXd d(age_groups, categories);
  for (int k = 0; k < categories; ++k) {
    for (int a = 0; a < age_groups; ++a) d(a, k) = draw(rng);
    d.col(k) /= d.col(k).sum();
  }
  return d;
}

Eigen::VectorXd AgeCounts(const Eigen::MatrixXd& consumption,
                          const Eigen::VectorXd& category_counts) {
  if (consumption.cols() != category_counts.size()) {
    throw DimensionError(fmt::format(
        "consumption has {} columns but {} category counts were given",
        consumption.cols(), category_counts.size()));
  }
  if ((category_counts.array() < 0).any()) {
    throw ParameterError("category counts must be non-negative");
  }
  return consumption * category_counts;
}

Eigen::MatrixXd ProportionateMixing(const Eigen::VectorXd& n) {
  const double total = n.sum();
  if (!(total > 0)) {
    throw DegenerateInputError("age-group counts sum to zero");
  }
  return n * n.transpose() / total;
}

Eigen::MatrixXd Symmetrize(const Eigen::MatrixXd& mixing,
                           const Eigen::VectorXd& m) {
  if (mixing.rows() != mixing.cols() || mixing.rows() != m.size()) {
    throw DimensionError("mixing matrix and mixing factors disagree in shape");
  }
  if (!(m.array() > 0).all()) {
    throw ParameterError("mixing factors must be positive");
  }
  const Eigen::MatrixXd scaled = m.asDiagonal() * mixing;
  Eigen::MatrixXd c = (scaled + scaled.transpose()) / 2.0;
  // a + b and b + a round identically, but make exact symmetry explicit.
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) c(i, j) = c(j, i);
  }
  return c;
}

Eigen::VectorXd SimplexProject(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0;
  double theta = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

Eigen::MatrixXd ContactFromCounts(const Eigen::MatrixXd& consumption,
                                  std::span<const Eigen::VectorXd> city_counts,
                                  const Eigen::VectorXd& mixing_factors,
                                  std::span<const double> weights) {
  if (!weights.empty() && weights.size() != city_counts.size()) {
    throw DimensionError("city weights and city counts disagree in length");
  }
  const Eigen::Index a = consumption.rows();
  Eigen::MatrixXd national = Eigen::MatrixXd::Zero(a, a);
  double weight_sum = 0;
  for (std::size_t i = 0; i < city_counts.size(); ++i) {
    const Eigen::VectorXd n = AgeCounts(consumption, city_counts[i]);
    if (!(n.sum() > 0)) continue;
    const double w = weights.empty() ? 1.0 : weights[i];
    national += w * ProportionateMixing(n);
    weight_sum += w;
  }
  if (!(weight_sum > 0)) {
    throw DegenerateInputError("no city has positive transaction volume");
  }
  national /= weight_sum;
  Eigen::MatrixXd c = Symmetrize(national, mixing_factors);
  return c / c.sum();
}

ContactEstimate EstimateContactMatrix(const TransactionTable& table,
                                      const Eigen::MatrixXd& consumption,
                                      const Eigen::VectorXd& mixing_factors,
                                      std::span<const City> cities,
                                      std::span<const std::string> categories,
                                      double epsilon, Rng& rng,
                                      dp::BudgetLedger& ledger,
                                      const EstimateOptions& options) {
  ValidateConsumption(consumption);
  if (static_cast<std::size_t>(consumption.cols()) != categories.size()) {
    throw DimensionError("consumption columns do not match category list");
  }
  if (options.weighting == CityWeighting::kPopulation &&
      options.populations.size() != cities.size()) {
    throw DimensionError("population weights must align with cities");
  }

  // Column of D for each table category (-1: not modelled).
  std::vector<int> column(table.categories.size(), -1);
  for (std::size_t c = 0; c < table.categories.size(); ++c) {
    for (std::size_t k = 0; k < categories.size(); ++k) {
      if (table.categories[c] == categories[k]) column[c] = static_cast<int>(k);
    }
  }
  std::set<Date> weeks;
  for (const auto& r : table.rows) weeks.insert(r.date);
  const int T = std::max<int>(1, static_cast<int>(weeks.size()));
  const auto params = options.settings.Params(epsilon, T);
  const double sigma = dp::NoiseScale(params);

  ledger.Require("contact", epsilon * static_cast<double>(cities.size()));

  const auto k = static_cast<Eigen::Index>(categories.size());
  std::vector<Eigen::VectorXd> exact(cities.size(), Eigen::VectorXd::Zero(k));
  for (const auto& r : table.rows) {
    const int col = column[r.category];
    if (col < 0) continue;
    const City city = CityOfPostal(r.postal_code);
    for (std::size_t i = 0; i < cities.size(); ++i) {
      if (cities[i] == city) {
        exact[i][col] += std::clamp(static_cast<double>(r.nb_transactions),
                                    0.0, options.settings.upper_bound);
      }
    }
  }

  ContactEstimate out;
  out.privacy = dp::MetadataFor(params);
  for (std::size_t i = 0; i < cities.size(); ++i) {
    ledger.Charge(fmt::format("contact:{}", CityName(cities[i])), epsilon);
    Eigen::VectorXd released(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      released[j] = static_cast<double>(
          dp::PostProcessCount(dp::AddGaussianNoise(exact[i][j], sigma, rng)));
    }
    out.category_counts.push_back(std::move(released));
  }
  std::span<const double> weights;
  if (options.weighting == CityWeighting::kPopulation) {
    weights = options.populations;
  }
  out.contact = ContactFromCounts(consumption, out.category_counts,
                                  mixing_factors, weights);
  return out;
}

double ContactLoss(const Eigen::MatrixXd& consumption,
                   std::span<const Eigen::VectorXd> city_counts,
                   const Eigen::VectorXd& mixing_factors,
                   const Eigen::MatrixXd& target) {
  return (ContactFromCounts(consumption, city_counts, mixing_factors) - target)
      .squaredNorm();
}

Eigen::MatrixXd LossGradient(const Eigen::MatrixXd& consumption,
                             std::span<const Eigen::VectorXd> city_counts,
                             const Eigen::VectorXd& mixing_factors,
                             const Eigen::MatrixXd& target, double h) {
  Eigen::MatrixXd grad(consumption.rows(), consumption.cols());
  Eigen::MatrixXd probe = consumption;
  for (Eigen::Index k = 0; k < consumption.cols(); ++k) {
    for (Eigen::Index a = 0; a < consumption.rows(); ++a) {
      const double saved = probe(a, k);
      probe(a, k) = saved + h;
      const double up = ContactLoss(probe, city_counts, mixing_factors, target);
      probe(a, k) = saved - h;
      const double down =
          ContactLoss(probe, city_counts, mixing_factors, target);
      probe(a, k) = saved;
      grad(a, k) = (up - down) / (2 * h);
    }
  }
  return grad;
}

TrainingResult TrainConsumption(std::span<const Eigen::VectorXd> city_counts,
                                const Eigen::MatrixXd& target,
                                const Eigen::MatrixXd& initial,
                                const Eigen::VectorXd& mixing_factors,
                                const TrainingHyperparams& hyper) {
  if (target.rows() != initial.rows() || target.cols() != initial.rows()) {
    throw DimensionError(fmt::format(
        "target contact matrix is {}x{}, expected {}x{}", target.rows(),
        target.cols(), initial.rows(), initial.rows()));
  }
  if (!(hyper.step > 0) || hyper.max_iterations < 1 || !(hyper.fd_epsilon > 0)) {
    throw ParameterError("invalid training hyperparameters");
  }

  TrainingResult result;
  result.consumption = ProjectColumns(initial);
  double loss =
      ContactLoss(result.consumption, city_counts, mixing_factors, target);
  if (!std::isfinite(loss)) throw TrainingError("initial loss is not finite");
  result.log.push_back({0, loss, 0.0});

  for (int it = 1; it <= hyper.max_iterations; ++it) {
    if (loss <= hyper.loss_tolerance) break;
    const Eigen::MatrixXd grad =
        LossGradient(result.consumption, city_counts, mixing_factors, target,
                     hyper.fd_epsilon);
    if (!grad.allFinite()) throw TrainingError("gradient is not finite");

    double step = hyper.step;
    bool accepted = false;
    while (step >= hyper.min_step) {
      Eigen::MatrixXd candidate =
          ProjectColumns(result.consumption - step * grad);
      const double trial =
          ContactLoss(candidate, city_counts, mixing_factors, target);
      if (std::isfinite(trial) && trial <= loss) {
        result.consumption = std::move(candidate);
        loss = trial;
        accepted = true;
        break;
      }
      step /= 2;
    }
    if (!accepted) break;
    result.iterations = it;
    result.log.push_back({it, loss, step});
  }
  result.final_loss = loss;
  result.converged = loss <= hyper.loss_tolerance;
  return result;
}

std::string FormatTrainingLog(const TrainingResult& result) {
  std::string out = "iteration,loss,step\n";
  for (const auto& e : result.log) {
    fmt::format_to(std::back_inserter(out), "{},{},{}\n", e.iteration, e.loss,
                   e.step);
  }
  return out;
}

Eigen::MatrixXd ParseMatrixCsv(std::string_view text) {
  const auto rows = csv::ParseMatrix(text);
  if (rows.empty()) return {};
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::string FormatMatrixCsv(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) rows[i].push_back(m(i, j));
  }
  return csv::FormatMatrix(rows);
}

}  // namespace dpepi::contact
