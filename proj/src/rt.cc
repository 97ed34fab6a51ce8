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

#include "dpepi/rt.h"

#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

namespace dpepi::rt {
namespace {

constexpr double kGradientTolerance = 1e-8;
constexpr int kMaxNewtonIterations = 100;

// Usable steps (Lambda > 0) and the count normalizer sum(I) over them.
struct Usable {
  std::vector<Eigen::Index> rows;
  double total_incidence = 0;
};

Usable UsableSteps(std::span<const double> incidence,
                   std::span<const double> infectiousness) {
  Usable u;
  for (std::size_t t = 0; t < incidence.size(); ++t) {
    if (infectiousness[t] > 0) {
      u.rows.push_back(static_cast<Eigen::Index>(t));
      u.total_incidence += incidence[t];
    }
  }
  return u;
}

double LogLik(const Eigen::VectorXd& beta, std::span<const double> incidence,
              std::span<const double> lambda, const Eigen::MatrixXd& x,
              const Usable& u) {
  double ll = 0;
  for (Eigen::Index t : u.rows) {
    const double eta = x.row(t).dot(beta);
    const double mu = std::exp(eta) * lambda[t];
    if (incidence[t] > 0) ll += incidence[t] * (eta + std::log(lambda[t]));
    ll -= mu;
  }
  return ll;
}

}  // namespace

SerialInterval DiscretizeSerialInterval(double mean, double sd, int max_len,
                                        TimeUnit unit) {
  if (!(mean > 0) || !(sd > 0) || max_len < 1) {
    throw ParameterError("serial interval needs mean > 0, sd > 0, S >= 1");
  }
  const double unit_days = unit == TimeUnit::kDay ? 1.0 : 7.0;
  const double shape = (mean / sd) * (mean / sd);
  const double scale = sd * sd / mean / unit_days;
  auto cdf = [&](double x) {
    return x <= 0 ? 0.0 : boost::math::gamma_p(shape, x / scale);
  };
  SerialInterval si;
  si.mean = mean;
  si.sd = sd;
  si.unit = unit;
  si.weights.resize(static_cast<std::size_t>(max_len));
  for (int s = 1; s <= max_len; ++s) {
    const double lo = s == 1 ? 0.0 : s - 0.5;
    si.weights[s - 1] = cdf(s + 0.5) - cdf(lo);
  }
  const double total =
      std::accumulate(si.weights.begin(), si.weights.end(), 0.0);
  if (!(total > 0)) {
    throw ParameterError("serial interval has no mass within max_len");
  }
  for (double& w : si.weights) w /= total;
  return si;
}

std::vector<double> Infectiousness(std::span<const double> incidence,
                                   std::span<const double> weights) {
  std::vector<double> lambda(incidence.size(), 0.0);
  for (std::size_t t = 0; t < incidence.size(); ++t) {
    const std::size_t smax = std::min(weights.size(), t);
    double acc = 0;
    for (std::size_t s = 1; s <= smax; ++s) acc += weights[s - 1] * incidence[t - s];
    lambda[t] = acc;
  }
  return lambda;
}

RtEstimate EstimateRt(std::span<const double> incidence,
                      std::span<const double> weights, int window,
                      double prior_shape, double prior_rate) {
  if (window < 1) throw ParameterError("estimation window must be >= 1");
  if (!(prior_shape > 0) || !(prior_rate > 0)) {
    throw ParameterError("gamma prior needs shape > 0 and rate > 0");
  }
  const auto lambda = Infectiousness(incidence, weights);
  const std::size_t n = incidence.size();
  RtEstimate est;
  est.window = window;
  est.prior_shape = prior_shape;
  est.prior_rate = prior_rate;
  est.mean.resize(n);
  est.lower.resize(n);
  est.upper.resize(n);
  est.prior_only.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t first = t + 1 >= std::size_t(window) ? t + 1 - window : 0;
    double sum_i = 0, sum_l = 0;
    for (std::size_t u = first; u <= t; ++u) {
      sum_i += incidence[u];
      sum_l += lambda[u];
    }
    const bool prior_only = !(sum_l > 0);
    const double shape = prior_only ? prior_shape : prior_shape + sum_i;
    const double rate = prior_only ? prior_rate : prior_rate + sum_l;
    boost::math::gamma_distribution<double> posterior(shape, 1.0 / rate);
    est.prior_only[t] = prior_only;
    est.mean[t] = shape / rate;
    est.lower[t] = boost::math::quantile(posterior, 0.025);
    est.upper[t] = boost::math::quantile(posterior, 0.975);
  }
  return est;
}

std::vector<double> SimulateIncidence(std::span<const double> rt_path,
                                      std::span<const double> weights,
                                      std::span<const double> initial,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> incidence(rt_path.size(), 0.0);
  for (std::size_t t = 0; t < rt_path.size(); ++t) {
    if (t < initial.size()) {
      incidence[t] = initial[t];
      continue;
    }
    if (!(rt_path[t] >= 0)) {
      throw ParameterError(fmt::format("negative R at step {}", t));
    }
    double lambda = 0;
    for (std::size_t s = 1; s <= std::min(weights.size(), t); ++s) {
      lambda += weights[s - 1] * incidence[t - s];
    }
    const double mean = rt_path[t] * lambda;
    if (mean > 0) {
      std::poisson_distribution<long long> draw(mean);
      incidence[t] = static_cast<double>(draw(rng));
    }
  }
  return incidence;
}

DesignMatrix BuildDesign(std::span<const std::vector<double>> covariates,
                         std::span<const std::string> labels,
                         std::size_t steps) {
  if (labels.size() != covariates.size()) {
    throw ParameterError("one label per covariate is required");
  }
  DesignMatrix d;
  d.x.resize(static_cast<Eigen::Index>(steps),
             static_cast<Eigen::Index>(covariates.size() + 1));
  d.x.col(0).setOnes();
  d.labels.push_back("intercept");
  for (std::size_t c = 0; c < covariates.size(); ++c) {
    const auto& col = covariates[c];
    if (col.size() != steps) {
      throw ParameterError(fmt::format("covariate '{}' has {} values, expected {}",
                                       labels[c], col.size(), steps));
    }
    const double mean =
        std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(steps);
    double ss = 0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = steps > 1 ? std::sqrt(ss / double(steps - 1)) : 0.0;
    if (!(sd > 0)) {
      throw ParameterError("covariate '" + labels[c] + "' has zero variance");
    }
    for (std::size_t t = 0; t < steps; ++t) {
      d.x(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c + 1)) =
          (col[t] - mean) / sd;
    }
    d.labels.push_back(labels[c]);
  }
  return d;
}

double PoissonLogLikelihood(std::span<const double> beta,
                            std::span<const double> incidence,
                            std::span<const double> infectiousness,
                            const Eigen::MatrixXd& design) {
  const Usable u = UsableSteps(incidence, infectiousness);
  Eigen::Map<const Eigen::VectorXd> b(beta.data(),
                                      static_cast<Eigen::Index>(beta.size()));
  return LogLik(b, incidence, infectiousness, design, u);
}

CovariateFit FitCovariates(std::span<const double> incidence,
                           std::span<const double> infectiousness,
                           const DesignMatrix& design) {
  const Eigen::MatrixXd& x = design.x;
  if (infectiousness.size() != incidence.size() ||
      static_cast<std::size_t>(x.rows()) != incidence.size()) {
    throw DimensionError("incidence, infectiousness and design rows disagree");
  }
  if (x.cols() < 1 || design.labels.size() != std::size_t(x.cols())) {
    throw DimensionError("design matrix needs an intercept and one label per column");
  }
  const Usable u = UsableSteps(incidence, infectiousness);
  if (u.rows.empty() || !(u.total_incidence > 0)) {
    throw DegenerateInputError("no steps with positive incidence and infectiousness");
  }
  for (Eigen::Index t : u.rows) {
    if (x(t, 0) != 1.0) throw ParameterError("first design column must be the intercept");
  }
  for (Eigen::Index c = 1; c < x.cols(); ++c) {
    double lo = x(u.rows.front(), c), hi = lo;
    for (Eigen::Index t : u.rows) {
      lo = std::min(lo, x(t, c));
      hi = std::max(hi, x(t, c));
    }
    if (!(hi > lo)) {
      throw ParameterError("covariate '" + design.labels[c] +
                           "' has zero variance over usable steps");
    }
  }

  const double norm = u.total_incidence;
  auto objective = [&](const Eigen::VectorXd& b) {
    return LogLik(b, incidence, infectiousness, x, u) / norm;
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(x.cols());
  double sum_l = 0;
  for (Eigen::Index t : u.rows) sum_l += infectiousness[t];
  beta[0] = std::log(u.total_incidence / sum_l);

  CovariateFit fit;
  double f = objective(beta);
  for (int it = 0;; ++it) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.cols());
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    for (Eigen::Index t : u.rows) {
      const auto row = x.row(t).transpose();
      const double mu = std::exp(row.dot(beta)) * infectiousness[t];
      grad += (incidence[t] - mu) * row;
      info += mu * row * row.transpose();
    }
    grad /= norm;
    info /= norm;
    fit.gradient_norm = grad.norm();
    fit.iterations = it;
    if (fit.gradient_norm < kGradientTolerance) break;
    if (it >= kMaxNewtonIterations) {
      throw NonConvergenceError(
          fmt::format("Newton iterations did not converge (gradient norm {})",
                      fit.gradient_norm),
          std::vector<double>(beta.data(), beta.data() + beta.size()));
    }
    const Eigen::VectorXd direction = info.ldlt().solve(grad);
    double t = 1.0;
    Eigen::VectorXd next = beta + direction;
    double f_next = objective(next);
    while (!(f_next >= f) && t > 1e-12) {
      t /= 2;
      next = beta + t * direction;
      f_next = objective(next);
    }
    if (!std::isfinite(f_next)) {
      throw NonConvergenceError(
          "log-likelihood became non-finite",
          std::vector<double>(beta.data(), beta.data() + beta.size()));
    }
    beta = next;
    f = f_next;
  }

  fit.beta.assign(beta.data(), beta.data() + beta.size());
  fit.labels = design.labels;
  fit.log_likelihood = LogLik(beta, incidence, infectiousness, x, u);
  fit.fitted_rt.resize(incidence.size());
  for (std::size_t t = 0; t < incidence.size(); ++t) {
    fit.fitted_rt[t] = std::exp(x.row(static_cast<Eigen::Index>(t)).dot(beta));
  }
  return fit;
}

}  // namespace dpepi::rt
