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

#ifndef DPEPI_RT_H_
#define DPEPI_RT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpepi/error.h"

namespace dpepi::rt {

enum class TimeUnit { kDay, kWeek };

// Discretized generation-interval kernel. weights[s - 1] is the mass at lag
// s = 1..S; lag 0 is excluded.
struct SerialInterval {
  std::vector<double> weights;
  double mean = 0;  // of the generating gamma, in days
  double sd = 0;
  TimeUnit unit = TimeUnit::kDay;
};

// Gamma(mean, sd) (in days) integrated over unit-width bins centred on
// s = 1..max_len in `unit`s (the first bin also absorbs [0, 0.5)), then
// renormalized to sum to one. Throws ParameterError for non-positive inputs.
SerialInterval DiscretizeSerialInterval(double mean, double sd, int max_len,
                                        TimeUnit unit = TimeUnit::kDay);

// Lambda_t = sum_{s=1..S} w_s I_{t-s}, with missing history treated as 0.
std::vector<double> Infectiousness(std::span<const double> incidence,
                                   std::span<const double> weights);

struct RtEstimate {
  std::vector<double> mean;
  std::vector<double> lower;  // 2.5% posterior quantile
  std::vector<double> upper;  // 97.5% posterior quantile
  std::vector<bool> prior_only;
  int window = 0;
  double prior_shape = 0;
  double prior_rate = 0;
};

// Conjugate renewal-equation posterior over a trailing window of `window`
// steps: Gamma(shape a0 + sum I, rate b0 + sum Lambda). Steps whose window
// has no infectiousness report the prior (flagged prior_only).
RtEstimate EstimateRt(std::span<const double> incidence,
                      std::span<const double> weights, int window,
                      double prior_shape = 1.0, double prior_rate = 0.2);

// Renewal simulation: the first |initial| steps copy `initial`, later steps
// draw I_t ~ Poisson(rt_path[t] * Lambda_t). Output has rt_path.size()
// steps and is a pure function of the arguments.
std::vector<double> SimulateIncidence(std::span<const double> rt_path,
                                      std::span<const double> weights,
                                      std::span<const double> initial,
                                      std::uint64_t seed);

// Intercept column first, then covariates standardized to zero mean and
// unit (sample) variance.
struct DesignMatrix {
  Eigen::MatrixXd x;
  std::vector<std::string> labels;
};

// Throws ParameterError naming a zero-variance covariate or a column whose
// length differs from the others.
DesignMatrix BuildDesign(std::span<const std::vector<double>> covariates,
                         std::span<const std::string> labels,
                         std::size_t steps);

struct CovariateFit {
  std::vector<double> beta;  // intercept first
  std::vector<std::string> labels;
  double log_likelihood = 0;
  std::vector<double> fitted_rt;  // exp(beta . x_t) for every step
  int iterations = 0;
  double gradient_norm = 0;  // of the count-normalized log-likelihood
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> last_beta)
      : Error(what), last_beta_(std::move(last_beta)) {}
  const std::vector<double>& last_beta() const { return last_beta_; }

 private:
  std::vector<double> last_beta_;
};

// sum_t [I_t ln(R_t Lambda_t) - R_t Lambda_t] over steps with Lambda_t > 0,
// where R_t = exp(beta . x_t).
double PoissonLogLikelihood(std::span<const double> beta,
                            std::span<const double> incidence,
                            std::span<const double> infectiousness,
                            const Eigen::MatrixXd& design);

// Maximizes PoissonLogLikelihood by damped Newton iterations. Convergence is
// declared when the gradient of the log-likelihood divided by sum(I) has
// norm < 1e-8; after 100 iterations NonConvergenceError carries the last
// iterate. Rows of `design` align with `incidence`; steps with Lambda == 0
// are skipped.
CovariateFit FitCovariates(std::span<const double> incidence,
                           std::span<const double> infectiousness,
                           const DesignMatrix& design);

}  // namespace dpepi::rt

#endif  // DPEPI_RT_H_
