//
// Copyright 2026 The dpbayes Authors
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

#ifndef DPBAYES_FISHER_FISHER_H_
#define DPBAYES_FISHER_FISHER_H_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "core/rng.h"
#include "models/population.h"
#include "models/statistic.h"
#include "privacy/mechanism.h"

namespace dpbayes {

enum class FisherMethod {
  kClosedGaussian,
  kAlg1,  // additive statistic, normal approximation for S_n
  kAlg2,  // exact marginal over full datasets
  kAlg3,  // sequential release
  kBernoulliClosed,
};

std::string_view FisherMethodName(FisherMethod method);
FisherMethod ParseFisherMethod(std::string_view name);

struct FisherSettings {
  int outer = 0;  // N
  int inner = 0;  // M
  int n = 0;
  double epsilon = 0.0;
  double theta = 0.0;
};

struct FisherEstimate {
  Eigen::MatrixXd value;
  Eigen::MatrixXd standard_error;  // zero for closed forms
  FisherMethod method = FisherMethod::kClosedGaussian;
  FisherSettings settings;
  // Importance-sampling effective sample sizes over the outer loop; NaN for
  // closed forms.
  double mean_ess = 0.0;
  double min_ess = 0.0;
  bool approximate = false;  // Monte Carlo moment fallback was used
  std::string warning;

  double scalar() const { return value(0, 0); }
  double scalar_se() const { return standard_error(0, 0); }
};

// F_ij = mu_i' H^-1 mu_j + 1/2 tr(H^-1 dH_i H^-1 dH_j) for a Gaussian
// N(mu(theta), H(theta)) in k dimensions and d parameters. d_mean[i] is
// d mu / d theta_i and d_cov[i] is d H / d theta_i.
Eigen::MatrixXd GaussianFisherMatrix(const Eigen::MatrixXd& cov,
                                     const std::vector<Eigen::VectorXd>& d_mean,
                                     const std::vector<Eigen::MatrixXd>& d_cov);

// Closed form for a mean statistic released with Gaussian noise of sd
// Delta / (n epsilon), under the normal approximation of S_n.
FisherEstimate FisherClosedGaussian(const PopulationModel& model,
                                    const StatisticSpec& statistic, int n,
                                    double epsilon, double theta);

enum class BernoulliVariant { kF1, kF2, kF3 };
BernoulliVariant ParseBernoulliVariant(std::string_view name);

// Bernoulli(theta) records: F1 randomized response, F2 per-record Gaussian
// noise of variance 1/eps^2, F3 Gaussian noise on the average.
FisherEstimate FisherBernoulliClosed(BernoulliVariant variant, double theta,
                                     double epsilon, int n);

struct MonteCarloOptions {
  int outer = 200;  // N: simulated releases
  int inner = 500;  // M: importance samples per release
  int threads = 1;
};

// Outer index i draws from root.Child(i), so results do not depend on
// `threads`.
FisherEstimate FisherAdditiveMc(const PopulationModel& model,
                                const StatisticSpec& statistic,
                                const Mechanism& mechanism, int n, double theta,
                                const MonteCarloOptions& options,
                                const RngStream& root);

FisherEstimate FisherExactMc(const PopulationModel& model,
                             const StatisticSpec& statistic,
                             const Mechanism& mechanism, int n, double theta,
                             const MonteCarloOptions& options,
                             const RngStream& root);

FisherEstimate FisherSequentialMc(const PopulationModel& model,
                                  const StatisticSpec& statistic,
                                  const Mechanism& mechanism, int n,
                                  double theta,
                                  const MonteCarloOptions& options,
                                  const RngStream& root);

// Dispatches on method. kBernoulliClosed uses variant F1 for
// randomized_response, F2 for sequential Gaussian and F3 for batch Gaussian.
FisherEstimate EstimateFisher(FisherMethod method, const PopulationModel& model,
                              const StatisticSpec& statistic,
                              const Mechanism& mechanism, int n, double theta,
                              const MonteCarloOptions& options,
                              const RngStream& root);

// Throws kIncompatible (or kOutOfDomain) unless `method` applies to this
// model, statistic and mechanism.
void CheckFisherCompatibility(FisherMethod method, const PopulationModel& model,
                              const StatisticSpec& statistic,
                              const Mechanism& mechanism);

// Method used when none is configured.
FisherMethod DefaultFisherMethod(const StatisticSpec& statistic,
                                 const Mechanism& mechanism);

}  // namespace dpbayes

#endif  // DPBAYES_FISHER_FISHER_H_
