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

#include "fisher/fisher.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "core/error.h"
#include "core/numeric.h"
#include "privacy/sensitivity.h"

namespace dpbayes {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct OuterResult {
  double gamma = 0.0;
  double ess = 0.0;
};

Eigen::MatrixXd Scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

FisherEstimate ClosedEstimate(FisherMethod method, double value, int n,
                              double epsilon, double theta) {
  FisherEstimate est;
  est.value = Scalar(value);
  est.standard_error = Scalar(0.0);
  est.method = method;
  est.settings = {0, 0, n, epsilon, theta};
  est.mean_ess = kNaN;
  est.min_ess = kNaN;
  return est;
}

void CheckOptions(const MonteCarloOptions& options) {
  Require(options.outer >= 2, ErrorCode::kInvalidArgument,
          "outer_samples (N) must be at least 2");
  Require(options.inner >= 1, ErrorCode::kInvalidArgument,
          "inner_samples (M) must be at least 1");
  Require(options.threads >= 1, ErrorCode::kInvalidArgument,
          "threads must be at least 1");
}

void CheckRegular(const PopulationModel& model, std::string_view method) {
  Require(model.family() != Family::kUniformWidth, ErrorCode::kIncompatible,
          std::string(method) +
              " needs a score with zero mean; uniform_width has a "
              "theta-dependent support and is not regular");
}

// Self-normalized weighted score, mapping degenerate weights to the
// documented error.
OuterResult WeightedScore(std::span<const double> log_w,
                          std::span<const double> score) {
  try {
    return {WeightedMean(log_w, score), EffectiveSampleSize(log_w)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNumerical) throw;
    Fail(ErrorCode::kNumerical,
         "importance proposal mismatch: all inner weights are zero");
  }
}

FisherEstimate Summarize(const std::vector<OuterResult>& results,
                         FisherMethod method, double factor, int n,
                         double epsilon, double theta,
                         const MonteCarloOptions& options) {
  const double count = static_cast<double>(results.size());
  double sum = 0.0;
  double ess_sum = 0.0;
  double ess_min = std::numeric_limits<double>::infinity();
  for (const OuterResult& r : results) {
    sum += r.gamma * r.gamma;
    ess_sum += r.ess;
    ess_min = std::min(ess_min, r.ess);
  }
  const double mean = sum / count;
  double ss = 0.0;
  for (const OuterResult& r : results) {
    const double d = r.gamma * r.gamma - mean;
    ss += d * d;
  }
  // Jackknife over outer replicates; for a mean this is sd / sqrt(N).
  const double se = std::sqrt(ss / (count - 1.0) / count);
  FisherEstimate est;
  est.value = Scalar(factor * mean);
  est.standard_error = Scalar(factor * se);
  est.method = method;
  est.settings = {options.outer, options.inner, n, epsilon, theta};
  est.mean_ess = ess_sum / count;
  est.min_ess = ess_min;
  if (est.mean_ess < 0.05 * options.inner) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "importance weights degenerate: mean effective sample size "
                  "%.1f of M=%d",
                  est.mean_ess, options.inner);
    est.warning = buf;
  }
  return est;
}

double NoiseVariance(const Mechanism& mechanism, double scale) {
  const double b = std::max(scale, kScaleFloor);
  return mechanism.kind == MechanismKind::kLaplace ? 2.0 * b * b : b * b;
}

}  // namespace

std::string_view FisherMethodName(FisherMethod method) {
  switch (method) {
    case FisherMethod::kClosedGaussian:
      return "closed_gaussian";
    case FisherMethod::kAlg1:
      return "alg1";
    case FisherMethod::kAlg2:
      return "alg2";
    case FisherMethod::kAlg3:
      return "alg3";
    case FisherMethod::kBernoulliClosed:
      return "bernoulli_closed";
  }
  return "?";
}

FisherMethod ParseFisherMethod(std::string_view name) {
  for (FisherMethod m :
       {FisherMethod::kClosedGaussian, FisherMethod::kAlg1, FisherMethod::kAlg2,
        FisherMethod::kAlg3, FisherMethod::kBernoulliClosed}) {
    if (FisherMethodName(m) == name) return m;
  }
  Fail(ErrorCode::kInvalidArgument,
       "method must be one of closed_gaussian, alg1, alg2, alg3, "
       "bernoulli_closed (got '" +
           std::string(name) + "')");
}

Eigen::MatrixXd GaussianFisherMatrix(
    const Eigen::MatrixXd& cov, const std::vector<Eigen::VectorXd>& d_mean,
    const std::vector<Eigen::MatrixXd>& d_cov) {
  const Eigen::Index k = cov.rows();
  const std::size_t d = d_mean.size();
  Require(cov.cols() == k && k > 0 && d_cov.size() == d && d > 0,
          ErrorCode::kInvalidArgument, "Fisher matrix: shape mismatch");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(cov);
  Require(lu.isInvertible(), ErrorCode::kNumerical,
          "Fisher matrix: H is singular");
  std::vector<Eigen::VectorXd> h_mean(d);
  std::vector<Eigen::MatrixXd> h_cov(d);
  for (std::size_t i = 0; i < d; ++i) {
    Require(
        d_mean[i].size() == k && d_cov[i].rows() == k && d_cov[i].cols() == k,
        ErrorCode::kInvalidArgument, "Fisher matrix: shape mismatch");
    h_mean[i] = lu.solve(d_mean[i]);
    h_cov[i] = lu.solve(d_cov[i]);
  }
  Eigen::MatrixXd f(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const double v =
          d_mean[i].dot(h_mean[j]) + 0.5 * (h_cov[i] * h_cov[j]).trace();
      f(i, j) = v;
      f(j, i) = v;
    }
  }
  return f;
}

FisherEstimate FisherClosedGaussian(const PopulationModel& model,
                                    const StatisticSpec& statistic, int n,
                                    double epsilon, double theta) {
  Require(statistic.additive(), ErrorCode::kIncompatible,
          "closed_gaussian requires the mean aggregator (got " +
              statistic.Label() + ")");
  Require(n >= 1, ErrorCode::kInvalidArgument, "n must be at least 1");
  Require(epsilon > 0.0, ErrorCode::kInvalidArgument,
          "epsilon must be positive or inf");
  const StatisticMoments m = ComputeStatisticMoments(model, statistic, theta);
  const double sigma = epsilon == kInfinity
                           ? 0.0
                           : GlobalSensitivity(statistic, model, n) / epsilon;
  const double nn = static_cast<double>(n);
  Eigen::MatrixXd h = Scalar(m.variance / nn + sigma * sigma);
  const Eigen::MatrixXd f = GaussianFisherMatrix(
      h, {Eigen::VectorXd::Constant(1, m.d_mean)}, {Scalar(m.d_variance / nn)});
  FisherEstimate est =
      ClosedEstimate(FisherMethod::kClosedGaussian, f(0, 0), n, epsilon, theta);
  est.approximate = m.approximate;
  return est;
}

BernoulliVariant ParseBernoulliVariant(std::string_view name) {
  if (name == "F1") return BernoulliVariant::kF1;
  if (name == "F2") return BernoulliVariant::kF2;
  if (name == "F3") return BernoulliVariant::kF3;
  Fail(ErrorCode::kInvalidArgument,
       "variant must be F1, F2 or F3 (got '" + std::string(name) + "')");
}

FisherEstimate FisherBernoulliClosed(BernoulliVariant variant, double theta,
                                     double epsilon, int n) {
  Require(theta > 0.0 && theta < 1.0, ErrorCode::kOutOfDomain,
          "bernoulli: theta must lie in (0, 1)");
  Require(epsilon > 0.0, ErrorCode::kInvalidArgument,
          "epsilon must be positive or inf");
  Require(n >= 1, ErrorCode::kInvalidArgument, "n must be at least 1");
  const double nn = static_cast<double>(n);
  const double v = theta * (1.0 - theta);
  double value = 0.0;
  switch (variant) {
    case BernoulliVariant::kF1: {
      const double alpha = std::tanh(0.5 * epsilon);
      const double keep = 1.0 / (1.0 + std::exp(-epsilon));
      const double tau = theta * keep + (1.0 - theta) * (1.0 - keep);
      value = nn * alpha * alpha / (tau * (1.0 - tau));
      break;
    }
    case BernoulliVariant::kF2:
    case BernoulliVariant::kF3: {
      double c = 1.0 / (epsilon * epsilon);
      if (variant == BernoulliVariant::kF3) c /= nn;
      const double t = 1.0 - 2.0 * theta;
      value = (nn * (v + c) + t * t) / ((v + c) * (v + c));
      break;
    }
  }
  return ClosedEstimate(FisherMethod::kBernoulliClosed, value, n, epsilon,
                        theta);
}

FisherEstimate FisherAdditiveMc(const PopulationModel& model,
                                const StatisticSpec& statistic,
                                const Mechanism& mechanism, int n, double theta,
                                const MonteCarloOptions& options,
                                const RngStream& root) {
  CheckOptions(options);
  Require(mechanism.kind == MechanismKind::kGaussian ||
              mechanism.kind == MechanismKind::kLaplace,
          ErrorCode::kIncompatible,
          "alg1 requires the gaussian or laplace mechanism (got " +
              std::string(MechanismName(mechanism.kind)) + ")");
  const BatchChannel channel(model, statistic, mechanism, n);
  const StatisticMoments m = ComputeStatisticMoments(model, statistic, theta);
  const double nn = static_cast<double>(n);
  const double var = m.variance / nn;
  const double d_var = m.d_variance / nn;
  Require(var > 0.0, ErrorCode::kNumerical,
          "alg1: statistic has zero variance at theta");
  const double noise_var = NoiseVariance(mechanism, channel.fixed_scale());
  const double post_var = 1.0 / (1.0 / var + 1.0 / noise_var);

  std::vector<OuterResult> results(options.outer);
  ParallelFor(results.size(), options.threads, [&](std::size_t i) {
    RngStream rng = root.Child(i);
    const std::vector<double> x = model.SampleMany(theta, n, rng);
    const double y = channel.Apply(x, rng).values[0];
    // Defensive mixture of the prior-predictive and a Gaussian
    // approximation of p(u | y, theta), each with doubled variance.
    const double post_mean = post_var * (m.mean / var + y / noise_var);
    const double q_var_a = 2.0 * var;
    const double q_var_b = 2.0 * post_var;
    const double sd_a = std::sqrt(q_var_a);
    const double sd_b = std::sqrt(q_var_b);
    std::vector<double> log_w(options.inner);
    std::vector<double> score(options.inner);
    for (int j = 0; j < options.inner; ++j) {
      const double u = rng.Uniform() < 0.5 ? rng.Normal(m.mean, sd_a)
                                           : rng.Normal(post_mean, sd_b);
      const double la = LogNormalDensity(u, m.mean, q_var_a);
      const double lb = LogNormalDensity(u, post_mean, q_var_b);
      const double log_q = -std::numbers::ln2 + std::max(la, lb) +
                           std::log1p(std::exp(-std::abs(la - lb)));
      log_w[j] = LogNormalDensity(u, m.mean, var) +
                 channel.LogDensityGivenStatistic(y, u) - log_q;
      const double r = u - m.mean;
      score[j] = m.d_mean * r / var - 0.5 * d_var / var +
                 0.5 * d_var * r * r / (var * var);
    }
    results[i] = WeightedScore(log_w, score);
  });
  FisherEstimate est = Summarize(results, FisherMethod::kAlg1, 1.0, n,
                                 mechanism.epsilon, theta, options);
  est.approximate = m.approximate;
  return est;
}

FisherEstimate FisherExactMc(const PopulationModel& model,
                             const StatisticSpec& statistic,
                             const Mechanism& mechanism, int n, double theta,
                             const MonteCarloOptions& options,
                             const RngStream& root) {
  CheckOptions(options);
  CheckRegular(model, "alg2");
  model.CheckDomain(theta);
  const BatchChannel channel(model, statistic, mechanism, n);

  std::vector<OuterResult> results(options.outer);
  ParallelFor(results.size(), options.threads, [&](std::size_t i) {
    RngStream rng = root.Child(i);
    std::vector<double> x = model.SampleMany(theta, n, rng);
    const double y = channel.Apply(x, rng).values[0];
    std::vector<double> scratch;
    std::vector<double> log_w(options.inner);
    std::vector<double> score(options.inner);
    for (int j = 0; j < options.inner; ++j) {
      double total = 0.0;
      for (double& v : x) {
        v = model.Sample(theta, rng);
        total += model.LogDensityAndScore(theta, v).score;
      }
      log_w[j] = channel.LogDensityGivenData(y, x, scratch);
      score[j] = total;
    }
    results[i] = WeightedScore(log_w, score);
  });
  return Summarize(results, FisherMethod::kAlg2, 1.0, n, mechanism.epsilon,
                   theta, options);
}

FisherEstimate FisherSequentialMc(const PopulationModel& model,
                                  const StatisticSpec& statistic,
                                  const Mechanism& mechanism, int n,
                                  double theta,
                                  const MonteCarloOptions& options,
                                  const RngStream& root) {
  CheckOptions(options);
  CheckRegular(model, "alg3");
  model.CheckDomain(theta);
  Require(n >= 1, ErrorCode::kInvalidArgument, "n must be at least 1");
  const RecordChannel channel(model, statistic, mechanism);

  std::vector<OuterResult> results(options.outer);
  ParallelFor(results.size(), options.threads, [&](std::size_t i) {
    RngStream rng = root.Child(i);
    const double y = channel.ReleaseOne(model.Sample(theta, rng), rng);
    std::vector<double> log_w(options.inner);
    std::vector<double> score(options.inner);
    for (int j = 0; j < options.inner; ++j) {
      // Proposal q = p(x | theta), so the weight is h(y | x).
      const double x = model.Sample(theta, rng);
      log_w[j] = channel.LogDensity(y, x);
      score[j] = model.LogDensityAndScore(theta, x).score;
    }
    results[i] = WeightedScore(log_w, score);
  });
  return Summarize(results, FisherMethod::kAlg3, static_cast<double>(n), n,
                   mechanism.epsilon, theta, options);
}

FisherMethod DefaultFisherMethod(const StatisticSpec& statistic,
                                 const Mechanism& mechanism) {
  if (statistic.sequential()) return FisherMethod::kAlg3;
  if (statistic.additive() && mechanism.kind == MechanismKind::kGaussian) {
    return FisherMethod::kClosedGaussian;
  }
  if (statistic.additive() && mechanism.kind == MechanismKind::kLaplace) {
    return FisherMethod::kAlg1;
  }
  return FisherMethod::kAlg2;
}

void CheckFisherCompatibility(FisherMethod method, const PopulationModel& model,
                              const StatisticSpec& statistic,
                              const Mechanism& mechanism) {
  const std::string name(FisherMethodName(method));
  const MechanismKind kind = mechanism.kind;
  switch (method) {
    case FisherMethod::kClosedGaussian:
      Require(statistic.additive() && kind == MechanismKind::kGaussian,
              ErrorCode::kIncompatible,
              name +
                  " requires a batch mean release with the gaussian "
                  "mechanism");
      return;
    case FisherMethod::kAlg1:
      Require(statistic.additive() && (kind == MechanismKind::kGaussian ||
                                       kind == MechanismKind::kLaplace),
              ErrorCode::kIncompatible,
              name +
                  " requires a batch mean release with the gaussian or "
                  "laplace mechanism");
      return;
    case FisherMethod::kAlg2:
      Require(!statistic.sequential(), ErrorCode::kIncompatible,
              name + " requires a batch release");
      CheckRegular(model, name);
      return;
    case FisherMethod::kAlg3:
      Require(statistic.sequential(), ErrorCode::kIncompatible,
              name + " requires a sequential release (aggregator none)");
      CheckRegular(model, name);
      return;
    case FisherMethod::kBernoulliClosed:
      Require(model.family() == Family::kBernoulli, ErrorCode::kIncompatible,
              name + " requires the bernoulli family");
      Require(kind == MechanismKind::kRandomizedResponse ||
                  (kind == MechanismKind::kGaussian &&
                   (statistic.sequential() || statistic.additive())),
              ErrorCode::kIncompatible,
              name +
                  " covers randomized_response, sequential gaussian and "
                  "batch mean gaussian releases");
      return;
  }
}

FisherEstimate EstimateFisher(FisherMethod method, const PopulationModel& model,
                              const StatisticSpec& statistic,
                              const Mechanism& mechanism, int n, double theta,
                              const MonteCarloOptions& options,
                              const RngStream& root) {
  CheckFisherCompatibility(method, model, statistic, mechanism);
  switch (method) {
    case FisherMethod::kClosedGaussian:
      return FisherClosedGaussian(model, statistic, n, mechanism.epsilon,
                                  theta);
    case FisherMethod::kAlg1:
      return FisherAdditiveMc(model, statistic, mechanism, n, theta, options,
                              root);
    case FisherMethod::kAlg2:
      return FisherExactMc(model, statistic, mechanism, n, theta, options,
                           root);
    case FisherMethod::kAlg3:
      return FisherSequentialMc(model, statistic, mechanism, n, theta, options,
                                root);
    case FisherMethod::kBernoulliClosed: {
      BernoulliVariant variant = BernoulliVariant::kF3;
      if (mechanism.kind == MechanismKind::kRandomizedResponse) {
        variant = BernoulliVariant::kF1;
      } else if (statistic.sequential()) {
        variant = BernoulliVariant::kF2;
      }
      return FisherBernoulliClosed(variant, theta, mechanism.epsilon, n);
    }
  }
  Fail(ErrorCode::kInternal, "unknown Fisher method");
}

}  // namespace dpbayes
