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

#include "mcmc/samplers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "core/error.h"
#include "core/numeric.h"

namespace dpbayes {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double SafeLogSumExp(std::span<const double> log_w) {
  const double top = *std::max_element(log_w.begin(), log_w.end());
  if (top == kNegInf) return kNegInf;
  return LogSumExp(log_w);
}

// Index 0 when every weight vanishes.
std::size_t SafeSampleWeighted(std::span<const double> log_w, RngStream& rng) {
  const double top = *std::max_element(log_w.begin(), log_w.end());
  if (top == kNegInf) return 0;
  return SampleWeighted(log_w, rng);
}

// a - b with -inf - -inf read as -inf (nothing to gain).
double LogDifference(double a, double b) {
  if (a == kNegInf) return kNegInf;
  if (b == kNegInf) return kInfinity;
  return a - b;
}

struct NormalApprox {
  double mean;
  double var;
};

NormalApprox Approx(const PopulationModel& model, const StatisticSpec& stat,
                    int n, double theta) {
  const StatisticMoments m = ComputeStatisticMoments(model, stat, theta);
  return {m.mean, m.variance / static_cast<double>(n)};
}

}  // namespace

Prior::Prior(std::function<double(double)> log_density, double low, double high)
    : log_density_(std::move(log_density)), low_(low), high_(high) {
  Require(std::isfinite(low) && std::isfinite(high) && low < high,
          ErrorCode::kInvalidArgument,
          "prior interval must satisfy prior_lo < prior_hi (both finite)");
}

Prior Prior::Flat(double low, double high) { return Prior({}, low, high); }

Prior Prior::Custom(std::function<double(double)> log_density, double low,
                    double high) {
  Require(static_cast<bool>(log_density), ErrorCode::kInvalidArgument,
          "custom prior needs a log-density");
  return Prior(std::move(log_density), low, high);
}

double Prior::LogDensity(double theta) const {
  if (!Contains(theta)) return kNegInf;
  return log_density_ ? log_density_(theta) : 0.0;
}

double RandomWalk::Propose(double theta, RngStream& rng) const {
  const double step = step_scale * rng.Normal();
  return space == ProposalSpace::kLog ? theta * std::exp(step) : theta + step;
}

double RandomWalk::LogRatio(double theta, double proposed) const {
  return space == ProposalSpace::kLog ? std::log(proposed / theta) : 0.0;
}

std::string_view SamplerName(Sampler sampler) {
  switch (sampler) {
    case Sampler::kAlg4:
      return "alg4";
    case Sampler::kAlg5:
      return "alg5";
    case Sampler::kAlg6:
      return "alg6";
    case Sampler::kAlg7:
      return "alg7";
    case Sampler::kAlg8:
      return "alg8";
  }
  return "?";
}

Sampler ParseSampler(std::string_view name) {
  for (Sampler s : {Sampler::kAlg4, Sampler::kAlg5, Sampler::kAlg6,
                    Sampler::kAlg7, Sampler::kAlg8}) {
    if (SamplerName(s) == name) return s;
  }
  Fail(ErrorCode::kInvalidArgument,
       "sampler must be one of alg4, alg5, alg6, alg7, alg8 (got '" +
           std::string(name) + "')");
}

void CheckSamplerCompatibility(Sampler sampler, const StatisticSpec& statistic,
                               const Mechanism& mechanism) {
  static const char kTable[] =
      " (algorithm-model matching: additive statistic + gaussian noise -> "
      "alg4; additive statistic + non-gaussian noise -> alg5, alg6; "
      "non-additive statistic -> alg7; sequential release -> alg8)";
  const std::string pair = std::string(SamplerName(sampler)) + " with " +
                           statistic.Label() + " and " +
                           std::string(MechanismName(mechanism.kind));
  bool ok = false;
  switch (sampler) {
    case Sampler::kAlg4:
      ok = statistic.additive() && mechanism.kind == MechanismKind::kGaussian;
      break;
    case Sampler::kAlg5:
    case Sampler::kAlg6:
      ok = statistic.additive() && mechanism.kind == MechanismKind::kLaplace;
      break;
    case Sampler::kAlg7:
      ok = !statistic.sequential() &&
           mechanism.kind != MechanismKind::kRandomizedResponse;
      break;
    case Sampler::kAlg8:
      ok = statistic.sequential() &&
           mechanism.kind != MechanismKind::kLaplaceSmooth;
      break;
  }
  if (!ok) Fail(ErrorCode::kIncompatible, "incompatible " + pair + kTable);
}

Kernel::Kernel(PosteriorProblem problem, RandomWalk proposal)
    : problem_(std::move(problem)), proposal_(proposal) {}

double Kernel::AuxValue(const ChainState&) const { return kNaN; }

bool Kernel::ProposeTheta(double theta, RngStream& rng, double& proposed,
                          double& log_ratio) const {
  proposed = proposal_.Propose(theta, rng);
  if (!problem_.prior.Contains(proposed)) return false;
  log_ratio = proposal_.LogRatio(theta, proposed) +
              problem_.prior.LogDensity(proposed) -
              problem_.prior.LogDensity(theta);
  return true;
}

bool Kernel::AcceptLog(double log_ratio, RngStream& rng) {
  if (std::isnan(log_ratio)) return false;
  if (log_ratio >= 0.0) return true;
  return std::log(rng.Uniform()) < log_ratio;
}

// alg4.

GaussianMhKernel::GaussianMhKernel(PosteriorProblem problem,
                                   RandomWalk proposal)
    : Kernel(std::move(problem), proposal) {
  const BatchChannel channel(problem_.model, problem_.statistic,
                             problem_.mechanism, problem_.n);
  noise_var_ = channel.fixed_scale() * channel.fixed_scale();
}

double GaussianMhKernel::LogTarget(double theta) const {
  const double prior = problem_.prior.LogDensity(theta);
  if (prior == kNegInf) return kNegInf;
  const NormalApprox f =
      Approx(problem_.model, problem_.statistic, problem_.n, theta);
  return prior + LogNormalDensity(problem_.y[0], f.mean, f.var + noise_var_);
}

ChainState GaussianMhKernel::Initialize(double theta0, RngStream&) {
  Require(problem_.prior.Contains(theta0), ErrorCode::kInvalidArgument,
          "initial theta outside the prior support");
  return {theta0, std::monostate{}};
}

bool GaussianMhKernel::Step(ChainState& state, RngStream& rng) {
  double proposed;
  double log_ratio;
  if (!ProposeTheta(state.theta, rng, proposed, log_ratio)) {
    last_log_ratio_ = kNegInf;
    return false;
  }
  const NormalApprox a =
      Approx(problem_.model, problem_.statistic, problem_.n, state.theta);
  const NormalApprox b =
      Approx(problem_.model, problem_.statistic, problem_.n, proposed);
  const double y = problem_.y[0];
  log_ratio += LogNormalDensity(y, b.mean, b.var + noise_var_) -
               LogNormalDensity(y, a.mean, a.var + noise_var_);
  last_log_ratio_ = log_ratio;
  if (!AcceptLog(log_ratio, rng)) return false;
  state.theta = proposed;
  return true;
}

// alg5 and alg6.

AdditiveKernel::AdditiveKernel(PosteriorProblem problem, RandomWalk proposal,
                               int proposals)
    : Kernel(std::move(problem), proposal),
      channel_(problem_.model, problem_.statistic, problem_.mechanism,
               problem_.n),
      proposals_(proposals),
      log_a_(proposals),
      log_b_(proposals) {
  Require(proposals >= 1, ErrorCode::kInvalidArgument,
          "num_proposals (N) must be at least 1");
}

double AdditiveKernel::LogF(double u, double theta) const {
  const NormalApprox f =
      Approx(problem_.model, problem_.statistic, problem_.n, theta);
  return LogNormalDensity(u, f.mean, f.var);
}

double AdditiveKernel::LogG(double u) const {
  return channel_.LogDensityGivenStatistic(problem_.y[0], u);
}

double AdditiveKernel::SampleF(double theta, RngStream& rng) const {
  const NormalApprox f =
      Approx(problem_.model, problem_.statistic, problem_.n, theta);
  return rng.Normal(f.mean, std::sqrt(f.var));
}

double PmmhKernel::LogMarginalEstimate(double theta, RngStream& rng) {
  const NormalApprox f =
      Approx(problem_.model, problem_.statistic, problem_.n, theta);
  const double sd = std::sqrt(f.var);
  // With q = f the weight f g / q reduces to g.
  for (int j = 0; j < proposals_; ++j) {
    log_a_[j] = LogG(rng.Normal(f.mean, sd));
  }
  return SafeLogSumExp(log_a_) - std::log(static_cast<double>(proposals_));
}

ChainState PmmhKernel::Initialize(double theta0, RngStream& rng) {
  Require(problem_.prior.Contains(theta0), ErrorCode::kInvalidArgument,
          "initial theta outside the prior support");
  return {theta0, MarginalEstimate{LogMarginalEstimate(theta0, rng)}};
}

double PmmhKernel::AuxValue(const ChainState& state) const {
  return std::get<MarginalEstimate>(state.aux).log_z;
}

bool PmmhKernel::Step(ChainState& state, RngStream& rng) {
  auto& current = std::get<MarginalEstimate>(state.aux);
  double proposed;
  double log_ratio;
  if (!ProposeTheta(state.theta, rng, proposed, log_ratio)) {
    last_log_ratio_ = kNegInf;
    return false;
  }
  const double log_z = LogMarginalEstimate(proposed, rng);
  log_ratio += LogDifference(log_z, current.log_z);
  last_log_ratio_ = log_ratio;
  if (!AcceptLog(log_ratio, rng)) return false;
  state.theta = proposed;
  current.log_z = log_z;
  return true;
}

ChainState MhaarKernel::Initialize(double theta0, RngStream& rng) {
  Require(problem_.prior.Contains(theta0), ErrorCode::kInvalidArgument,
          "initial theta outside the prior support");
  return {theta0, StatisticValue{SampleF(theta0, rng)}};
}

double MhaarKernel::AuxValue(const ChainState& state) const {
  return std::get<StatisticValue>(state.aux).u;
}

bool MhaarKernel::Step(ChainState& state, RngStream& rng) {
  auto& current = std::get<StatisticValue>(state.aux);
  double proposed;
  double log_ratio;
  if (!ProposeTheta(state.theta, rng, proposed, log_ratio)) {
    last_log_ratio_ = kNegInf;
    return false;
  }
  const PopulationModel& model = problem_.model;
  const NormalApprox fa =
      Approx(model, problem_.statistic, problem_.n, state.theta);
  const NormalApprox fb =
      Approx(model, problem_.statistic, problem_.n, proposed);
  const NormalApprox q = Approx(model, problem_.statistic, problem_.n,
                                0.5 * (state.theta + proposed));
  const double q_sd = std::sqrt(q.var);
  u_.resize(proposals_);
  u_[0] = current.u;
  for (int j = 1; j < proposals_; ++j) u_[j] = rng.Normal(q.mean, q_sd);
  for (int j = 0; j < proposals_; ++j) {
    const double common = LogG(u_[j]) - LogNormalDensity(u_[j], q.mean, q.var);
    log_a_[j] = LogNormalDensity(u_[j], fa.mean, fa.var) + common;
    log_b_[j] = LogNormalDensity(u_[j], fb.mean, fb.var) + common;
  }
  log_ratio += LogDifference(SafeLogSumExp(log_b_), SafeLogSumExp(log_a_));
  last_log_ratio_ = log_ratio;
  if (AcceptLog(log_ratio, rng)) {
    state.theta = proposed;
    current.u = u_[SafeSampleWeighted(log_b_, rng)];
    return true;
  }
  current.u = u_[SafeSampleWeighted(log_a_, rng)];
  return false;
}

// alg7.

LatentMhaarKernel::LatentMhaarKernel(PosteriorProblem problem,
                                     RandomWalk proposal, int proposals,
                                     int subset_size)
    : Kernel(std::move(problem), proposal),
      channel_(problem_.model, problem_.statistic, problem_.mechanism,
               problem_.n),
      proposals_(proposals),
      subset_size_(subset_size),
      z_(proposals, std::vector<double>(problem_.n)),
      base_(proposals, std::vector<double>(problem_.n)),
      perm_(problem_.n),
      x_(problem_.n),
      log_h_new_(proposals),
      log_h_old_(proposals) {
  Require(proposals >= 1, ErrorCode::kInvalidArgument,
          "num_proposals (N) must be at least 1");
  Require(subset_size >= 0 && subset_size < problem_.n,
          ErrorCode::kInvalidArgument,
          "subset_size must satisfy 0 <= m < n (0 selects full mode)");
  for (std::size_t t = 0; t < perm_.size(); ++t) perm_[t] = t;
}

double LatentMhaarKernel::LogH(std::span<const double> base, double theta) {
  for (std::size_t t = 0; t < base.size(); ++t) {
    x_[t] = problem_.model.FromBase(theta, base[t]);
  }
  return channel_.LogDensityGivenData(problem_.y[0], x_, scratch_);
}

ChainState LatentMhaarKernel::Initialize(double theta0, RngStream& rng) {
  Require(problem_.prior.Contains(theta0), ErrorCode::kInvalidArgument,
          "initial theta outside the prior support");
  Latents latents;
  latents.z.resize(problem_.n);
  latents.base.resize(problem_.n);
  for (int t = 0; t < problem_.n; ++t) {
    latents.z[t] = rng.Uniform();
    latents.base[t] = problem_.model.LatentBase(latents.z[t]);
  }
  return {theta0, std::move(latents)};
}

bool LatentMhaarKernel::Step(ChainState& state, RngStream& rng) {
  auto& current = std::get<Latents>(state.aux);
  double proposed;
  double log_ratio;
  if (!ProposeTheta(state.theta, rng, proposed, log_ratio)) {
    last_log_ratio_ = kNegInf;
    return false;
  }
  const PopulationModel& model = problem_.model;
  const std::size_t n = current.z.size();
  z_[0] = current.z;
  base_[0] = current.base;
  if (subset_size_ == 0) {
    for (int i = 1; i < proposals_; ++i) {
      for (std::size_t t = 0; t < n; ++t) {
        z_[i][t] = rng.Uniform();
        base_[i][t] = model.LatentBase(z_[i][t]);
      }
    }
  } else {
    // Uniform size-m subset b by partial Fisher-Yates.
    for (int i = 0; i < subset_size_; ++i) {
      std::swap(perm_[i], perm_[i + rng.Index(n - i)]);
    }
    for (int i = 1; i < proposals_; ++i) {
      z_[i] = current.z;
      base_[i] = current.base;
      for (int b = 0; b < subset_size_; ++b) {
        const std::size_t t = perm_[b];
        z_[i][t] = rng.Uniform();
        base_[i][t] = model.LatentBase(z_[i][t]);
      }
    }
  }
  for (int i = 0; i < proposals_; ++i) {
    log_h_new_[i] = LogH(base_[i], proposed);
    log_h_old_[i] = LogH(base_[i], state.theta);
  }
  log_ratio +=
      LogDifference(SafeLogSumExp(log_h_new_), SafeLogSumExp(log_h_old_));
  last_log_ratio_ = log_ratio;
  const std::size_t k = SafeSampleWeighted(log_h_new_, rng);
  if (!AcceptLog(log_ratio, rng)) return false;
  state.theta = proposed;
  std::swap(current.z, z_[k]);
  std::swap(current.base, base_[k]);
  return true;
}

// alg8.

SequentialMhaarKernel::SequentialMhaarKernel(PosteriorProblem problem,
                                             RandomWalk proposal, int proposals)
    : Kernel(std::move(problem), proposal),
      channel_(problem_.model, problem_.statistic, problem_.mechanism),
      proposals_(proposals) {
  Require(proposals >= 1, ErrorCode::kInvalidArgument,
          "num_proposals (N) must be at least 1");
  const std::size_t size = static_cast<std::size_t>(problem_.n) * proposals;
  z_.resize(size);
  base_.resize(size);
  log_h_new_.resize(size);
  log_h_old_.resize(size);
}

double SequentialMhaarKernel::LogH(std::size_t t, double base,
                                   double theta) const {
  return channel_.LogDensity(problem_.y[t],
                             problem_.model.FromBase(theta, base));
}

ChainState SequentialMhaarKernel::Initialize(double theta0, RngStream& rng) {
  Require(problem_.prior.Contains(theta0), ErrorCode::kInvalidArgument,
          "initial theta outside the prior support");
  Latents latents;
  latents.z.resize(problem_.n);
  latents.base.resize(problem_.n);
  for (int t = 0; t < problem_.n; ++t) {
    latents.z[t] = rng.Uniform();
    latents.base[t] = problem_.model.LatentBase(latents.z[t]);
  }
  return {theta0, std::move(latents)};
}

bool SequentialMhaarKernel::Step(ChainState& state, RngStream& rng) {
  auto& current = std::get<Latents>(state.aux);
  double proposed;
  double log_ratio = 0.0;
  const bool inside = ProposeTheta(state.theta, rng, proposed, log_ratio);
  const PopulationModel& model = problem_.model;
  const std::size_t n = current.z.size();
  const std::size_t big_n = proposals_;
  for (std::size_t t = 0; t < n; ++t) {
    double* z = &z_[t * big_n];
    double* base = &base_[t * big_n];
    z[0] = current.z[t];
    base[0] = current.base[t];
    for (std::size_t i = 1; i < big_n; ++i) {
      z[i] = rng.Uniform();
      base[i] = model.LatentBase(z[i]);
    }
    for (std::size_t i = 0; i < big_n; ++i) {
      log_h_old_[t * big_n + i] = LogH(t, base[i], state.theta);
      if (inside) log_h_new_[t * big_n + i] = LogH(t, base[i], proposed);
    }
    if (inside) {
      const std::span<const double> row_new(&log_h_new_[t * big_n], big_n);
      const std::span<const double> row_old(&log_h_old_[t * big_n], big_n);
      log_ratio +=
          LogDifference(SafeLogSumExp(row_new), SafeLogSumExp(row_old));
    }
  }
  bool accepted = false;
  if (inside) {
    last_log_ratio_ = log_ratio;
    accepted = AcceptLog(log_ratio, rng);
  } else {
    last_log_ratio_ = kNegInf;
  }
  // z is refreshed on both branches.
  const std::vector<double>& weights = accepted ? log_h_new_ : log_h_old_;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t k = SafeSampleWeighted(
        std::span<const double>(&weights[t * big_n], big_n), rng);
    current.z[t] = z_[t * big_n + k];
    current.base[t] = base_[t * big_n + k];
  }
  if (accepted) state.theta = proposed;
  return accepted;
}

std::unique_ptr<Kernel> MakeKernel(Sampler sampler, PosteriorProblem problem,
                                   double step_scale,
                                   const SamplerOptions& options) {
  CheckSamplerCompatibility(sampler, problem.statistic, problem.mechanism);
  Require(problem.n >= 1, ErrorCode::kInvalidArgument, "n must be at least 1");
  const std::size_t expected =
      problem.statistic.sequential() ? static_cast<std::size_t>(problem.n) : 1;
  Require(problem.y.size() == expected, ErrorCode::kInvalidArgument,
          "release has the wrong number of values for this statistic");
  for (double v : problem.y) {
    Require(std::isfinite(v), ErrorCode::kInvalidArgument,
            "release values must be finite");
  }
  const PopulationModel& model = problem.model;
  bool prior_ok = true;
  if (model.PositiveParameter()) prior_ok = problem.prior.low() >= 0.0;
  if (model.family() == Family::kBernoulli) {
    prior_ok = problem.prior.low() >= 0.0 && problem.prior.high() <= 1.0;
  }
  Require(prior_ok, ErrorCode::kOutOfDomain,
          "prior interval must lie inside the " + model.Name() +
              " parameter domain");
  Require(std::isfinite(step_scale) && step_scale >= 0.0,
          ErrorCode::kInvalidArgument, "step_scale must be non-negative");
  if (sampler == Sampler::kAlg4 || sampler == Sampler::kAlg5 ||
      sampler == Sampler::kAlg6) {
    Require(HasClosedFormMoments(model, problem.statistic),
            ErrorCode::kIncompatible,
            std::string(SamplerName(sampler)) +
                " needs closed-form statistic moments for " + model.Name() +
                " with " + problem.statistic.Label());
  }
  const RandomWalk walk{step_scale, model.PositiveParameter()
                                        ? ProposalSpace::kLog
                                        : ProposalSpace::kNatural};
  switch (sampler) {
    case Sampler::kAlg4:
      return std::make_unique<GaussianMhKernel>(std::move(problem), walk);
    case Sampler::kAlg5:
      return std::make_unique<PmmhKernel>(std::move(problem), walk,
                                          options.proposals);
    case Sampler::kAlg6:
      return std::make_unique<MhaarKernel>(std::move(problem), walk,
                                           options.proposals);
    case Sampler::kAlg7:
      return std::make_unique<LatentMhaarKernel>(
          std::move(problem), walk, options.proposals, options.subset_size);
    case Sampler::kAlg8:
      return std::make_unique<SequentialMhaarKernel>(std::move(problem), walk,
                                                     options.proposals);
  }
  Fail(ErrorCode::kInternal, "unknown sampler");
}

double ChainTrace::AcceptanceRate() const {
  if (accepted.empty()) return 0.0;
  std::size_t count = 0;
  for (char a : accepted) count += a != 0;
  return static_cast<double>(count) / static_cast<double>(accepted.size());
}

ChainTrace RunChain(Kernel& kernel, ChainState& state, std::size_t iterations,
                    double burn_in_fraction, RngStream& rng) {
  Require(iterations >= 4, ErrorCode::kInvalidArgument,
          "iterations (K) must be at least 4");
  Require(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0,
          ErrorCode::kInvalidArgument, "burn_in_fraction must lie in [0, 1)");
  ChainTrace trace;
  trace.samples.reserve(iterations);
  trace.accepted.reserve(iterations);
  trace.aux.reserve(iterations);
  for (std::size_t k = 0; k < iterations; ++k) {
    const bool accepted = kernel.Step(state, rng);
    trace.samples.push_back(state.theta);
    trace.accepted.push_back(accepted ? 1 : 0);
    trace.aux.push_back(kernel.AuxValue(state));
  }
  trace.burn_in = static_cast<std::size_t>(
      std::floor(burn_in_fraction * static_cast<double>(iterations)));
  trace.master_seed = rng.master_seed();
  trace.stream_id = rng.stream_id();
  trace.step_scale = kernel.proposal().step_scale;
  return trace;
}

double TuneStepScale(Kernel& kernel, ChainState& state, RngStream& rng,
                     const TuningOptions& options) {
  Require(options.batch >= 1 && options.max_batches >= 1,
          ErrorCode::kInvalidArgument, "tuning batches must be positive");
  double scale = kernel.proposal().step_scale;
  if (!(scale > 0.0)) scale = 0.1;
  const double target = 0.5 * (options.target_low + options.target_high);
  for (int b = 0; b < options.max_batches; ++b) {
    kernel.set_step_scale(scale);
    int accepted = 0;
    for (int k = 0; k < options.batch; ++k) accepted += kernel.Step(state, rng);
    const double rate = static_cast<double>(accepted) / options.batch;
    if (b > 0 && rate >= options.target_low && rate <= options.target_high) {
      break;
    }
    scale = std::clamp(scale * std::exp(3.0 * (rate - target)), 1e-6, 1e3);
  }
  kernel.set_step_scale(scale);
  return scale;
}

double InitialStepScale(const PopulationModel& model, const Prior& prior) {
  if (model.PositiveParameter()) return 0.2;
  return 0.02 * (prior.high() - prior.low());
}

ChainTrace RunPosteriorChain(Sampler sampler, const PosteriorProblem& problem,
                             const ChainRequest& request, RngStream& rng) {
  const bool tune = std::isnan(request.step_scale);
  const double step = tune ? InitialStepScale(problem.model, problem.prior)
                           : request.step_scale;
  std::unique_ptr<Kernel> kernel =
      MakeKernel(sampler, problem, step, request.sampler_options);
  double theta0 =
      std::isnan(request.theta0) ? problem.prior.Midpoint() : request.theta0;
  double tuned = step;
  if (tune) {
    RngStream tune_rng = rng.Child(0x7e57);
    if (sampler == Sampler::kAlg5) {
      std::unique_ptr<Kernel> helper =
          MakeKernel(Sampler::kAlg6, problem, step, request.sampler_options);
      ChainState pre = helper->Initialize(theta0, tune_rng);
      tuned = TuneStepScale(*helper, pre, tune_rng);
      theta0 = pre.theta;
    } else {
      ChainState pre = kernel->Initialize(theta0, tune_rng);
      tuned = TuneStepScale(*kernel, pre, tune_rng);
      theta0 = pre.theta;
    }
    kernel->set_step_scale(tuned);
  }
  ChainState state = kernel->Initialize(theta0, rng);
  return RunChain(*kernel, state, request.iterations, request.burn_in_fraction,
                  rng);
}

}  // namespace dpbayes
