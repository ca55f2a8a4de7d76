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

#ifndef DPBAYES_MCMC_SAMPLERS_H_
#define DPBAYES_MCMC_SAMPLERS_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "core/rng.h"
#include "models/population.h"
#include "models/statistic.h"
#include "privacy/mechanism.h"

namespace dpbayes {

// eta(theta): flat on (low, high) or a user log-density restricted to it.
class Prior {
 public:
  static Prior Flat(double low, double high);
  static Prior Custom(std::function<double(double)> log_density, double low,
                      double high);

  // -inf outside (low, high).
  double LogDensity(double theta) const;
  bool Contains(double theta) const { return theta > low_ && theta < high_; }
  double low() const { return low_; }
  double high() const { return high_; }
  double Midpoint() const { return 0.5 * (low_ + high_); }
  bool flat() const { return !log_density_; }

 private:
  Prior(std::function<double(double)> log_density, double low, double high);

  std::function<double(double)> log_density_;
  double low_;
  double high_;
};

enum class ProposalSpace { kNatural, kLog };

// Gaussian random walk on theta or on log(theta).
struct RandomWalk {
  double step_scale = 0.1;
  ProposalSpace space = ProposalSpace::kNatural;

  double Propose(double theta, RngStream& rng) const;
  // log q(theta | proposed) - log q(proposed | theta); for the log-space walk
  // this is the Jacobian term log(proposed / theta).
  double LogRatio(double theta, double proposed) const;
};

enum class Sampler {
  kAlg4,  // MH on the normal approximation, Gaussian noise
  kAlg5,  // pseudo-marginal MH
  kAlg6,  // MHAAR over u
  kAlg7,  // MHAAR over latent uniforms z_1..n
  kAlg8,  // MHAAR for sequential releases
};

std::string_view SamplerName(Sampler sampler);
Sampler ParseSampler(std::string_view name);

// Throws kIncompatible unless the pairing follows the algorithm-model
// matching: alg4 mean + gaussian; alg5, alg6 mean + laplace; alg7 any batch
// release; alg8 sequential release.
void CheckSamplerCompatibility(Sampler sampler, const StatisticSpec& statistic,
                               const Mechanism& mechanism);

// Everything the target posterior depends on.
struct PosteriorProblem {
  PopulationModel model;
  StatisticSpec statistic;
  Mechanism mechanism;
  int n;
  std::vector<double> y;  // one value (batch) or n values (sequential)
  Prior prior;
};

struct MarginalEstimate {
  double log_z;
};
struct StatisticValue {
  double u;
};
struct Latents {
  std::vector<double> z;
  std::vector<double> base;  // model.LatentBase(z), cached
};

struct ChainState {
  double theta = 0.0;
  std::variant<std::monostate, MarginalEstimate, StatisticValue, Latents> aux;
};

// One Markov kernel. A kernel owns scratch buffers, so each chain needs its
// own instance.
class Kernel {
 public:
  Kernel(PosteriorProblem problem, RandomWalk proposal);
  virtual ~Kernel() = default;

  virtual Sampler sampler() const = 0;
  // theta0 must lie inside the prior support.
  virtual ChainState Initialize(double theta0, RngStream& rng) = 0;
  // One iteration; returns true when the theta move was accepted.
  virtual bool Step(ChainState& state, RngStream& rng) = 0;
  // Scalar view of the auxiliary state for traces (NaN if none).
  virtual double AuxValue(const ChainState& state) const;

  const PosteriorProblem& problem() const { return problem_; }
  const RandomWalk& proposal() const { return proposal_; }
  void set_step_scale(double scale) { proposal_.step_scale = scale; }
  // Log of the (averaged) acceptance ratio of the most recent step.
  double last_log_ratio() const { return last_log_ratio_; }

 protected:
  // Proposes theta' and fills the prior and proposal part of the log ratio.
  // Returns false when theta' falls outside the prior support.
  bool ProposeTheta(double theta, RngStream& rng, double& proposed,
                    double& log_ratio) const;
  static bool AcceptLog(double log_ratio, RngStream& rng);

  PosteriorProblem problem_;
  RandomWalk proposal_;
  double last_log_ratio_ = 0.0;
};

// alg4: exact MH on eta(theta) N(y; mu_s(theta), Sigma_s(theta)/n +
// sigma^2).
class GaussianMhKernel : public Kernel {
 public:
  GaussianMhKernel(PosteriorProblem problem, RandomWalk proposal);
  Sampler sampler() const override { return Sampler::kAlg4; }
  ChainState Initialize(double theta0, RngStream& rng) override;
  bool Step(ChainState& state, RngStream& rng) override;
  // Unnormalized log posterior.
  double LogTarget(double theta) const;

 private:
  double noise_var_;
};

// Shared pieces of alg5 and alg6.
class AdditiveKernel : public Kernel {
 public:
  AdditiveKernel(PosteriorProblem problem, RandomWalk proposal, int proposals);
  int proposals() const { return proposals_; }
  // log f_{S_n}(u | theta) under the normal approximation.
  double LogF(double u, double theta) const;
  double LogG(double u) const;
  double SampleF(double theta, RngStream& rng) const;

 protected:
  BatchChannel channel_;
  int proposals_;
  std::vector<double> log_a_;
  std::vector<double> log_b_;
};

// alg5, pseudo-marginal MH with importance proposal
// q_theta = f_{S_n}(. | theta).
class PmmhKernel : public AdditiveKernel {
 public:
  using AdditiveKernel::AdditiveKernel;
  Sampler sampler() const override { return Sampler::kAlg5; }
  ChainState Initialize(double theta0, RngStream& rng) override;
  bool Step(ChainState& state, RngStream& rng) override;
  double AuxValue(const ChainState& state) const override;
  // log Z-hat at theta from `proposals()` fresh draws.
  double LogMarginalEstimate(double theta, RngStream& rng);
};

// alg6, MHAAR over u with
// q_{theta,theta'} = f_{S_n}(. | (theta + theta') / 2).
class MhaarKernel : public AdditiveKernel {
 public:
  using AdditiveKernel::AdditiveKernel;
  Sampler sampler() const override { return Sampler::kAlg6; }
  ChainState Initialize(double theta0, RngStream& rng) override;
  bool Step(ChainState& state, RngStream& rng) override;
  double AuxValue(const ChainState& state) const override;

 private:
  std::vector<double> u_;
};

// alg7, MHAAR over the latent uniforms. subset_size == 0 selects full mode.
class LatentMhaarKernel : public Kernel {
 public:
  LatentMhaarKernel(PosteriorProblem problem, RandomWalk proposal,
                    int proposals, int subset_size);
  Sampler sampler() const override { return Sampler::kAlg7; }
  ChainState Initialize(double theta0, RngStream& rng) override;
  bool Step(ChainState& state, RngStream& rng) override;
  // log h(y | z_1..n, theta) from cached bases.
  double LogH(std::span<const double> base, double theta);

 private:
  BatchChannel channel_;
  int proposals_;
  int subset_size_;
  std::vector<std::vector<double>> z_;     // candidate z, index 0 is current
  std::vector<std::vector<double>> base_;  // matching bases
  std::vector<std::size_t> perm_;
  std::vector<double> x_;
  std::vector<double> scratch_;
  std::vector<double> log_h_new_;
  std::vector<double> log_h_old_;
};

// alg8, MHAAR over per-record latents of a sequential release.
class SequentialMhaarKernel : public Kernel {
 public:
  SequentialMhaarKernel(PosteriorProblem problem, RandomWalk proposal,
                        int proposals);
  Sampler sampler() const override { return Sampler::kAlg8; }
  ChainState Initialize(double theta0, RngStream& rng) override;
  bool Step(ChainState& state, RngStream& rng) override;
  // log h(y_t | z_t, theta) from a cached base.
  double LogH(std::size_t t, double base, double theta) const;

 private:
  RecordChannel channel_;
  int proposals_;
  std::vector<double> z_;  // n x N candidates, row-major by record
  std::vector<double> base_;
  std::vector<double> log_h_new_;
  std::vector<double> log_h_old_;
};

struct SamplerOptions {
  int proposals = 10;   // N
  int subset_size = 0;  // alg7: 0 = full mode
};

// Validates compatibility, the release length and the prior, then builds
// the kernel. Positive-parameter families walk on log(theta).
std::unique_ptr<Kernel> MakeKernel(Sampler sampler, PosteriorProblem problem,
                                   double step_scale,
                                   const SamplerOptions& options);

struct ChainTrace {
  std::vector<double> samples;
  std::vector<char> accepted;
  std::vector<double> aux;  // per-iteration AuxValue, may be all NaN
  std::size_t burn_in = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  double step_scale = 0.0;

  double AcceptanceRate() const;
  std::span<const double> PostBurnIn() const {
    return std::span<const double>(samples).subspan(burn_in);
  }
};

// K applications of kernel from state; burn_in = floor(K * fraction).
ChainTrace RunChain(Kernel& kernel, ChainState& state, std::size_t iterations,
                    double burn_in_fraction, RngStream& rng);

struct TuningOptions {
  int batch = 200;
  int max_batches = 25;
  double target_low = 0.25;
  double target_high = 0.40;
};

// Pre-run adapting step_scale in batches toward 25-40% acceptance. The state
// moves along, so the main chain starts from the pre-run's end. Returns the
// tuned scale, also installed in the kernel.
double TuneStepScale(Kernel& kernel, ChainState& state, RngStream& rng,
                     const TuningOptions& options = {});

struct ChainRequest {
  std::size_t iterations = 100000;  // K
  double burn_in_fraction = 0.25;
  // NaN: tuned by a pre-run (alg5 borrows an alg6 kernel with the same N,
  // whose acceptance is not masked by marginal-likelihood noise).
  double step_scale = std::numeric_limits<double>::quiet_NaN();
  // NaN: prior midpoint.
  double theta0 = std::numeric_limits<double>::quiet_NaN();
  SamplerOptions sampler_options;
};

// Builds the kernel, initializes, optionally tunes and runs one chain.
ChainTrace RunPosteriorChain(Sampler sampler, const PosteriorProblem& problem,
                             const ChainRequest& request, RngStream& rng);

// Starting step before tuning: 0.2 on log(theta), else 2% of the prior width.
double InitialStepScale(const PopulationModel& model, const Prior& prior);

}  // namespace dpbayes

#endif  // DPBAYES_MCMC_SAMPLERS_H_
