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

#ifndef DPBAYES_PRIVACY_MECHANISM_H_
#define DPBAYES_PRIVACY_MECHANISM_H_

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/rng.h"
#include "models/population.h"
#include "models/statistic.h"

namespace dpbayes {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Noise scales below this are raised to it when evaluating densities, so an
// exact (epsilon = inf) release still has a usable, very sharp likelihood.
inline constexpr double kScaleFloor = 1e-8;

enum class MechanismKind {
  kGaussian,
  kLaplace,
  kLaplaceSmooth,  // Laplace noise scaled by smooth sensitivity
  kRandomizedResponse,
};

std::string_view MechanismName(MechanismKind kind);
MechanismKind ParseMechanism(std::string_view name);

struct Mechanism {
  MechanismKind kind = MechanismKind::kGaussian;
  double epsilon = 1.0;  // +inf means no noise
  double delta = 0.0;    // laplace_smooth only

  // epsilon > 0 (or +inf); delta in (0, 1) for laplace_smooth.
  void Validate() const;
  bool exact() const { return epsilon == kInfinity; }
};

// alpha = epsilon / 2 and beta = epsilon / (2 ln(2 / delta)).
struct SmoothLaplaceParameters {
  double alpha;
  double beta;
};
SmoothLaplaceParameters SmoothParameters(double epsilon, double delta);

// Log density of zero-mean Gaussian (scale = sd) or Laplace (scale = b)
// noise at `residual`; scale is floored at kScaleFloor.
double NoiseLogDensity(MechanismKind kind, double scale, double residual);

enum class ReleaseMode { kBatch, kSequential };

struct Release {
  ReleaseMode mode = ReleaseMode::kBatch;
  std::vector<double> values;       // one entry for batch, n for sequential
  std::vector<double> noise_scale;  // scale actually used, per value
  Mechanism mechanism;
  std::string statistic;
  int n = 0;
};

// Batch release Y = S_n(clamp(x)) + V.
//
// Gaussian sd and Laplace scale are Delta / (n epsilon) with Delta the range
// of s; laplace_smooth uses Delta^smooth_beta(x) / alpha and is therefore
// data-dependent. Construction throws kIncompatible for mechanism and
// aggregator pairs outside {mean x gaussian, mean x laplace,
// max|median x laplace_smooth}.
class BatchChannel {
 public:
  BatchChannel(const PopulationModel& model, const StatisticSpec& statistic,
               const Mechanism& mechanism, int n);

  struct Evaluation {
    double statistic;
    double scale;
  };

  const Mechanism& mechanism() const { return mechanism_; }
  const StatisticSpec& statistic() const { return statistic_; }
  int n() const { return n_; }
  // True when the noise scale depends on the records, not only on S_n.
  bool data_dependent() const {
    return mechanism_.kind == MechanismKind::kLaplaceSmooth;
  }
  // Noise scale when it is not data-dependent (0 for an exact release).
  double fixed_scale() const { return fixed_scale_; }
  // Standard deviation of the noise for the fixed-scale mechanisms.
  double noise_sd() const;
  const SmoothLaplaceParameters& smooth() const { return smooth_; }

  // S_n and noise scale for records x (clamped before mapping). `scratch`
  // is reused storage.
  Evaluation Evaluate(std::span<const double> x,
                      std::vector<double>& scratch) const;

  // log g(y | u) for fixed-scale mechanisms.
  double LogDensityGivenStatistic(double y, double u) const;
  // log p(y | x_1..n), valid for every batch mechanism.
  double LogDensityGivenData(double y, std::span<const double> x,
                             std::vector<double>& scratch) const;

  Release Apply(std::span<const double> x, RngStream& rng) const;

 private:
  PopulationModel model_;
  StatisticSpec statistic_;
  Mechanism mechanism_;
  int n_;
  RecordRange range_;
  double fixed_scale_ = 0.0;
  SmoothLaplaceParameters smooth_{0.0, 0.0};
};

// Sequential release Y_i = s(clamp(x_i)) + V_i with per-record scale
// Delta / epsilon, or randomized response on binary records.
class RecordChannel {
 public:
  RecordChannel(const PopulationModel& model, const StatisticSpec& statistic,
                const Mechanism& mechanism);

  const Mechanism& mechanism() const { return mechanism_; }
  const StatisticSpec& statistic() const { return statistic_; }
  double scale() const { return scale_; }

  // log h(y | x): density of one released value given its record.
  double LogDensity(double y, double x) const;
  double ReleaseOne(double x, RngStream& rng) const;
  Release Apply(std::span<const double> x, RngStream& rng) const;

 private:
  PopulationModel model_;
  StatisticSpec statistic_;
  Mechanism mechanism_;
  double scale_ = 0.0;
  double log_keep_ = 0.0;
  double log_flip_ = 0.0;
};

Release ReleaseBatch(const PopulationModel& model, std::span<const double> x,
                     const StatisticSpec& statistic, const Mechanism& mechanism,
                     RngStream& rng);
Release ReleaseSequential(const PopulationModel& model,
                          std::span<const double> x,
                          const StatisticSpec& statistic,
                          const Mechanism& mechanism, RngStream& rng);

// Keeps each bit with probability e^eps / (e^eps + 1); eps >= 0 or +inf.
// Throws kInvalidArgument on non-binary input.
std::vector<double> RandomizedResponse(std::span<const double> bits,
                                       double epsilon, RngStream& rng);

}  // namespace dpbayes

#endif  // DPBAYES_PRIVACY_MECHANISM_H_
