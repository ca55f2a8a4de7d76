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

#include "privacy/mechanism.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "core/error.h"
#include "core/numeric.h"
#include "privacy/sensitivity.h"

namespace dpbayes {

std::string_view MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kGaussian:
      return "gaussian";
    case MechanismKind::kLaplace:
      return "laplace";
    case MechanismKind::kLaplaceSmooth:
      return "laplace_smooth";
    case MechanismKind::kRandomizedResponse:
      return "randomized_response";
  }
  return "?";
}

MechanismKind ParseMechanism(std::string_view name) {
  for (MechanismKind k :
       {MechanismKind::kGaussian, MechanismKind::kLaplace,
        MechanismKind::kLaplaceSmooth, MechanismKind::kRandomizedResponse}) {
    if (MechanismName(k) == name) return k;
  }
  Fail(ErrorCode::kInvalidArgument,
       "mechanism must be one of gaussian, laplace, laplace_smooth, "
       "randomized_response (got '" +
           std::string(name) + "')");
}

void Mechanism::Validate() const {
  Require(epsilon > 0.0 && !std::isnan(epsilon), ErrorCode::kInvalidArgument,
          "epsilon must be positive or inf");
  if (kind == MechanismKind::kLaplaceSmooth) {
    Require(delta > 0.0 && delta < 1.0, ErrorCode::kInvalidArgument,
            "delta must lie in (0, 1) for laplace_smooth");
  }
}

SmoothLaplaceParameters SmoothParameters(double epsilon, double delta) {
  Require(delta > 0.0 && delta < 1.0, ErrorCode::kInvalidArgument,
          "delta must lie in (0, 1) for laplace_smooth");
  return {0.5 * epsilon, epsilon / (2.0 * std::log(2.0 / delta))};
}

double NoiseLogDensity(MechanismKind kind, double scale, double residual) {
  const double b = std::max(scale, kScaleFloor);
  if (kind == MechanismKind::kGaussian) {
    return -kLogSqrt2Pi - std::log(b) - 0.5 * (residual / b) * (residual / b);
  }
  return -std::numbers::ln2 - std::log(b) - std::abs(residual) / b;
}

BatchChannel::BatchChannel(const PopulationModel& model,
                           const StatisticSpec& statistic,
                           const Mechanism& mechanism, int n)
    : model_(model),
      statistic_(statistic),
      mechanism_(mechanism),
      n_(n),
      range_(StatisticRange(model, statistic)) {
  mechanism_.Validate();
  Require(n >= 1, ErrorCode::kInvalidArgument, "n must be at least 1");
  const Aggregator agg = statistic.aggregator();
  switch (mechanism_.kind) {
    case MechanismKind::kGaussian:
    case MechanismKind::kLaplace:
      Require(agg == Aggregator::kMean, ErrorCode::kIncompatible,
              std::string(MechanismName(mechanism_.kind)) +
                  " batch release requires the mean aggregator (got " +
                  statistic.Label() + ")");
      fixed_scale_ =
          mechanism_.exact()
              ? 0.0
              : GlobalSensitivity(statistic, model, n) / mechanism_.epsilon;
      break;
    case MechanismKind::kLaplaceSmooth:
      Require(agg == Aggregator::kMax || agg == Aggregator::kMedian,
              ErrorCode::kIncompatible,
              "laplace_smooth batch release requires the max or median "
              "aggregator (got " +
                  statistic.Label() + ")");
      smooth_ = SmoothParameters(mechanism_.epsilon, mechanism_.delta);
      break;
    case MechanismKind::kRandomizedResponse:
      Fail(ErrorCode::kIncompatible,
           "randomized_response is a per-record mechanism; use a sequential "
           "release");
  }
}

double BatchChannel::noise_sd() const {
  return mechanism_.kind == MechanismKind::kLaplace
             ? std::numbers::sqrt2 * fixed_scale_
             : fixed_scale_;
}

BatchChannel::Evaluation BatchChannel::Evaluate(
    std::span<const double> x, std::vector<double>& scratch) const {
  Require(!x.empty(), ErrorCode::kInvalidArgument,
          "statistic of an empty dataset");
  if (!data_dependent()) {
    double sum = 0.0;
    for (double v : x) sum += statistic_.Record(model_.Clamp(v));
    return {sum / static_cast<double>(x.size()), fixed_scale_};
  }
  scratch.resize(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double s = statistic_.Record(model_.Clamp(x[t])) - range_.low;
    scratch[t] = std::clamp(s, 0.0, range_.width());
  }
  std::sort(scratch.begin(), scratch.end());
  const double width = range_.width();
  double value;
  double sensitivity;
  if (statistic_.aggregator() == Aggregator::kMax) {
    value = scratch.back();
    sensitivity = SmoothSensitivityMaxUnchecked(scratch, width, smooth_.beta);
  } else {
    value = scratch[(scratch.size() + 1) / 2 - 1];
    sensitivity =
        SmoothSensitivityMedianUnchecked(scratch, width, smooth_.beta);
  }
  const double scale = mechanism_.exact() ? 0.0 : sensitivity / smooth_.alpha;
  return {value + range_.low, scale};
}

double BatchChannel::LogDensityGivenStatistic(double y, double u) const {
  Require(!data_dependent(), ErrorCode::kInvalidArgument,
          "laplace_smooth density needs the full dataset");
  return NoiseLogDensity(mechanism_.kind, fixed_scale_, y - u);
}

double BatchChannel::LogDensityGivenData(double y, std::span<const double> x,
                                         std::vector<double>& scratch) const {
  const Evaluation e = Evaluate(x, scratch);
  const MechanismKind kind = mechanism_.kind == MechanismKind::kGaussian
                                 ? MechanismKind::kGaussian
                                 : MechanismKind::kLaplace;
  return NoiseLogDensity(kind, e.scale, y - e.statistic);
}

Release BatchChannel::Apply(std::span<const double> x, RngStream& rng) const {
  std::vector<double> scratch;
  const Evaluation e = Evaluate(x, scratch);
  double noise = 0.0;
  if (e.scale > 0.0) {
    noise = mechanism_.kind == MechanismKind::kGaussian ? e.scale * rng.Normal()
                                                        : rng.Laplace(e.scale);
  }
  Release r;
  r.mode = ReleaseMode::kBatch;
  r.values = {e.statistic + noise};
  r.noise_scale = {e.scale};
  r.mechanism = mechanism_;
  r.statistic = statistic_.Label();
  r.n = static_cast<int>(x.size());
  return r;
}

RecordChannel::RecordChannel(const PopulationModel& model,
                             const StatisticSpec& statistic,
                             const Mechanism& mechanism)
    : model_(model), statistic_(statistic), mechanism_(mechanism) {
  Require(statistic.sequential(), ErrorCode::kIncompatible,
          "sequential release requires aggregator 'none' (got " +
              statistic.Label() + ")");
  if (mechanism_.kind == MechanismKind::kRandomizedResponse) {
    Require(!std::isnan(mechanism_.epsilon) && mechanism_.epsilon >= 0.0,
            ErrorCode::kInvalidArgument, "epsilon must be positive or inf");
    Require(model.family() == Family::kBernoulli, ErrorCode::kIncompatible,
            "randomized_response requires binary (bernoulli) records");
    if (mechanism_.exact()) {
      log_keep_ = 0.0;
      log_flip_ = -kInfinity;
    } else {
      const double e = mechanism_.epsilon;
      log_keep_ = -std::log1p(std::exp(-e));
      log_flip_ = -e - std::log1p(std::exp(-e));
    }
    return;
  }
  mechanism_.Validate();
  Require(mechanism_.kind != MechanismKind::kLaplaceSmooth,
          ErrorCode::kIncompatible,
          "laplace_smooth applies to batch max/median releases only");
  scale_ = mechanism_.exact()
               ? 0.0
               : GlobalSensitivity(statistic, model, 1) / mechanism_.epsilon;
}

double RecordChannel::LogDensity(double y, double x) const {
  const double s = statistic_.Record(model_.Clamp(x));
  if (mechanism_.kind == MechanismKind::kRandomizedResponse) {
    return y == s ? log_keep_ : log_flip_;
  }
  return NoiseLogDensity(mechanism_.kind, scale_, y - s);
}

double RecordChannel::ReleaseOne(double x, RngStream& rng) const {
  const double s = statistic_.Record(model_.Clamp(x));
  if (mechanism_.kind == MechanismKind::kRandomizedResponse) {
    if (mechanism_.exact()) return s;
    const double keep = 1.0 / (1.0 + std::exp(-mechanism_.epsilon));
    return rng.Uniform() < keep ? s : 1.0 - s;
  }
  if (scale_ == 0.0) return s;
  return mechanism_.kind == MechanismKind::kGaussian ? s + scale_ * rng.Normal()
                                                     : s + rng.Laplace(scale_);
}

Release RecordChannel::Apply(std::span<const double> x, RngStream& rng) const {
  Release r;
  r.mode = ReleaseMode::kSequential;
  r.values.reserve(x.size());
  for (double v : x) r.values.push_back(ReleaseOne(v, rng));
  r.noise_scale.assign(x.size(), scale_);
  r.mechanism = mechanism_;
  r.statistic = statistic_.Label();
  r.n = static_cast<int>(x.size());
  return r;
}

Release ReleaseBatch(const PopulationModel& model, std::span<const double> x,
                     const StatisticSpec& statistic, const Mechanism& mechanism,
                     RngStream& rng) {
  return BatchChannel(model, statistic, mechanism, static_cast<int>(x.size()))
      .Apply(x, rng);
}

Release ReleaseSequential(const PopulationModel& model,
                          std::span<const double> x,
                          const StatisticSpec& statistic,
                          const Mechanism& mechanism, RngStream& rng) {
  return RecordChannel(model, statistic, mechanism).Apply(x, rng);
}

std::vector<double> RandomizedResponse(std::span<const double> bits,
                                       double epsilon, RngStream& rng) {
  Require(!std::isnan(epsilon) && epsilon >= 0.0, ErrorCode::kInvalidArgument,
          "epsilon must be positive or inf");
  const double keep =
      epsilon == kInfinity ? 1.0 : 1.0 / (1.0 + std::exp(-epsilon));
  std::vector<double> out;
  out.reserve(bits.size());
  for (double b : bits) {
    Require(b == 0.0 || b == 1.0, ErrorCode::kInvalidArgument,
            "randomized response needs binary input");
    out.push_back(rng.Uniform() < keep ? b : 1.0 - b);
  }
  return out;
}

}  // namespace dpbayes
