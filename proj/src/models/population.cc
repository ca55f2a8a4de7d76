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

#include "models/population.h"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "core/error.h"
#include "core/numeric.h"

namespace dpbayes {

std::string_view FamilyName(Family family) {
  switch (family) {
    case Family::kNormalMean:
      return "normal_mean";
    case Family::kNormalVariance:
      return "normal_variance";
    case Family::kUniformWidth:
      return "uniform_width";
    case Family::kBernoulli:
      return "bernoulli";
  }
  return "unknown";
}

Family ParseFamily(std::string_view name) {
  for (Family f : {Family::kNormalMean, Family::kNormalVariance,
                   Family::kUniformWidth, Family::kBernoulli}) {
    if (FamilyName(f) == name) return f;
  }
  Fail(ErrorCode::kInvalidArgument,
       "family must be one of normal_mean, normal_variance, uniform_width, "
       "bernoulli (got '" +
           std::string(name) + "')");
}

PopulationModel::PopulationModel(Family family, double support_bound)
    : family_(family), support_bound_(support_bound) {
  if (family != Family::kBernoulli) {
    Require(std::isfinite(support_bound) && support_bound > 0.0,
            ErrorCode::kInvalidArgument, "support_bound must be positive");
  }
}

bool PopulationModel::InDomain(double theta) const {
  if (!std::isfinite(theta)) return false;
  switch (family_) {
    case Family::kNormalMean:
      return true;
    case Family::kNormalVariance:
    case Family::kUniformWidth:
      return theta > 0.0;
    case Family::kBernoulli:
      return theta > 0.0 && theta < 1.0;
  }
  return false;
}

void PopulationModel::CheckDomain(double theta) const {
  if (!InDomain(theta)) {
    Fail(ErrorCode::kOutOfDomain, "theta = " + std::to_string(theta) +
                                      " is outside the domain of " + Name());
  }
}

DensityAndScore PopulationModel::LogDensityAndScore(double theta,
                                                    double x) const {
  CheckDomain(theta);
  if (!std::isfinite(x)) {
    Fail(ErrorCode::kOutOfDomain, "record is not finite");
  }
  switch (family_) {
    case Family::kNormalMean: {
      const double d = x - theta;
      return {-kLogSqrt2Pi - 0.5 * d * d, d};
    }
    case Family::kNormalVariance: {
      const double x2 = x * x;
      return {-kLogSqrt2Pi - 0.5 * std::log(theta) - 0.5 * x2 / theta,
              -0.5 / theta + 0.5 * x2 / (theta * theta)};
    }
    case Family::kUniformWidth:
      if (std::abs(x) > theta) {
        Fail(ErrorCode::kOutOfDomain,
             "record lies outside (-theta, theta) for uniform_width");
      }
      return {-std::log(2.0 * theta), -1.0 / theta};
    case Family::kBernoulli:
      if (x == 1.0) return {std::log(theta), 1.0 / theta};
      if (x == 0.0) return {std::log1p(-theta), -1.0 / (1.0 - theta)};
      Fail(ErrorCode::kOutOfDomain, "bernoulli record must be 0 or 1");
  }
  Fail(ErrorCode::kInternal, "unhandled family");
}

double PopulationModel::LatentBase(double z) const {
  switch (family_) {
    case Family::kNormalMean:
    case Family::kNormalVariance:
      return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * z);
    case Family::kUniformWidth:
    case Family::kBernoulli:
      return z;
  }
  return z;
}

double PopulationModel::FromBase(double theta, double base) const {
  switch (family_) {
    case Family::kNormalMean:
      return theta + base;
    case Family::kNormalVariance:
      return std::sqrt(theta) * base;
    case Family::kUniformWidth:
      return theta * (2.0 * base - 1.0);
    case Family::kBernoulli:
      return base > 1.0 - theta ? 1.0 : 0.0;
  }
  return base;
}

double PopulationModel::Sample(double theta, RngStream& rng) const {
  switch (family_) {
    case Family::kNormalMean:
      return theta + rng.Normal();
    case Family::kNormalVariance:
      return std::sqrt(theta) * rng.Normal();
    case Family::kUniformWidth:
    case Family::kBernoulli:
      return FromBase(theta, rng.Uniform());
  }
  return 0.0;
}

std::vector<double> PopulationModel::SampleMany(double theta, std::size_t n,
                                                RngStream& rng) const {
  CheckDomain(theta);
  std::vector<double> x(n);
  for (double& v : x) v = Sample(theta, rng);
  return x;
}

double PopulationModel::ClampLow() const {
  switch (family_) {
    case Family::kNormalMean:
    case Family::kBernoulli:
      return 0.0;
    case Family::kNormalVariance:
    case Family::kUniformWidth:
      return -support_bound_;
  }
  return 0.0;
}

double PopulationModel::ClampHigh() const {
  return family_ == Family::kBernoulli ? 1.0 : support_bound_;
}

double PopulationModel::Clamp(double x) const {
  return std::clamp(x, ClampLow(), ClampHigh());
}

double PopulationModel::DefaultPriorLow() const {
  switch (family_) {
    case Family::kNormalMean:
      return -50.0;
    case Family::kBernoulli:
      return 0.0;
    default:
      return 0.01;
  }
}

double PopulationModel::DefaultPriorHigh() const {
  return family_ == Family::kBernoulli ? 1.0 : 50.0;
}

bool PopulationModel::PositiveParameter() const {
  return family_ == Family::kNormalVariance || family_ == Family::kUniformWidth;
}

}  // namespace dpbayes
