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

#ifndef DPBAYES_MODELS_POPULATION_H_
#define DPBAYES_MODELS_POPULATION_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "core/rng.h"

namespace dpbayes {

enum class Family {
  kNormalMean,      // N(theta, 1), records declared on (0, A)
  kNormalVariance,  // N(0, theta), records declared on (-A, A)
  kUniformWidth,    // Unif(-theta, theta), records declared on (-A, A)
  kBernoulli,       // Bern(theta), records in {0, 1}
};

std::string_view FamilyName(Family family);
Family ParseFamily(std::string_view name);

struct DensityAndScore {
  double log_density;
  double score;  // d/dtheta log p(x | theta)
};

// A scalar-parameter population P_theta.
//
// Densities and scores are those of the untruncated law. The support bound A
// only enters through Clamp(), which maps realized records into the declared
// range before statistics and sensitivities are computed.
class PopulationModel {
 public:
  PopulationModel(Family family, double support_bound);

  Family family() const { return family_; }
  double support_bound() const { return support_bound_; }
  std::string Name() const { return std::string(FamilyName(family_)); }

  bool InDomain(double theta) const;
  // Throws kOutOfDomain naming the family when theta is outside its domain.
  void CheckDomain(double theta) const;

  DensityAndScore LogDensityAndScore(double theta, double x) const;

  // Inverse CDF phi_theta(z) for z in (0, 1).
  double Transform(double theta, double z) const {
    return FromBase(theta, LatentBase(z));
  }
  // Transform() split into its theta-free and theta-dependent halves, so
  // samplers can cache LatentBase(z) across parameter values.
  double LatentBase(double z) const;
  double FromBase(double theta, double base) const;

  double Sample(double theta, RngStream& rng) const;
  std::vector<double> SampleMany(double theta, std::size_t n,
                                 RngStream& rng) const;

  // Declared record range used for clamping and sensitivities.
  double ClampLow() const;
  double ClampHigh() const;
  double Clamp(double x) const;

  // Default flat-prior interval for theta.
  double DefaultPriorLow() const;
  double DefaultPriorHigh() const;
  // Positive-parameter families run their random walk on log(theta).
  bool PositiveParameter() const;

 private:
  Family family_;
  double support_bound_;
};

}  // namespace dpbayes

#endif  // DPBAYES_MODELS_POPULATION_H_
