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

#ifndef DPBAYES_CORE_NUMERIC_H_
#define DPBAYES_CORE_NUMERIC_H_

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "core/rng.h"

namespace dpbayes {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// log(sum_j exp(log_weights[j])). Throws kNumerical("degenerate weights") when
// every entry is -inf, kInvalidArgument when the list is empty.
double LogSumExp(std::span<const double> log_weights);

// Draws index j with probability exp(log_weights[j]) / sum exp(log_weights).
std::size_t SampleWeighted(std::span<const double> log_weights, RngStream& rng);

// Kish effective sample size (sum w)^2 / sum w^2 computed from log weights.
double EffectiveSampleSize(std::span<const double> log_weights);

// Self-normalized weighted average of values under log weights.
double WeightedMean(std::span<const double> log_weights,
                    std::span<const double> values);

// max(1e-5, 1e-5 * |theta|).
double DefaultStep(double theta);

// Central difference (f(theta + h) - f(theta - h)) / (2h), componentwise.
std::vector<double> FiniteDifferenceGradient(
    const std::function<std::vector<double>(double)>& f, double theta,
    double h);

inline double LogNormalDensity(double x, double mean, double variance) {
  const double d = x - mean;
  return -kLogSqrt2Pi - 0.5 * std::log(variance) - 0.5 * d * d / variance;
}

// Runs body(i) for i in [0, count) on up to `threads` worker threads. Each
// index is processed exactly once; callers store results by index so the
// outcome does not depend on scheduling. The first exception thrown by any
// body is rethrown after all workers finish.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& body);

}  // namespace dpbayes

#endif  // DPBAYES_CORE_NUMERIC_H_
