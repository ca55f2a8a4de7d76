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

#ifndef DPBAYES_PRIVACY_SENSITIVITY_H_
#define DPBAYES_PRIVACY_SENSITIVITY_H_

#include <span>

#include "models/population.h"
#include "models/statistic.h"

namespace dpbayes {

// Global sensitivity of S_n over the model's declared record range. Scalar
// outputs, so L1 and L2 coincide: the range of s for max / median /
// per-record release, the range divided by n for the mean.
double GlobalSensitivity(const StatisticSpec& statistic,
                         const PopulationModel& model, int n);

// The functions below take s-values sorted ascending and shifted so that the
// smallest attainable value is 0, with range_max = A_s the largest. Order
// statistics outside [1, n] read as 0 below and A_s above. They throw
// kInvalidArgument on unsorted or out-of-range input.

double LocalSensitivityMax(std::span<const double> sorted, double range_max);
double LocalSensitivityMedian(std::span<const double> sorted, double range_max);

// max_{k=0..n} exp(-k beta) b_k. beta may be +inf (local sensitivity).
double SmoothSensitivityMax(std::span<const double> sorted, double range_max,
                            double beta);
double SmoothSensitivityMedian(std::span<const double> sorted, double range_max,
                               double beta);

// Same as above without input validation; used on hot paths where the caller
// has just sorted clamped values.
double SmoothSensitivityMaxUnchecked(std::span<const double> sorted,
                                     double range_max, double beta);
double SmoothSensitivityMedianUnchecked(std::span<const double> sorted,
                                        double range_max, double beta);

}  // namespace dpbayes

#endif  // DPBAYES_PRIVACY_SENSITIVITY_H_
