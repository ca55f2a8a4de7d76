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

#ifndef DPBAYES_MODELS_STATISTIC_H_
#define DPBAYES_MODELS_STATISTIC_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "models/population.h"

namespace dpbayes {

enum class RecordMap {
  kAbsPower,     // |x|^a
  kSignedPower,  // sign(x) |x|^a, i.e. x^a for odd a
  kIdentity,
};

enum class Aggregator {
  kMean,
  kMax,
  kMedian,  // lower-middle order statistic
  kNone,    // sequential (per-record) release
};

// Per-record map s(.) plus the aggregator that turns s(x_1..n) into S_n.
//
// Text form is "<aggregator>:<map>[:<power>]", e.g. "mean:abs_power:1",
// "median:abs_power:1", "none:identity".
class StatisticSpec {
 public:
  StatisticSpec(RecordMap map, double power, Aggregator aggregator);

  static StatisticSpec Parse(std::string_view text);
  std::string Label() const;

  RecordMap map() const { return map_; }
  double power() const { return power_; }
  Aggregator aggregator() const { return aggregator_; }
  bool additive() const { return aggregator_ == Aggregator::kMean; }
  bool sequential() const { return aggregator_ == Aggregator::kNone; }

  double Record(double x) const;
  // Aggregates already-mapped values. `values` may be reordered (median).
  double Aggregate(std::span<double> values) const;
  // s applied to every record, then aggregated. No clamping.
  double Apply(std::span<const double> x) const;

 private:
  RecordMap map_;
  double power_;
  Aggregator aggregator_;
};

// Range [low, high] of s over the model's declared record range.
struct RecordRange {
  double low;
  double high;
  double width() const { return high - low; }
};
RecordRange StatisticRange(const PopulationModel& model,
                           const StatisticSpec& statistic);

struct StatisticMoments {
  double mean;               // mu_s(theta)
  double variance;           // Sigma_s(theta)
  double d_mean;             // d mu_s / d theta
  double d_variance;         // d Sigma_s / d theta
  bool approximate = false;  // Monte Carlo fallback was used
};

// Closed forms for the (family, map) pairs that have them; a fixed-seed Monte
// Carlo estimate with 10^5 draws (derivatives by central differences on common
// random numbers) otherwise, flagged approximate.
StatisticMoments ComputeStatisticMoments(const PopulationModel& model,
                                         const StatisticSpec& statistic,
                                         double theta);
bool HasClosedFormMoments(const PopulationModel& model,
                          const StatisticSpec& statistic);

}  // namespace dpbayes

#endif  // DPBAYES_MODELS_STATISTIC_H_
