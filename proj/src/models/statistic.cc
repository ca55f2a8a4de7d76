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

#include "models/statistic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "core/error.h"
#include "core/numeric.h"
#include "core/rng.h"

namespace dpbayes {
namespace {

constexpr int kFallbackDraws = 100000;
constexpr std::uint64_t kFallbackSeed = 0x5eed0f00d;

std::string_view MapName(RecordMap map) {
  switch (map) {
    case RecordMap::kAbsPower:
      return "abs_power";
    case RecordMap::kSignedPower:
      return "signed_power";
    case RecordMap::kIdentity:
      return "identity";
  }
  return "?";
}

std::string_view AggregatorName(Aggregator agg) {
  switch (agg) {
    case Aggregator::kMean:
      return "mean";
    case Aggregator::kMax:
      return "max";
    case Aggregator::kMedian:
      return "median";
    case Aggregator::kNone:
      return "none";
  }
  return "?";
}

std::vector<std::string_view> SplitColon(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double SignedPow(double x, double a) {
  return std::copysign(std::pow(std::abs(x), a), x);
}

StatisticMoments MonteCarloMoments(const PopulationModel& model,
                                   const StatisticSpec& statistic,
                                   double theta) {
  RngStream rng(kFallbackSeed, 0);
  std::vector<double> z(kFallbackDraws);
  for (double& v : z) v = model.LatentBase(rng.Uniform());
  auto moments_at = [&](double t) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double base : z) {
      const double s = statistic.Record(model.FromBase(t, base));
      sum += s;
      sum_sq += s * s;
    }
    const double mean = sum / kFallbackDraws;
    const double var =
        (sum_sq - kFallbackDraws * mean * mean) / (kFallbackDraws - 1);
    return std::vector<double>{mean, var};
  };
  const std::vector<double> center = moments_at(theta);
  double h = DefaultStep(theta);
  if (model.PositiveParameter()) h = std::min(h, 0.5 * theta);
  const std::vector<double> grad =
      FiniteDifferenceGradient(moments_at, theta, h);
  return {center[0], center[1], grad[0], grad[1], true};
}

}  // namespace

StatisticSpec::StatisticSpec(RecordMap map, double power, Aggregator aggregator)
    : map_(map), power_(power), aggregator_(aggregator) {
  if (map_ == RecordMap::kIdentity) power_ = 1.0;
  Require(std::isfinite(power_) && power_ > 0.0, ErrorCode::kInvalidArgument,
          "statistic power must be positive");
}

StatisticSpec StatisticSpec::Parse(std::string_view text) {
  const std::vector<std::string_view> parts = SplitColon(text);
  auto bad = [&](const std::string& why) -> StatisticSpec {
    Fail(ErrorCode::kInvalidArgument,
         "statistic '" + std::string(text) + "': " + why +
             " (expected <mean|max|median|none>:<abs_power|signed_power|"
             "identity>[:<power>])");
  };
  if (parts.size() < 2 || parts.size() > 3) return bad("malformed");
  Aggregator agg;
  if (parts[0] == "mean") {
    agg = Aggregator::kMean;
  } else if (parts[0] == "max") {
    agg = Aggregator::kMax;
  } else if (parts[0] == "median") {
    agg = Aggregator::kMedian;
  } else if (parts[0] == "none" || parts[0] == "sequential") {
    agg = Aggregator::kNone;
  } else {
    return bad("unknown aggregator");
  }
  RecordMap map;
  if (parts[1] == "abs_power") {
    map = RecordMap::kAbsPower;
  } else if (parts[1] == "signed_power") {
    map = RecordMap::kSignedPower;
  } else if (parts[1] == "identity") {
    map = RecordMap::kIdentity;
  } else {
    return bad("unknown record map");
  }
  double power = 1.0;
  if (map != RecordMap::kIdentity) {
    if (parts.size() != 3) return bad("missing power");
    try {
      std::size_t used = 0;
      power = std::stod(std::string(parts[2]), &used);
      if (used != parts[2].size()) return bad("bad power");
    } catch (const std::exception&) {
      return bad("bad power");
    }
    if (!(power > 0.0)) return bad("power must be positive");
  } else if (parts.size() == 3) {
    return bad("identity takes no power");
  }
  return StatisticSpec(map, power, agg);
}

std::string StatisticSpec::Label() const {
  std::string label = std::string(AggregatorName(aggregator_)) + ":" +
                      std::string(MapName(map_));
  if (map_ != RecordMap::kIdentity) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", power_);
    label += ":";
    label += buf;
  }
  return label;
}

double StatisticSpec::Record(double x) const {
  switch (map_) {
    case RecordMap::kAbsPower: {
      const double ax = std::abs(x);
      if (power_ == 1.0) return ax;
      if (power_ == 2.0) return ax * ax;
      return std::pow(ax, power_);
    }
    case RecordMap::kSignedPower:
      if (power_ == 1.0) return x;
      return SignedPow(x, power_);
    case RecordMap::kIdentity:
      return x;
  }
  return x;
}

double StatisticSpec::Aggregate(std::span<double> values) const {
  Require(!values.empty(), ErrorCode::kInvalidArgument,
          "statistic of an empty dataset");
  switch (aggregator_) {
    case Aggregator::kMean:
      return std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
    case Aggregator::kMax:
      return *std::max_element(values.begin(), values.end());
    case Aggregator::kMedian: {
      const std::size_t m = (values.size() + 1) / 2 - 1;
      std::nth_element(values.begin(), values.begin() + m, values.end());
      return values[m];
    }
    case Aggregator::kNone:
      Fail(ErrorCode::kInvalidArgument,
           "sequential statistic has no aggregate value");
  }
  return 0.0;
}

double StatisticSpec::Apply(std::span<const double> x) const {
  std::vector<double> s(x.size());
  std::transform(x.begin(), x.end(), s.begin(),
                 [this](double v) { return Record(v); });
  return Aggregate(s);
}

RecordRange StatisticRange(const PopulationModel& model,
                           const StatisticSpec& statistic) {
  const double lo = model.ClampLow();
  const double hi = model.ClampHigh();
  switch (statistic.map()) {
    case RecordMap::kAbsPower: {
      const double a = statistic.power();
      const double far = std::max(std::abs(lo), std::abs(hi));
      const double near =
          (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
      return {std::pow(near, a), std::pow(far, a)};
    }
    case RecordMap::kSignedPower:
      return {statistic.Record(lo), statistic.Record(hi)};
    case RecordMap::kIdentity:
      return {lo, hi};
  }
  return {lo, hi};
}

bool HasClosedFormMoments(const PopulationModel& model,
                          const StatisticSpec& statistic) {
  switch (model.family()) {
    case Family::kNormalMean:
      return (statistic.map() == RecordMap::kSignedPower &&
              (statistic.power() == 1.0 || statistic.power() == 3.0)) ||
             statistic.map() == RecordMap::kIdentity;
    case Family::kNormalVariance:
    case Family::kUniformWidth:
      return statistic.map() == RecordMap::kAbsPower;
    case Family::kBernoulli:
      // Every map sends {0, 1} to itself.
      return true;
  }
  return false;
}

StatisticMoments ComputeStatisticMoments(const PopulationModel& model,
                                         const StatisticSpec& statistic,
                                         double theta) {
  model.CheckDomain(theta);
  if (!HasClosedFormMoments(model, statistic)) {
    return MonteCarloMoments(model, statistic, theta);
  }
  const double a = statistic.power();
  switch (model.family()) {
    case Family::kNormalMean: {
      if (a == 1.0) return {theta, 1.0, 1.0, 0.0};
      const double t2 = theta * theta;
      return {theta * t2 + 3.0 * theta, 9.0 * t2 * t2 + 36.0 * t2 + 15.0,
              3.0 * t2 + 3.0, 36.0 * t2 * theta + 72.0 * theta};
    }
    case Family::kNormalVariance: {
      const double c1 =
          std::tgamma(0.5 * (a + 1.0)) / std::sqrt(std::numbers::pi);
      const double c2 =
          std::tgamma(0.5 * (2.0 * a + 1.0)) / std::sqrt(std::numbers::pi) -
          c1 * c1;
      const double mean = std::pow(2.0 * theta, 0.5 * a) * c1;
      const double var = std::pow(2.0 * theta, a) * c2;
      return {mean, var, 0.5 * a * mean / theta, a * var / theta};
    }
    case Family::kUniformWidth: {
      const double mean = std::pow(theta, a) / (a + 1.0);
      const double var = std::pow(theta, 2.0 * a) * a * a /
                         ((a + 1.0) * (a + 1.0) * (2.0 * a + 1.0));
      return {mean, var, a * mean / theta, 2.0 * a * var / theta};
    }
    case Family::kBernoulli:
      return {theta, theta * (1.0 - theta), 1.0, 1.0 - 2.0 * theta};
  }
  Fail(ErrorCode::kInternal, "unhandled family");
}

}  // namespace dpbayes
