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

#include "privacy/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.h"

namespace dpbayes {
namespace {

void ValidateSorted(std::span<const double> sorted, double range_max) {
  Require(!sorted.empty(), ErrorCode::kInvalidArgument,
          "sensitivity of an empty dataset");
  Require(std::isfinite(range_max) && range_max >= 0.0,
          ErrorCode::kInvalidArgument, "A_s must be finite and non-negative");
  Require(std::is_sorted(sorted.begin(), sorted.end()),
          ErrorCode::kInvalidArgument, "s-values must be sorted ascending");
  Require(sorted.front() >= 0.0 && sorted.back() <= range_max,
          ErrorCode::kInvalidArgument, "s-values must lie in [0, A_s]");
}

// s_j with the out-of-range convention, 1-based.
struct OrderStatistics {
  std::span<const double> s;
  double top;
  double operator()(long j) const {
    if (j <= 0) return 0.0;
    if (j > static_cast<long>(s.size())) return top;
    return s[static_cast<std::size_t>(j - 1)];
  }
};

double MaxGap(const OrderStatistics& s, long n, long k) {
  return std::max(s.top - s(n - k), s(n) - s(n - k - 1));
}

double MedianGap(const OrderStatistics& s, long n, long k) {
  const long m = (n + 1) / 2;
  double b = 0.0;
  for (long i = 0; i <= k + 1; ++i)
    b = std::max(b, s(m + i) - s(m + i - k - 1));
  return b;
}

template <typename Gap>
double Smooth(std::span<const double> sorted, double range_max, double beta,
              Gap gap) {
  const OrderStatistics s{sorted, range_max};
  const long n = static_cast<long>(sorted.size());
  double best = gap(s, n, 0);
  if (beta == std::numeric_limits<double>::infinity()) return best;
  for (long k = 1; k <= n; ++k) {
    const double decay = std::exp(-static_cast<double>(k) * beta);
    // Every b_k is at most A_s, so later terms cannot win.
    if (decay * range_max <= best) break;
    best = std::max(best, decay * gap(s, n, k));
  }
  return best;
}

}  // namespace

double GlobalSensitivity(const StatisticSpec& statistic,
                         const PopulationModel& model, int n) {
  Require(n >= 1, ErrorCode::kInvalidArgument, "n must be at least 1");
  const RecordRange range = StatisticRange(model, statistic);
  Require(std::isfinite(range.width()), ErrorCode::kInvalidArgument,
          "statistic is unbounded on the support");
  if (statistic.aggregator() == Aggregator::kMean) return range.width() / n;
  return range.width();
}

double LocalSensitivityMax(std::span<const double> sorted, double range_max) {
  ValidateSorted(sorted, range_max);
  const OrderStatistics s{sorted, range_max};
  return MaxGap(s, static_cast<long>(sorted.size()), 0);
}

double LocalSensitivityMedian(std::span<const double> sorted,
                              double range_max) {
  ValidateSorted(sorted, range_max);
  const OrderStatistics s{sorted, range_max};
  return MedianGap(s, static_cast<long>(sorted.size()), 0);
}

double SmoothSensitivityMax(std::span<const double> sorted, double range_max,
                            double beta) {
  ValidateSorted(sorted, range_max);
  Require(beta >= 0.0, ErrorCode::kInvalidArgument, "beta must be >= 0");
  return SmoothSensitivityMaxUnchecked(sorted, range_max, beta);
}

double SmoothSensitivityMedian(std::span<const double> sorted, double range_max,
                               double beta) {
  ValidateSorted(sorted, range_max);
  Require(beta >= 0.0, ErrorCode::kInvalidArgument, "beta must be >= 0");
  return SmoothSensitivityMedianUnchecked(sorted, range_max, beta);
}

double SmoothSensitivityMaxUnchecked(std::span<const double> sorted,
                                     double range_max, double beta) {
  return Smooth(sorted, range_max, beta, MaxGap);
}

double SmoothSensitivityMedianUnchecked(std::span<const double> sorted,
                                        double range_max, double beta) {
  return Smooth(sorted, range_max, beta, MedianGap);
}

}  // namespace dpbayes
