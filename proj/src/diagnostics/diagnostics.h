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

#ifndef DPBAYES_DIAGNOSTICS_DIAGNOSTICS_H_
#define DPBAYES_DIAGNOSTICS_DIAGNOSTICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcmc/samplers.h"
#include "models/population.h"
#include "models/statistic.h"
#include "privacy/mechanism.h"

namespace dpbayes {

// Biased (1/T) sample autocorrelations rho(0..max_lag). Throws
// kInvalidArgument("zero variance") for a constant series.
std::vector<double> Autocorrelation(std::span<const double> series,
                                    std::size_t max_lag);

// 1 + 2 sum_{k<=W} rho(k) with the Sokal window: the smallest W with
// W >= c (1 + 2 sum_{j<=W} rho(j)). Never below 1.
double IntegratedAutocorrelationTime(std::span<const double> series,
                                     double window_constant = 5.0);

struct PosteriorSummary {
  double mean = 0.0;
  double sd = 0.0;
  double mcse = 0.0;  // sd * sqrt(IAC / T)
  double iac = 1.0;
  std::size_t count = 0;
};

// Summary of samples; a constant series gives sd = mcse = 0 and iac = 1.
PosteriorSummary SummarizeSamples(std::span<const double> samples);
// Same on the post-burn-in part of the trace.
PosteriorSummary SummarizePosterior(const ChainTrace& trace);

struct MseSettings {
  PopulationModel model{Family::kNormalVariance, 10.0};
  std::vector<StatisticSpec> statistics;
  Mechanism mechanism;
  Sampler sampler = Sampler::kAlg4;
  Prior prior = Prior::Flat(0.01, 50.0);
  double theta_true = 2.0;
  int n = 100;
  int replicates = 100;  // M
  ChainRequest chain;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct MseRow {
  std::string label;
  double mse = 0.0;
  double se = 0.0;                // from replicate-level squared errors
  double bias = 0.0;              // mean estimate minus theta*
  std::vector<double> estimates;  // posterior means by replicate
};

struct MseReport {
  std::vector<MseRow> rows;  // in statistic order
  int replicates = 0;
  int n = 0;
  double epsilon = 0.0;
  std::string mechanism;
  std::string sampler;
  std::uint64_t seed = 0;
  double theta_true = 0.0;
};

// Replicate i draws data from stream (seed, i); every candidate statistic
// sees the same data, with its release and chain on child streams.
MseReport RunMseExperiment(const MseSettings& settings);

// Header label,mse,se,M,n,epsilon,mechanism,sampler,seed; rows by label.
std::string MseReportCsv(const MseReport& report);

}  // namespace dpbayes

#endif  // DPBAYES_DIAGNOSTICS_DIAGNOSTICS_H_
