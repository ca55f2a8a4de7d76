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

#include "diagnostics/diagnostics.h"

#include <cmath>
#include <numeric>

#include "core/csv.h"
#include "core/error.h"
#include "core/numeric.h"
#include "core/rng.h"

namespace dpbayes {
namespace {

struct Centered {
  std::vector<double> values;
  double variance;  // 1/T normalization
};

Centered Center(std::span<const double> series) {
  const double t = static_cast<double>(series.size());
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / t;
  Centered c{std::vector<double>(series.size()), 0.0};
  for (std::size_t i = 0; i < series.size(); ++i) {
    c.values[i] = series[i] - mean;
    c.variance += c.values[i] * c.values[i];
  }
  c.variance /= t;
  return c;
}

double Lag(const Centered& c, std::size_t k) {
  double sum = 0.0;
  const std::size_t t = c.values.size();
  for (std::size_t i = 0; i + k < t; ++i) sum += c.values[i] * c.values[i + k];
  return sum / static_cast<double>(t) / c.variance;
}

bool Constant(std::span<const double> series) {
  for (double v : series) {
    if (v != series[0]) return false;
  }
  return true;
}

}  // namespace

std::vector<double> Autocorrelation(std::span<const double> series,
                                    std::size_t max_lag) {
  Require(series.size() > max_lag, ErrorCode::kInvalidArgument,
          "autocorrelation: series length must exceed max_lag");
  Require(!Constant(series), ErrorCode::kNumerical, "zero variance");
  const Centered c = Center(series);
  std::vector<double> rho(max_lag + 1);
  rho[0] = 1.0;
  for (std::size_t k = 1; k <= max_lag; ++k) rho[k] = Lag(c, k);
  return rho;
}

double IntegratedAutocorrelationTime(std::span<const double> series,
                                     double window_constant) {
  Require(series.size() >= 2, ErrorCode::kInvalidArgument,
          "iac: series needs at least two values");
  Require(!Constant(series), ErrorCode::kNumerical, "zero variance");
  const Centered c = Center(series);
  double tau = 1.0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    tau += 2.0 * Lag(c, k);
    if (static_cast<double>(k) >= window_constant * tau) break;
  }
  return std::max(tau, 1.0);
}

PosteriorSummary SummarizeSamples(std::span<const double> samples) {
  Require(!samples.empty(), ErrorCode::kInvalidArgument,
          "posterior summary needs post-burn-in samples");
  PosteriorSummary s;
  s.count = samples.size();
  const double t = static_cast<double>(samples.size());
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / t;
  if (samples.size() < 2 || Constant(samples)) return s;
  double ss = 0.0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / (t - 1.0));
  s.iac = IntegratedAutocorrelationTime(samples);
  s.mcse = s.sd * std::sqrt(s.iac / t);
  return s;
}

PosteriorSummary SummarizePosterior(const ChainTrace& trace) {
  return SummarizeSamples(trace.PostBurnIn());
}

MseReport RunMseExperiment(const MseSettings& settings) {
  Require(settings.replicates >= 2, ErrorCode::kInvalidArgument,
          "replicates (M) must be at least 2");
  Require(!settings.statistics.empty(), ErrorCode::kInvalidArgument,
          "mse experiment needs at least one statistic");
  Require(settings.n >= 1, ErrorCode::kInvalidArgument, "n must be at least 1");
  Require(settings.threads >= 1, ErrorCode::kInvalidArgument,
          "threads must be at least 1");
  settings.model.CheckDomain(settings.theta_true);
  if (settings.mechanism.kind != MechanismKind::kRandomizedResponse) {
    settings.mechanism.Validate();
  }
  for (const StatisticSpec& stat : settings.statistics) {
    CheckSamplerCompatibility(settings.sampler, stat, settings.mechanism);
  }

  const std::size_t m = settings.replicates;
  const std::size_t s_count = settings.statistics.size();
  std::vector<double> estimates(m * s_count);
  ParallelFor(m, settings.threads, [&](std::size_t i) {
    RngStream data_rng(settings.seed, i);
    const std::vector<double> x =
        settings.model.SampleMany(settings.theta_true, settings.n, data_rng);
    for (std::size_t j = 0; j < s_count; ++j) {
      const StatisticSpec& stat = settings.statistics[j];
      RngStream rng = data_rng.Child(j + 1);
      const Release release =
          stat.sequential()
              ? ReleaseSequential(settings.model, x, stat, settings.mechanism,
                                  rng)
              : ReleaseBatch(settings.model, x, stat, settings.mechanism, rng);
      const PosteriorProblem problem{settings.model,     stat,
                                     settings.mechanism, settings.n,
                                     release.values,     settings.prior};
      const ChainTrace trace =
          RunPosteriorChain(settings.sampler, problem, settings.chain, rng);
      estimates[i * s_count + j] = SummarizePosterior(trace).mean;
    }
  });

  MseReport report;
  report.replicates = settings.replicates;
  report.n = settings.n;
  report.epsilon = settings.mechanism.epsilon;
  report.mechanism = std::string(MechanismName(settings.mechanism.kind));
  report.sampler = std::string(SamplerName(settings.sampler));
  report.seed = settings.seed;
  report.theta_true = settings.theta_true;
  for (std::size_t j = 0; j < s_count; ++j) {
    MseRow row;
    row.label = settings.statistics[j].Label();
    double sum_sq = 0.0;
    double sum = 0.0;
    std::vector<double> sq(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double est = estimates[i * s_count + j];
      row.estimates.push_back(est);
      const double e = est - settings.theta_true;
      sq[i] = e * e;
      sum_sq += sq[i];
      sum += est;
    }
    const double md = static_cast<double>(m);
    row.mse = sum_sq / md;
    double ss = 0.0;
    for (double v : sq) ss += (v - row.mse) * (v - row.mse);
    row.se = std::sqrt(ss / (md - 1.0) / md);
    row.bias = sum / md - settings.theta_true;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string MseReportCsv(const MseReport& report) {
  CsvTable table({"label", "mse", "se", "M", "n", "epsilon", "mechanism",
                  "sampler", "seed"});
  for (const MseRow& row : report.rows) {
    table.AddRow({row.label, FormatDouble(row.mse), FormatDouble(row.se),
                  std::to_string(report.replicates), std::to_string(report.n),
                  FormatDouble(report.epsilon), report.mechanism,
                  report.sampler, std::to_string(report.seed)});
  }
  table.SortByLeadingColumns(2);
  return table.ToString();
}

}  // namespace dpbayes
