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
#include <vector>

#include "core/error.h"
#include "core/rng.h"
#include "gtest/gtest.h"

namespace dpbayes {
namespace {

std::vector<double> Ar1(double rho, std::size_t length, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<double> x(length);
  double v = rng.Normal() / std::sqrt(1.0 - rho * rho);
  for (double& out : x) {
    v = rho * v + rng.Normal();
    out = v;
  }
  return x;
}

TEST(AutocorrelationTest, Ar1LagOne) {
  const std::vector<double> x = Ar1(0.8, 200000, 1);
  const std::vector<double> rho = Autocorrelation(x, 3);
  EXPECT_EQ(rho[0], 1.0);
  EXPECT_NEAR(rho[1], 0.8, 0.01);
  EXPECT_NEAR(rho[2], 0.64, 0.015);
}

TEST(AutocorrelationTest, RejectsDegenerateInput) {
  const std::vector<double> flat(100, 2.0);
  try {
    Autocorrelation(flat, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("zero variance"), std::string::npos);
  }
  const std::vector<double> shortx = {1.0, 2.0};
  EXPECT_THROW(Autocorrelation(shortx, 2), Error);
}

TEST(IacTest, Ar1MatchesTheory) {
  for (double rho : {0.5, 0.8, 0.95}) {
    const std::vector<double> x = Ar1(rho, 400000, 2);
    const double expected = (1.0 + rho) / (1.0 - rho);
    EXPECT_NEAR(IntegratedAutocorrelationTime(x), expected, 0.1 * expected)
        << "rho=" << rho;
  }
}

TEST(IacTest, IndependentSamplesNearOne) {
  RngStream rng(3, 0);
  std::vector<double> x(100000);
  for (double& v : x) v = rng.Normal();
  EXPECT_NEAR(IntegratedAutocorrelationTime(x), 1.0, 0.05);
}

TEST(IacTest, ThinningDecreasesTowardOne) {
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    const std::vector<double> x = Ar1(0.9, 400000, 10 + trial);
    double previous = INFINITY;
    for (std::size_t j : {1, 2, 4, 8, 16, 32}) {
      std::vector<double> thinned;
      for (std::size_t i = 0; i < x.size(); i += j) thinned.push_back(x[i]);
      const double tau = IntegratedAutocorrelationTime(thinned);
      EXPECT_LT(tau, previous * 1.05) << "trial " << trial << " j=" << j;
      previous = tau;
    }
    EXPECT_LT(previous, 1.5);
  }
}

TEST(SummaryTest, McseFromIac) {
  const std::vector<double> x = Ar1(0.8, 100000, 4);
  const PosteriorSummary s = SummarizeSamples(x);
  EXPECT_EQ(s.count, x.size());
  EXPECT_NEAR(s.sd, 1.0 / std::sqrt(1.0 - 0.64), 0.05);
  EXPECT_NEAR(s.mcse, s.sd * std::sqrt(s.iac / x.size()), 1e-15);
}

TEST(SummaryTest, ConstantChain) {
  const std::vector<double> x(50, 3.0);
  const PosteriorSummary s = SummarizeSamples(x);
  EXPECT_EQ(s.mean, 3.0);
  EXPECT_EQ(s.sd, 0.0);
  EXPECT_EQ(s.mcse, 0.0);
  EXPECT_THROW(IntegratedAutocorrelationTime(x), Error);
}

MseSettings SmallMse() {
  MseSettings s;
  s.model = PopulationModel(Family::kNormalVariance, 10.0);
  s.statistics = {StatisticSpec::Parse("mean:abs_power:1"),
                  StatisticSpec::Parse("mean:abs_power:2")};
  s.mechanism.kind = MechanismKind::kGaussian;
  s.mechanism.epsilon = 1.0;
  s.sampler = Sampler::kAlg4;
  s.prior = Prior::Flat(0.01, 20.0);
  s.n = 100;
  s.replicates = 12;
  s.chain.iterations = 3000;
  s.seed = 17;
  return s;
}

TEST(MseTest, DeterministicAcrossThreadCounts) {
  MseSettings s = SmallMse();
  const MseReport a = RunMseExperiment(s);
  s.threads = 3;
  const MseReport b = RunMseExperiment(s);
  EXPECT_EQ(MseReportCsv(a), MseReportCsv(b));
  ASSERT_EQ(a.rows.size(), 2u);
  EXPECT_EQ(a.rows[0].estimates, b.rows[0].estimates);
}

TEST(MseTest, MseBoundsSquaredBias) {
  const MseReport r = RunMseExperiment(SmallMse());
  for (const MseRow& row : r.rows) {
    EXPECT_GE(row.mse + 1e-12, row.bias * row.bias);
    EXPECT_GT(row.se, 0.0);
    double sq = 0.0;
    for (double e : row.estimates) sq += (e - 2.0) * (e - 2.0);
    EXPECT_NEAR(row.mse, sq / row.estimates.size(), 1e-12);
  }
}

TEST(MseTest, CsvHeader) {
  const std::string csv = MseReportCsv(RunMseExperiment(SmallMse()));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "label,mse,se,M,n,epsilon,mechanism,sampler,seed");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(MseTest, RejectsIncompatibleSampler) {
  MseSettings s = SmallMse();
  s.mechanism.kind = MechanismKind::kLaplace;
  EXPECT_THROW(RunMseExperiment(s), Error);
  s = SmallMse();
  s.replicates = 1;
  EXPECT_THROW(RunMseExperiment(s), Error);
}

}  // namespace
}  // namespace dpbayes
