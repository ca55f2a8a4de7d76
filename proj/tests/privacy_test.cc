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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "core/error.h"
#include "core/rng.h"
#include "gtest/gtest.h"
#include "models/population.h"
#include "models/statistic.h"
#include "oracles.h"
#include "privacy/mechanism.h"
#include "privacy/sensitivity.h"

namespace dpbayes {
namespace {

Mechanism Make(MechanismKind kind, double epsilon, double delta = 0.0) {
  Mechanism m;
  m.kind = kind;
  m.epsilon = epsilon;
  m.delta = delta;
  return m;
}

TEST(SensitivityTest, GlobalSensitivityOfMeansAndOrderStatistics) {
  const PopulationModel nv(Family::kNormalVariance, 10.0);
  EXPECT_DOUBLE_EQ(
      GlobalSensitivity(StatisticSpec::Parse("mean:abs_power:1"), nv, 100),
      0.1);
  EXPECT_DOUBLE_EQ(
      GlobalSensitivity(StatisticSpec::Parse("mean:abs_power:2"), nv, 100),
      1.0);
  EXPECT_DOUBLE_EQ(
      GlobalSensitivity(StatisticSpec::Parse("max:identity"), nv, 100), 20.0);
  EXPECT_DOUBLE_EQ(
      GlobalSensitivity(StatisticSpec::Parse("none:abs_power:2"), nv, 1),
      100.0);
}

TEST(SensitivityTest, LocalSensitivityExamples) {
  const std::vector<double> x = {1.0, 2.0, 9.0};
  EXPECT_DOUBLE_EQ(LocalSensitivityMax(x, 10.0), 7.0);
  // Median x_(2) = 2 moves to 1 or 9.
  EXPECT_DOUBLE_EQ(LocalSensitivityMedian(x, 10.0), 7.0);
  const std::vector<double> y = {3.0, 4.0, 4.5, 8.0};
  EXPECT_DOUBLE_EQ(LocalSensitivityMax(y, 10.0), 3.5);
}

TEST(SensitivityTest, InfiniteBetaIsLocalSensitivity) {
  const std::vector<double> x = {0.5, 1.0, 2.0, 6.0, 7.0};
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(SmoothSensitivityMax(x, 10.0, inf),
                   LocalSensitivityMax(x, 10.0));
  EXPECT_DOUBLE_EQ(SmoothSensitivityMedian(x, 10.0, inf),
                   LocalSensitivityMedian(x, 10.0));
}

TEST(SensitivityTest, ZeroBetaIsGlobalRange) {
  const std::vector<double> x = {4.0, 5.0, 6.0};
  EXPECT_DOUBLE_EQ(SmoothSensitivityMax(x, 10.0, 0.0), 10.0);
  EXPECT_DOUBLE_EQ(SmoothSensitivityMedian(x, 10.0, 0.0), 10.0);
}

TEST(SensitivityTest, RejectsBadInput) {
  const std::vector<double> unsorted = {3.0, 1.0};
  EXPECT_THROW(SmoothSensitivityMax(unsorted, 10.0, 0.1), Error);
  const std::vector<double> outside = {1.0, 11.0};
  EXPECT_THROW(SmoothSensitivityMedian(outside, 10.0, 0.1), Error);
  const std::vector<double> ok = {1.0, 2.0};
  EXPECT_THROW(SmoothSensitivityMax(ok, 10.0, -1.0), Error);
  EXPECT_THROW(SmoothSensitivityMax(std::vector<double>{}, 10.0, 0.1), Error);
}

class SmoothBruteForceTest : public ::testing::TestWithParam<int> {};

TEST_P(SmoothBruteForceTest, MatchesExhaustiveDefinition) {
  const int n = GetParam();
  const double a = 10.0;
  std::vector<double> grid;
  for (int i = 0; i <= 5; ++i) grid.push_back(a * i / 5.0);
  std::vector<oracle::Multiset> sets;
  oracle::EnumerateMultisets(n, static_cast<int>(grid.size()), sets);
  for (double beta : {0.05, 0.3, 1.5}) {
    for (oracle::Target target :
         {oracle::Target::kMax, oracle::Target::kMedian}) {
      const std::vector<double> expected =
          oracle::BruteForceSmooth(target, sets, grid, beta);
      for (std::size_t i = 0; i < sets.size(); ++i) {
        std::vector<double> x;
        for (int v : sets[i].values) x.push_back(grid[v]);
        const double got = target == oracle::Target::kMax
                               ? SmoothSensitivityMax(x, a, beta)
                               : SmoothSensitivityMedian(x, a, beta);
        ASSERT_NEAR(got, expected[i], 1e-12) << "n=" << n << " beta=" << beta;
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(SmallDatasets, SmoothBruteForceTest,
                         ::testing::Values(1, 2, 3, 4));

TEST(MechanismTest, ParsesNames) {
  for (MechanismKind k :
       {MechanismKind::kGaussian, MechanismKind::kLaplace,
        MechanismKind::kLaplaceSmooth, MechanismKind::kRandomizedResponse}) {
    EXPECT_EQ(ParseMechanism(MechanismName(k)), k);
  }
  EXPECT_THROW(ParseMechanism("exponential"), Error);
}

TEST(MechanismTest, ValidatesPrivacyParameters) {
  EXPECT_THROW(Make(MechanismKind::kLaplace, 0.0).Validate(), Error);
  EXPECT_THROW(Make(MechanismKind::kLaplace, -1.0).Validate(), Error);
  EXPECT_NO_THROW(
      Make(MechanismKind::kGaussian, std::numeric_limits<double>::infinity())
          .Validate());
  EXPECT_THROW(Make(MechanismKind::kLaplaceSmooth, 1.0, 0.0).Validate(), Error);
  EXPECT_NO_THROW(Make(MechanismKind::kLaplaceSmooth, 1.0, 1e-4).Validate());
}

TEST(MechanismTest, SmoothParameters) {
  const SmoothLaplaceParameters p = SmoothParameters(5.0, 1e-4);
  EXPECT_DOUBLE_EQ(p.alpha, 2.5);
  EXPECT_DOUBLE_EQ(p.beta, 5.0 / (2.0 * std::log(2.0e4)));
}

TEST(MechanismTest, NoiseCalibration) {
  const PopulationModel nv(Family::kNormalVariance, 10.0);
  const StatisticSpec s2 = StatisticSpec::Parse("mean:abs_power:2");
  const BatchChannel g(nv, s2, Make(MechanismKind::kGaussian, 0.5), 100);
  EXPECT_DOUBLE_EQ(g.fixed_scale(), 100.0 / (100 * 0.5));
  EXPECT_DOUBLE_EQ(g.noise_sd(), 2.0);
  const BatchChannel l(nv, s2, Make(MechanismKind::kLaplace, 2.0), 100);
  EXPECT_DOUBLE_EQ(l.fixed_scale(), 0.5);
  EXPECT_DOUBLE_EQ(l.noise_sd(), std::numbers::sqrt2 * 0.5);
  const BatchChannel exact(
      nv, s2,
      Make(MechanismKind::kLaplace, std::numeric_limits<double>::infinity()),
      100);
  EXPECT_EQ(exact.fixed_scale(), 0.0);
}

TEST(MechanismTest, RejectsIncompatibleCombinations) {
  const PopulationModel nv(Family::kNormalVariance, 10.0);
  try {
    BatchChannel(nv, StatisticSpec::Parse("max:identity"),
                 Make(MechanismKind::kLaplace, 1.0), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompatible);
  }
  EXPECT_THROW(BatchChannel(nv, StatisticSpec::Parse("mean:abs_power:1"),
                            Make(MechanismKind::kLaplaceSmooth, 1.0, 1e-4), 10),
               Error);
  EXPECT_THROW(RecordChannel(nv, StatisticSpec::Parse("none:abs_power:1"),
                             Make(MechanismKind::kRandomizedResponse, 1.0)),
               Error);
}

TEST(MechanismTest, ClampsRecordsBeforeMapping) {
  const PopulationModel nv(Family::kNormalVariance, 10.0);
  const BatchChannel c(nv, StatisticSpec::Parse("mean:abs_power:1"),
                       Make(MechanismKind::kGaussian, 1.0), 2);
  std::vector<double> scratch;
  const std::vector<double> x = {-30.0, 4.0};
  EXPECT_DOUBLE_EQ(c.Evaluate(x, scratch).statistic, 7.0);
}

TEST(MechanismTest, DensityGivenStatisticIntegratesToOne) {
  const PopulationModel nv(Family::kNormalVariance, 10.0);
  for (MechanismKind kind :
       {MechanismKind::kGaussian, MechanismKind::kLaplace}) {
    const BatchChannel c(nv, StatisticSpec::Parse("mean:abs_power:1"),
                         Make(kind, 0.3), 10);
    const double mass = oracle::Simpson(
        [&](double y) { return std::exp(c.LogDensityGivenStatistic(y, 1.2)); },
        1.2 - 60.0, 1.2 + 60.0, 200000);
    EXPECT_NEAR(mass, 1.0, 1e-6);
  }
}

TEST(MechanismTest, BatchReleaseNoiseMoments) {
  const PopulationModel nv(Family::kNormalVariance, 10.0);
  const StatisticSpec s1 = StatisticSpec::Parse("mean:abs_power:1");
  RngStream rng(5, 0);
  const std::vector<double> x = nv.SampleMany(2.0, 100, rng);
  const double s = s1.Apply(x);
  for (MechanismKind kind :
       {MechanismKind::kGaussian, MechanismKind::kLaplace}) {
    const Mechanism mech = Make(kind, 1.0);
    const BatchChannel channel(nv, s1, mech, 100);
    double m1 = 0.0, m2 = 0.0;
    const int reps = 40000;
    for (int i = 0; i < reps; ++i) {
      const double v = ReleaseBatch(nv, x, s1, mech, rng).values[0] - s;
      m1 += v;
      m2 += v * v;
    }
    const double sd = channel.noise_sd();
    EXPECT_NEAR(m1 / reps, 0.0, 4.0 * sd / std::sqrt(reps));
    EXPECT_NEAR(std::sqrt(m2 / reps), sd, 0.02 * sd);
  }
}

TEST(MechanismTest, ExactReleaseReturnsStatistic) {
  const PopulationModel nv(Family::kNormalVariance, 10.0);
  const StatisticSpec s2 = StatisticSpec::Parse("mean:abs_power:2");
  RngStream rng(6, 0);
  const std::vector<double> x = nv.SampleMany(1.0, 50, rng);
  const Release r = ReleaseBatch(
      nv, x, s2,
      Make(MechanismKind::kGaussian, std::numeric_limits<double>::infinity()),
      rng);
  EXPECT_DOUBLE_EQ(r.values[0], s2.Apply(x));
  EXPECT_EQ(r.noise_scale[0], 0.0);
}

TEST(MechanismTest, SmoothReleaseUsesSmoothSensitivity) {
  const PopulationModel nv(Family::kNormalVariance, 10.0);
  const Mechanism mech = Make(MechanismKind::kLaplaceSmooth, 5.0, 1e-4);
  const SmoothLaplaceParameters p = SmoothParameters(5.0, 1e-4);
  RngStream rng(7, 0);
  const std::vector<double> x = nv.SampleMany(2.0, 101, rng);
  std::vector<double> shifted;
  for (double v : x) shifted.push_back(std::clamp(v, -10.0, 10.0) + 10.0);
  std::sort(shifted.begin(), shifted.end());
  std::vector<double> scratch;
  const BatchChannel med(nv, StatisticSpec::Parse("median:identity"), mech,
                         101);
  const BatchChannel::Evaluation e = med.Evaluate(x, scratch);
  EXPECT_NEAR(e.statistic, shifted[50] - 10.0, 1e-12);
  EXPECT_NEAR(e.scale, SmoothSensitivityMedian(shifted, 20.0, p.beta) / p.alpha,
              1e-12);
  EXPECT_TRUE(med.data_dependent());
  EXPECT_THROW(med.LogDensityGivenStatistic(0.0, 0.0), Error);
  const BatchChannel mx(nv, StatisticSpec::Parse("max:identity"), mech, 101);
  EXPECT_NEAR(mx.Evaluate(x, scratch).scale,
              SmoothSensitivityMax(shifted, 20.0, p.beta) / p.alpha, 1e-12);
}

TEST(MechanismTest, RandomizedResponseFlipRate) {
  const PopulationModel b(Family::kBernoulli, 1.0);
  const Mechanism rr = Make(MechanismKind::kRandomizedResponse, 1.0);
  const StatisticSpec id = StatisticSpec::Parse("none:identity");
  const RecordChannel channel(b, id, rr);
  const double keep = std::exp(1.0) / (1.0 + std::exp(1.0));
  EXPECT_NEAR(std::exp(channel.LogDensity(1.0, 1.0)), keep, 1e-14);
  EXPECT_NEAR(std::exp(channel.LogDensity(0.0, 1.0)), 1.0 - keep, 1e-14);
  RngStream rng(8, 0);
  const std::vector<double> ones(100000, 1.0);
  const Release r = ReleaseSequential(b, ones, id, rr, rng);
  double kept = 0.0;
  for (double v : r.values) kept += v;
  EXPECT_NEAR(kept / ones.size(), keep, 0.005);
}

TEST(MechanismTest, SequentialLaplaceScale) {
  const PopulationModel nv(Family::kNormalVariance, 10.0);
  const RecordChannel c(nv, StatisticSpec::Parse("none:abs_power:2"),
                        Make(MechanismKind::kLaplace, 2.0));
  EXPECT_DOUBLE_EQ(c.scale(), 50.0);
  EXPECT_NEAR(c.LogDensity(3.0, 1.0), -std::log(100.0) - 2.0 / 50.0, 1e-14);
}

TEST(MechanismTest, ReleaseIsReproducible) {
  const PopulationModel nv(Family::kNormalVariance, 10.0);
  const StatisticSpec s = StatisticSpec::Parse("none:abs_power:1");
  const std::vector<double> x = {0.5, -1.0, 2.0};
  RngStream a(9, 3);
  RngStream b(9, 3);
  const Mechanism m = Make(MechanismKind::kLaplace, 1.0);
  EXPECT_EQ(ReleaseSequential(nv, x, s, m, a).values,
            ReleaseSequential(nv, x, s, m, b).values);
}

}  // namespace
}  // namespace dpbayes
