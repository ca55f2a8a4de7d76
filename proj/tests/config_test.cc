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

#include "experiments/config.h"

#include <cmath>
#include <string>

#include "core/error.h"
#include "gtest/gtest.h"

namespace dpbayes {
namespace {

std::string ErrorOf(const std::string& text,
                    std::optional<Experiment> forced = std::nullopt) {
  try {
    ParseConfig(text, forced);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigTest, MinimalFisherConfigResolvesDefaults) {
  const ExperimentConfig c = ParseConfig("experiment = fisher_curve\n");
  EXPECT_EQ(c.n, 100);
  ASSERT_EQ(c.epsilons.size(), 2u);
  EXPECT_EQ(c.epsilons[0], 1.0);
  EXPECT_TRUE(std::isinf(c.epsilons[1]));
  const std::string echo = EchoConfig(c);
  EXPECT_NE(echo.find("n = 100\n"), std::string::npos);
  EXPECT_NE(echo.find("epsilon = 1, inf\n"), std::string::npos);
  EXPECT_NE(echo.find("delta = 1e-04\n"), std::string::npos);
  EXPECT_EQ(echo.find("threads"), std::string::npos);
}

TEST(ConfigTest, NegativeEpsilonRejected) {
  EXPECT_NE(ErrorOf("experiment = fisher_curve\nepsilon = -1\n")
                .find("epsilon must be positive or inf"),
            std::string::npos);
  EXPECT_NE(ErrorOf("experiment = fisher_curve\nepsilon = 0\n").find("epsilon"),
            std::string::npos);
}

TEST(ConfigTest, SamplerMechanismMismatchCitesMatchingTable) {
  const std::string msg =
      ErrorOf("experiment = mcmc\nsampler = alg4\nmechanism = laplace\n");
  EXPECT_NE(msg.find("sampler"), std::string::npos);
  EXPECT_NE(msg.find("algorithm-model matching"), std::string::npos);
}

TEST(ConfigTest, UnknownDuplicateAndMissingKeys) {
  EXPECT_NE(
      ErrorOf("experiment = mse\ncolour = red\n").find("unknown key 'colour'"),
      std::string::npos);
  EXPECT_NE(ErrorOf("n = 10\nn = 20\n", Experiment::kRelease).find("duplicate"),
            std::string::npos);
  EXPECT_NE(ErrorOf("n = 10\n").find("experiment"), std::string::npos);
  EXPECT_NE(ErrorOf("just some words\n", Experiment::kMse).find("line 1"),
            std::string::npos);
}

TEST(ConfigTest, ErrorsNameTheKey) {
  EXPECT_EQ(ErrorOf("n = 0\n", Experiment::kMse).rfind("n:", 0), 0u);
  EXPECT_EQ(
      ErrorOf("iterations = lots\n", Experiment::kMcmc).rfind("iterations:", 0),
      0u);
  EXPECT_EQ(
      ErrorOf("family = poisson\n", Experiment::kMcmc).rfind("family:", 0), 0u);
  EXPECT_EQ(ErrorOf("burn_in_fraction = 1\n", Experiment::kMcmc)
                .rfind("burn_in_fraction:", 0),
            0u);
  EXPECT_EQ(ErrorOf("statistics = mean:cube\n", Experiment::kMcmc)
                .rfind("statistics:", 0),
            0u);
}

TEST(ConfigTest, ForcedExperimentMustAgree) {
  EXPECT_NE(ErrorOf("experiment = mse\n", Experiment::kIac).find("experiment"),
            std::string::npos);
  EXPECT_EQ(ParseConfig("", Experiment::kIac).experiment, Experiment::kIac);
}

TEST(ConfigTest, EchoRoundTrips) {
  const std::string text =
      "experiment = mse\n"
      "statistics = mean:abs_power:1, mean:abs_power:2\n"
      "mechanism = laplace\n"
      "epsilon = 0.5, 1, 2\n"
      "theta_true = 2\n"
      "replicates = 20\n"
      "seed = 99\n";
  const ExperimentConfig c = ParseConfig(text);
  EXPECT_EQ(EchoConfig(ParseConfig(EchoConfig(c))), EchoConfig(c));
  EXPECT_EQ(c.SamplerFor(c.statistics[0]), Sampler::kAlg5);
  EXPECT_EQ(c.seed, 99u);
}

TEST(ConfigTest, IacDefaultsAndRestrictions) {
  const ExperimentConfig c = ParseConfig("", Experiment::kIac);
  EXPECT_EQ(c.mechanism, MechanismKind::kLaplace);
  ASSERT_EQ(c.epsilons.size(), 1u);
  EXPECT_EQ(c.epsilons[0], 5.0);
  EXPECT_EQ(c.num_proposals_list.size(), 6u);
  EXPECT_EQ(c.samplers.size(), 2u);
  EXPECT_FALSE(ErrorOf("statistics = mean:abs_power:1, mean:abs_power:2\n",
                       Experiment::kIac)
                   .empty());
}

TEST(ConfigTest, DefaultSamplerPerStatistic) {
  const ExperimentConfig c = ParseConfig(
      "statistics = max:identity, median:identity\nmechanism = laplace_smooth\n"
      "epsilon = 5\n",
      Experiment::kMcmc);
  EXPECT_EQ(c.SamplerFor(c.statistics[0]), Sampler::kAlg7);
  EXPECT_DOUBLE_EQ(c.delta, 1e-4);
  const ExperimentConfig seq =
      ParseConfig("statistics = none:abs_power:1\nmechanism = laplace\n",
                  Experiment::kMcmc);
  EXPECT_EQ(seq.SamplerFor(seq.statistics[0]), Sampler::kAlg8);
}

TEST(ConfigTest, ParseTimeCompatibilityChecks) {
  // Laplace batch release needs the mean aggregator.
  EXPECT_FALSE(ErrorOf("statistics = max:identity\nmechanism = laplace\n",
                       Experiment::kRelease)
                   .empty());
  // Closed-form moments are unavailable for signed powers of a scale family.
  EXPECT_FALSE(ErrorOf("statistics = mean:signed_power:2\nsampler = alg4\n",
                       Experiment::kMcmc)
                   .empty());
  // alg2 needs a regular family.
  EXPECT_FALSE(ErrorOf("family = uniform_width\nmethod = alg2\n",
                       Experiment::kFisherCurve)
                   .empty());
  EXPECT_FALSE(
      ErrorOf("prior_lo = 5\nprior_hi = 1\n", Experiment::kMcmc).empty());
  EXPECT_FALSE(ErrorOf("observed = 1, 2\n", Experiment::kMcmc).empty());
  EXPECT_NO_THROW(
      ParseConfig("observed = 1.25\nepsilon = 1\n", Experiment::kMcmc));
}

TEST(ConfigTest, SchemaListsEveryKey) {
  const std::string schema = ConfigSchema();
  for (const char* key :
       {"experiment", "family", "statistics", "epsilon", "delta", "sampler",
        "iterations", "seed", "threads"}) {
    EXPECT_NE(schema.find(std::string("\n") + key + "\n"), std::string::npos)
        << key;
  }
}

}  // namespace
}  // namespace dpbayes
