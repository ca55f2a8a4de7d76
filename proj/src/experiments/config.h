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

#ifndef DPBAYES_EXPERIMENTS_CONFIG_H_
#define DPBAYES_EXPERIMENTS_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fisher/fisher.h"
#include "mcmc/samplers.h"
#include "models/population.h"
#include "models/statistic.h"
#include "privacy/mechanism.h"

namespace dpbayes {

enum class Experiment { kFisherCurve, kRelease, kMcmc, kMse, kIac };

std::string_view ExperimentName(Experiment experiment);
Experiment ParseExperiment(std::string_view name);

enum class LatentMode { kFull, kSubset };

// A fully resolved experiment description. NaN and empty optionals mean
// "auto" and are resolved by ParseConfig.
struct ExperimentConfig {
  Experiment experiment = Experiment::kFisherCurve;
  Family family = Family::kNormalVariance;
  double support_bound = 10.0;
  std::vector<StatisticSpec> statistics;
  MechanismKind mechanism = MechanismKind::kGaussian;
  std::vector<double> epsilons;
  double delta = 0.0;  // resolved; 1/n^2 when auto
  bool delta_auto = true;
  std::vector<double> theta_grid;
  double theta_true = 2.0;
  int n = 100;
  std::optional<FisherMethod> method;
  int outer_samples = 200;
  int inner_samples = 500;
  std::optional<Sampler> sampler;
  std::vector<Sampler> samplers;  // iac
  int num_proposals = 10;
  std::vector<int> num_proposals_list;  // iac
  LatentMode alg7_mode = LatentMode::kFull;
  int subset_size = 0;  // resolved; n/10 when auto
  std::size_t iterations = 100000;
  double burn_in_fraction = 0.25;
  double step_scale = 0.0;  // NaN: tuned
  double prior_lo = 0.0;
  double prior_hi = 0.0;
  double theta_init = 0.0;  // NaN: prior midpoint
  int replicates = 100;
  int chains = 1;
  std::vector<double> observed;  // mcmc: use these release values
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  int threads = 1;
  bool plot_scripts = false;

  PopulationModel Model() const { return {family, support_bound}; }
  Mechanism MechanismFor(double epsilon) const;
  Prior MakePrior() const { return Prior::Flat(prior_lo, prior_hi); }
  SamplerOptions MakeSamplerOptions(int proposals) const;
  // Configured sampler, or the matching one for this statistic.
  Sampler SamplerFor(const StatisticSpec& statistic) const;
  FisherMethod MethodFor(const StatisticSpec& statistic,
                         const Mechanism& mechanism) const;
};

// Parses `key = value` lines ('#' starts a comment). `forced` overrides the
// experiment kind (the CLI subcommand); a conflicting `experiment` key is an
// error. Unknown keys, duplicates and invalid values throw kInvalidArgument
// naming the key; incompatible pairings throw kIncompatible.
ExperimentConfig ParseConfig(std::string_view text,
                             std::optional<Experiment> forced = std::nullopt);

// Re-checks the fields the CLI may override after parsing.
void ValidateOverrides(const ExperimentConfig& config);

// The resolved configuration as `key = value` lines, every key present. The
// output directory and thread count are omitted unless `include_runtime`.
std::string EchoConfig(const ExperimentConfig& config,
                       bool include_runtime = false);

// Human-readable table of keys, types, defaults and meanings.
std::string ConfigSchema();

}  // namespace dpbayes

#endif  // DPBAYES_EXPERIMENTS_CONFIG_H_
