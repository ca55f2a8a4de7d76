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

#ifndef DPBAYES_EXPERIMENTS_RUNNER_H_
#define DPBAYES_EXPERIMENTS_RUNNER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "experiments/config.h"

namespace dpbayes {

struct FisherCurvePoint {
  double theta;
  std::string statistic;
  double epsilon;
  FisherEstimate estimate;
};

// Grid in statistic, epsilon, theta order. Combination k uses stream
// (seed, k).
std::vector<FisherCurvePoint> ComputeFisherCurve(
    const ExperimentConfig& config);

// Flat-prior average of F over the theta grid (trapezoid rule).
double PriorWeightedFisher(std::vector<double> theta, std::vector<double> f);

struct IacCell {
  int proposals;
  Sampler sampler;
  double iac;                      // mean over chains
  std::vector<double> chain_iac;   // per chain
  std::vector<double> acceptance;  // per chain
  std::vector<double> step_scale;  // per chain
};

// Chain c simulates its data and release from stream (seed, c) and shares
// one step scale across all (N, sampler) cells.
std::vector<IacCell> ComputeIacTable(const ExperimentConfig& config);

struct RunResult {
  std::vector<std::string> files;  // paths written, in order
  std::vector<std::string> warnings;
};

// Executes the configured experiment and writes its outputs under
// config.output_dir. Errors carry kIo for file-system failures.
RunResult RunExperiment(const ExperimentConfig& config);

}  // namespace dpbayes

#endif  // DPBAYES_EXPERIMENTS_RUNNER_H_
