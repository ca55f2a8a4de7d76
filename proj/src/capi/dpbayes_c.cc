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
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "core/error.h"
#include "core/version.h"
#include "dpbayes/dpbayes.h"
#include "experiments/config.h"
#include "experiments/runner.h"
#include "fisher/fisher.h"
#include "privacy/sensitivity.h"

struct dpb_config {
  dpbayes::ExperimentConfig config;
};

namespace {

thread_local std::string last_error;

dpb_status Record(dpb_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
dpb_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return DPB_OK;
  } catch (const dpbayes::Error& e) {
    return Record(static_cast<dpb_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Record(DPB_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Record(DPB_INTERNAL, e.what());
  }
}

char* Duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& line : lines) out += line + "\n";
  return out;
}

void RequireNotNull(const void* p, const char* what) {
  dpbayes::Require(p != nullptr, dpbayes::ErrorCode::kInvalidArgument,
                   std::string(what) + " must not be NULL");
}

std::optional<dpbayes::Experiment> Forced(const char* experiment) {
  if (experiment == nullptr) return std::nullopt;
  return dpbayes::ParseExperiment(experiment);
}

}  // namespace

extern "C" {

const char* dpb_version(void) { return dpbayes::kVersion; }

const char* dpb_last_error(void) { return last_error.c_str(); }

const char* dpb_status_name(dpb_status status) {
  switch (status) {
    case DPB_OK:
      return "ok";
    case DPB_INVALID_ARGUMENT:
      return "invalid argument";
    case DPB_OUT_OF_DOMAIN:
      return "out of domain";
    case DPB_NUMERICAL:
      return "numerical error";
    case DPB_INCOMPATIBLE:
      return "incompatible combination";
    case DPB_IO:
      return "i/o error";
    case DPB_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

dpb_status dpb_config_parse(const char* text, const char* experiment,
                            dpb_config** out) {
  return Guard([&] {
    RequireNotNull(text, "text");
    RequireNotNull(out, "out");
    *out = nullptr;
    auto handle = std::make_unique<dpb_config>();
    handle->config = dpbayes::ParseConfig(text, Forced(experiment));
    *out = handle.release();
  });
}

dpb_status dpb_config_load_file(const char* path, const char* experiment,
                                dpb_config** out) {
  return Guard([&] {
    RequireNotNull(path, "path");
    RequireNotNull(out, "out");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      dpbayes::Fail(dpbayes::ErrorCode::kIo,
                    std::string("cannot read config '") + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    auto handle = std::make_unique<dpb_config>();
    handle->config = dpbayes::ParseConfig(text.str(), Forced(experiment));
    *out = handle.release();
  });
}

void dpb_config_free(dpb_config* config) { delete config; }

dpb_status dpb_config_set_seed(dpb_config* config, uint64_t seed) {
  return Guard([&] {
    RequireNotNull(config, "config");
    config->config.seed = seed;
  });
}

dpb_status dpb_config_set_output_dir(dpb_config* config, const char* path) {
  return Guard([&] {
    RequireNotNull(config, "config");
    RequireNotNull(path, "path");
    dpbayes::ExperimentConfig updated = config->config;
    updated.output_dir = path;
    dpbayes::ValidateOverrides(updated);
    config->config = std::move(updated);
  });
}

dpb_status dpb_config_set_threads(dpb_config* config, int threads) {
  return Guard([&] {
    RequireNotNull(config, "config");
    dpbayes::ExperimentConfig updated = config->config;
    updated.threads = threads;
    dpbayes::ValidateOverrides(updated);
    config->config = std::move(updated);
  });
}

dpb_status dpb_config_echo(const dpb_config* config, char** out) {
  return Guard([&] {
    RequireNotNull(config, "config");
    RequireNotNull(out, "out");
    *out = Duplicate(dpbayes::EchoConfig(config->config, true));
  });
}

dpb_status dpb_config_schema(char** out) {
  return Guard([&] {
    RequireNotNull(out, "out");
    *out = Duplicate(dpbayes::ConfigSchema());
  });
}

dpb_status dpb_config_run(const dpb_config* config, char** files,
                          char** warnings) {
  return Guard([&] {
    RequireNotNull(config, "config");
    if (files != nullptr) *files = nullptr;
    if (warnings != nullptr) *warnings = nullptr;
    const dpbayes::RunResult result = dpbayes::RunExperiment(config->config);
    std::unique_ptr<char, decltype(&std::free)> f(
        files ? Duplicate(JoinLines(result.files)) : nullptr, &std::free);
    std::unique_ptr<char, decltype(&std::free)> w(
        warnings ? Duplicate(JoinLines(result.warnings)) : nullptr, &std::free);
    if (files != nullptr) *files = f.release();
    if (warnings != nullptr) *warnings = w.release();
  });
}

void dpb_string_free(char* str) { std::free(str); }

dpb_status dpb_smooth_sensitivity(dpb_aggregate aggregate, const double* x,
                                  size_t n, double range_max, double beta,
                                  double* out) {
  return Guard([&] {
    RequireNotNull(x, "x");
    RequireNotNull(out, "out");
    std::vector<double> sorted(x, x + n);
    std::sort(sorted.begin(), sorted.end());
    switch (aggregate) {
      case DPB_AGGREGATE_MAX:
        *out = dpbayes::SmoothSensitivityMax(sorted, range_max, beta);
        return;
      case DPB_AGGREGATE_MEDIAN:
        *out = dpbayes::SmoothSensitivityMedian(sorted, range_max, beta);
        return;
    }
    dpbayes::Fail(
        dpbayes::ErrorCode::kInvalidArgument,
        "aggregate must be DPB_AGGREGATE_MAX or DPB_AGGREGATE_MEDIAN");
  });
}

dpb_status dpb_fisher_closed_gaussian(const char* family, double support_bound,
                                      const char* statistic, int n,
                                      double epsilon, double theta,
                                      double* out) {
  return Guard([&] {
    RequireNotNull(family, "family");
    RequireNotNull(statistic, "statistic");
    RequireNotNull(out, "out");
    const dpbayes::PopulationModel model(dpbayes::ParseFamily(family),
                                         support_bound);
    *out =
        dpbayes::FisherClosedGaussian(
            model, dpbayes::StatisticSpec::Parse(statistic), n, epsilon, theta)
            .scalar();
  });
}

dpb_status dpb_fisher_bernoulli(const char* variant, double theta,
                                double epsilon, int n, double* out) {
  return Guard([&] {
    RequireNotNull(variant, "variant");
    RequireNotNull(out, "out");
    *out = dpbayes::FisherBernoulliClosed(
               dpbayes::ParseBernoulliVariant(variant), theta, epsilon, n)
               .scalar();
  });
}

}  // extern "C"
