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

// C interface to the dpbayes library. Every function returns a status code;
// on failure dpb_last_error() describes the most recent error on the calling
// thread. Strings returned through char** are owned by the caller and must be
// released with dpb_string_free().

#ifndef DPBAYES_DPBAYES_H_
#define DPBAYES_DPBAYES_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DPB_API __declspec(dllexport)
#else
#define DPB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dpb_status {
  DPB_OK = 0,
  DPB_INVALID_ARGUMENT = 1,
  DPB_OUT_OF_DOMAIN = 2,
  DPB_NUMERICAL = 3,
  DPB_INCOMPATIBLE = 4,
  DPB_IO = 5,
  DPB_INTERNAL = 6,
} dpb_status;

typedef enum dpb_aggregate {
  DPB_AGGREGATE_MAX = 0,
  DPB_AGGREGATE_MEDIAN = 1,
} dpb_aggregate;

// Opaque, validated experiment configuration.
typedef struct dpb_config dpb_config;

DPB_API const char* dpb_version(void);
DPB_API const char* dpb_last_error(void);
DPB_API const char* dpb_status_name(dpb_status status);

// Parses a key = value document. `experiment` may be NULL; otherwise it names
// the experiment the caller intends to run and must agree with the document.
DPB_API dpb_status dpb_config_parse(const char* text, const char* experiment,
                                    dpb_config** out);
DPB_API dpb_status dpb_config_load_file(const char* path,
                                        const char* experiment,
                                        dpb_config** out);
DPB_API void dpb_config_free(dpb_config* config);

DPB_API dpb_status dpb_config_set_seed(dpb_config* config, uint64_t seed);
DPB_API dpb_status dpb_config_set_output_dir(dpb_config* config,
                                             const char* path);
DPB_API dpb_status dpb_config_set_threads(dpb_config* config, int threads);

// Resolved configuration, one key = value per line.
DPB_API dpb_status dpb_config_echo(const dpb_config* config, char** out);
DPB_API dpb_status dpb_config_schema(char** out);

// Runs the experiment. On success `files` (if not NULL) receives the written
// paths and `warnings` (if not NULL) any estimator warnings, one per line.
DPB_API dpb_status dpb_config_run(const dpb_config* config, char** files,
                                  char** warnings);

DPB_API void dpb_string_free(char* str);

// Smooth sensitivity of the max or median of x_1..n on [0, range_max].
DPB_API dpb_status dpb_smooth_sensitivity(dpb_aggregate aggregate,
                                          const double* x, size_t n,
                                          double range_max, double beta,
                                          double* out);

// Closed-form Fisher information of a Gaussian-noise mean release.
// `statistic` uses the config syntax, e.g. "mean:abs_power:1".
DPB_API dpb_status dpb_fisher_closed_gaussian(const char* family,
                                              double support_bound,
                                              const char* statistic, int n,
                                              double epsilon, double theta,
                                              double* out);

// Bernoulli Fisher information; variant is "F1", "F2" or "F3".
DPB_API dpb_status dpb_fisher_bernoulli(const char* variant, double theta,
                                        double epsilon, int n, double* out);

#ifdef __cplusplus
}
#endif

#endif  // DPBAYES_DPBAYES_H_
