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

// dpbayes command-line front end. Links only the C API.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dpbayes/dpbayes.h"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  bool print_schema = false;
};

int ReportError(dpb_status status, const char* context) {
  std::fprintf(stderr, "dpbayes: %s: %s (%s)\n", context, dpb_last_error(),
               dpb_status_name(status));
  return static_cast<int>(status);
}

int PrintSchema() {
  char* schema = nullptr;
  const dpb_status status = dpb_config_schema(&schema);
  if (status != DPB_OK) return ReportError(status, "schema");
  std::fputs(schema, stdout);
  dpb_string_free(schema);
  return 0;
}

int Run(const char* experiment, const CommonFlags& flags) {
  if (flags.print_schema) return PrintSchema();
  dpb_config* config = nullptr;
  dpb_status status =
      flags.config.empty()
          ? dpb_config_parse("", experiment, &config)
          : dpb_config_load_file(flags.config.c_str(), experiment, &config);
  if (status != DPB_OK) return ReportError(status, "config");
  if (flags.seed) status = dpb_config_set_seed(config, *flags.seed);
  if (status == DPB_OK && flags.out_dir) {
    status = dpb_config_set_output_dir(config, flags.out_dir->c_str());
  }
  if (status == DPB_OK && flags.threads) {
    status = dpb_config_set_threads(config, *flags.threads);
  }
  if (status != DPB_OK) {
    dpb_config_free(config);
    return ReportError(status, "override");
  }
  char* files = nullptr;
  char* warnings = nullptr;
  status = dpb_config_run(config, &files, &warnings);
  dpb_config_free(config);
  if (status != DPB_OK) return ReportError(status, experiment);
  if (warnings != nullptr && warnings[0] != '\0') {
    std::fprintf(stderr, "dpbayes: warnings:\n%s", warnings);
  }
  std::fputs(files, stdout);
  dpb_string_free(files);
  dpb_string_free(warnings);
  return 0;
}

void AddCommonFlags(CLI::App* app, CommonFlags& flags) {
  app->add_option("--config", flags.config, "experiment config file")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", flags.seed, "override the master seed");
  app->add_option("--out-dir", flags.out_dir, "override the output directory");
  app->add_option("--threads", flags.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  app->add_flag("--print-schema", flags.print_schema,
                "print the config schema and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private Bayesian estimation experiments"};
  app.set_version_flag("--version", std::string(dpb_version()));
  bool print_schema = false;
  app.add_flag("--print-schema", print_schema,
               "print the config schema and exit");
  app.require_subcommand(0, 1);

  struct Command {
    const char* name;
    const char* experiment;
    const char* help;
  };
  const Command commands[] = {
      {"fisher", "fisher_curve", "Fisher information over a theta grid"},
      {"release", "release", "privatized releases of simulated data"},
      {"mcmc", "mcmc", "posterior chain for one release"},
      {"mse", "mse", "replicated posterior-mean MSE per statistic"},
      {"iac", "iac", "integrated autocorrelation time against N"},
  };
  CommonFlags flags;
  const char* selected = nullptr;
  for (const Command& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    AddCommonFlags(sub, flags);
    sub->callback([&selected, &command] { selected = command.experiment; });
  }
  CLI11_PARSE(app, argc, argv);

  if (selected == nullptr) {
    if (print_schema) return PrintSchema();
    std::fputs(app.help().c_str(), stderr);
    return 1;
  }
  return Run(selected, flags);
}
