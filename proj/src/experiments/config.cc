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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "core/error.h"

namespace dpbayes {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct KeyInfo {
  const char* key;
  const char* type;
  const char* fallback;
  const char* meaning;
};

// Order here is the order of the echo and the schema.
constexpr KeyInfo kKeys[] = {
    {"experiment", "fisher_curve|release|mcmc|mse|iac", "(subcommand)",
     "experiment kind; must match the CLI subcommand when both are given"},
    {"family", "normal_mean|normal_variance|uniform_width|bernoulli",
     "normal_variance", "population family P_theta"},
    {"support_bound", "real > 0", "10",
     "record bound A (ignored for bernoulli)"},
    {"statistics", "list of <agg>:<map>[:<power>]", "mean:abs_power:1",
     "candidate statistics; agg in mean|max|median|none, map in "
     "abs_power|signed_power|identity"},
    {"mechanism", "gaussian|laplace|laplace_smooth|randomized_response",
     "gaussian (iac: laplace)", "privatizing mechanism"},
    {"epsilon", "list of reals > 0 or inf", "1, inf (iac: 5)",
     "privacy levels"},
    {"delta", "real in (0, 1) or auto", "auto = 1/n^2", "laplace_smooth delta"},
    {"theta_grid", "list of reals", "0.5, 1, 2, 3, 5",
     "fisher_curve parameter grid"},
    {"theta_true", "real", "2 (bernoulli: 0.3)",
     "true parameter for simulated data"},
    {"n", "integer >= 1", "100", "records per dataset"},
    {"method", "closed_gaussian|alg1|alg2|alg3|bernoulli_closed|auto", "auto",
     "Fisher estimator; auto picks by statistic and mechanism"},
    {"outer_samples", "integer >= 2", "200", "Fisher Monte Carlo N"},
    {"inner_samples", "integer >= 1", "500", "Fisher Monte Carlo M"},
    {"sampler", "alg4|alg5|alg6|alg7|alg8|auto", "auto",
     "posterior sampler; auto picks the matching algorithm"},
    {"samplers", "list of samplers", "alg5, alg6", "iac: samplers compared"},
    {"num_proposals", "integer >= 1", "10",
     "N for alg5-alg8 (proposals per iteration)"},
    {"num_proposals_list", "list of integers >= 1", "2, 5, 10, 20, 50, 100",
     "iac: values of N"},
    {"alg7_mode", "full|subset", "full", "alg7 latent refresh mode"},
    {"subset_size", "integer in [1, n) or auto", "auto = max(1, n/10)",
     "alg7 subset size m"},
    {"iterations", "integer >= 4", "100000", "chain length K"},
    {"burn_in_fraction", "real in [0, 1)", "0.25", "discarded chain prefix"},
    {"step_scale", "real >= 0 or auto", "auto",
     "random-walk scale (on log theta for positive families); auto tunes "
     "toward 25-40% acceptance"},
    {"prior_lo", "real or auto", "auto (family default)",
     "flat prior lower end"},
    {"prior_hi", "real or auto", "auto (family default)",
     "flat prior upper end"},
    {"theta_init", "real or auto", "auto = prior midpoint",
     "chain starting value"},
    {"replicates", "integer >= 2", "100", "mse: number of releases M"},
    {"chains", "integer >= 1", "1",
     "iac: independent releases per (N, sampler), IAC averaged"},
    {"observed", "list of reals or none", "none",
     "mcmc: released values to condition on instead of simulating"},
    {"seed", "unsigned 64-bit integer", "1", "master seed"},
    {"output_dir", "path", ".", "directory for output files"},
    {"threads", "integer >= 1", "1",
     "worker threads (outputs do not depend on it)"},
    {"plot_scripts", "true|false", "false", "also write gnuplot scripts"},
};

std::string Trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = value.find(',', start);
    items.push_back(Trim(std::string_view(value).substr(
        start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return items;
}

[[noreturn]] void BadValue(const std::string& key, const std::string& why) {
  Fail(ErrorCode::kInvalidArgument, key + ": " + why);
}

double ParseReal(const std::string& key, const std::string& text) {
  if (text == "inf" || text == "+inf") return kInfinity;
  if (text == "-inf") return -kInfinity;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || std::isnan(v)) {
    BadValue(key, "expected a number (got '" + text + "')");
  }
  return v;
}

long long ParseInteger(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    BadValue(key, "expected an integer (got '" + text + "')");
  }
  return v;
}

std::uint64_t ParseUnsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    BadValue(key, "expected an unsigned 64-bit integer (got '" + text + "')");
  }
  return v;
}

int ParseBoundedInt(const std::string& key, const std::string& text,
                    long long low, const char* constraint) {
  const long long v = ParseInteger(key, text);
  if (v < low || v > std::numeric_limits<int>::max()) {
    BadValue(key, std::string("must be ") + constraint);
  }
  return static_cast<int>(v);
}

// Shortest representation that reads back exactly.
std::string ShortDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "auto";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

template <typename T, typename F>
std::string JoinList(const std::vector<T>& items, F format) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += format(items[i]);
  }
  return out;
}

// Runs f and prefixes any Error message with the key.
void WithKey(const std::string& key, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    const std::string message = e.what();
    if (message.rfind(key + ":", 0) == 0) throw;
    throw Error(e.code(), key + ": " + message);
  }
}

void CheckChannel(const ExperimentConfig& c, const StatisticSpec& stat,
                  const Mechanism& mech) {
  const PopulationModel model = c.Model();
  if (stat.sequential()) {
    RecordChannel(model, stat, mech);
  } else {
    BatchChannel(model, stat, mech, c.n);
  }
}

void Validate(ExperimentConfig& c) {
  const PopulationModel model = c.Model();
  for (double eps : c.epsilons) {
    if (!(eps > 0.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "epsilon: epsilon must be positive or inf");
    }
  }
  if (c.mechanism == MechanismKind::kLaplaceSmooth) {
    if (!(c.delta > 0.0 && c.delta < 1.0)) {
      BadValue("delta", "must lie in (0, 1)");
    }
  }
  for (const StatisticSpec& stat : c.statistics) {
    for (double eps : c.epsilons) {
      WithKey("statistics",
              [&] { CheckChannel(c, stat, c.MechanismFor(eps)); });
    }
  }
  WithKey("prior", [&] {
    Require(c.prior_lo < c.prior_hi, ErrorCode::kInvalidArgument,
            "prior_lo must be below prior_hi");
    bool ok = true;
    if (model.PositiveParameter()) ok = c.prior_lo >= 0.0;
    if (c.family == Family::kBernoulli) {
      ok = c.prior_lo >= 0.0 && c.prior_hi <= 1.0;
    }
    Require(ok && std::isfinite(c.prior_lo) && std::isfinite(c.prior_hi),
            ErrorCode::kOutOfDomain,
            "prior interval must be finite and inside the " + model.Name() +
                " parameter domain");
  });
  if (!std::isnan(c.theta_init)) {
    Require(c.theta_init > c.prior_lo && c.theta_init < c.prior_hi,
            ErrorCode::kInvalidArgument,
            "theta_init: must lie strictly inside (prior_lo, prior_hi)");
  }

  switch (c.experiment) {
    case Experiment::kFisherCurve:
      Require(!c.theta_grid.empty(), ErrorCode::kInvalidArgument,
              "theta_grid: must not be empty");
      for (double t : c.theta_grid) {
        WithKey("theta_grid", [&] { model.CheckDomain(t); });
      }
      for (const StatisticSpec& stat : c.statistics) {
        for (double eps : c.epsilons) {
          const Mechanism mech = c.MechanismFor(eps);
          WithKey("method", [&] {
            const FisherMethod m = c.MethodFor(stat, mech);
            CheckFisherCompatibility(m, model, stat, mech);
            if (m == FisherMethod::kAlg1 || m == FisherMethod::kAlg2 ||
                m == FisherMethod::kAlg3) {
              Require(c.outer_samples >= 2, ErrorCode::kInvalidArgument,
                      "outer_samples must be at least 2");
            }
          });
        }
      }
      break;
    case Experiment::kRelease:
      WithKey("theta_true", [&] { model.CheckDomain(c.theta_true); });
      break;
    case Experiment::kMcmc:
    case Experiment::kMse:
    case Experiment::kIac: {
      if (c.observed.empty()) {
        WithKey("theta_true", [&] { model.CheckDomain(c.theta_true); });
      }
      std::vector<Sampler> used;
      if (c.experiment == Experiment::kIac) {
        Require(c.statistics.size() == 1 && c.epsilons.size() == 1,
                ErrorCode::kInvalidArgument,
                "iac: needs exactly one statistic and one epsilon");
        Require(!c.samplers.empty() && !c.num_proposals_list.empty(),
                ErrorCode::kInvalidArgument,
                "iac: samplers and num_proposals_list must not be empty");
        used = c.samplers;
      } else if (c.experiment == Experiment::kMse) {
        used = {c.SamplerFor(c.statistics.front())};
      }
      for (const StatisticSpec& stat : c.statistics) {
        std::vector<Sampler> list = used;
        if (list.empty()) list = {c.SamplerFor(stat)};
        for (Sampler s : list) {
          for (double eps : c.epsilons) {
            WithKey("sampler", [&] {
              CheckSamplerCompatibility(s, stat, c.MechanismFor(eps));
              if (s == Sampler::kAlg4 || s == Sampler::kAlg5 ||
                  s == Sampler::kAlg6) {
                Require(HasClosedFormMoments(model, stat),
                        ErrorCode::kIncompatible,
                        std::string(SamplerName(s)) +
                            " needs closed-form statistic moments for " +
                            model.Name() + " with " + stat.Label());
              }
            });
          }
        }
      }
      if (c.alg7_mode == LatentMode::kSubset) {
        Require(c.subset_size >= 1 && c.subset_size < c.n,
                ErrorCode::kInvalidArgument,
                "subset_size: must satisfy 1 <= m < n");
      }
      if (!c.observed.empty()) {
        Require(c.experiment == Experiment::kMcmc, ErrorCode::kInvalidArgument,
                "observed: only used by the mcmc experiment");
        Require(c.statistics.size() == 1 && c.epsilons.size() == 1,
                ErrorCode::kInvalidArgument,
                "observed: needs exactly one statistic and one epsilon");
        const std::size_t want = c.statistics.front().sequential()
                                     ? static_cast<std::size_t>(c.n)
                                     : 1;
        Require(c.observed.size() == want, ErrorCode::kInvalidArgument,
                "observed: expected " + std::to_string(want) + " value(s)");
        for (double v : c.observed) {
          Require(std::isfinite(v), ErrorCode::kInvalidArgument,
                  "observed: values must be finite");
        }
      }
      break;
    }
  }
  ValidateOverrides(c);
}

}  // namespace

std::string_view ExperimentName(Experiment experiment) {
  switch (experiment) {
    case Experiment::kFisherCurve:
      return "fisher_curve";
    case Experiment::kRelease:
      return "release";
    case Experiment::kMcmc:
      return "mcmc";
    case Experiment::kMse:
      return "mse";
    case Experiment::kIac:
      return "iac";
  }
  return "?";
}

Experiment ParseExperiment(std::string_view name) {
  for (Experiment e : {Experiment::kFisherCurve, Experiment::kRelease,
                       Experiment::kMcmc, Experiment::kMse, Experiment::kIac}) {
    if (ExperimentName(e) == name) return e;
  }
  Fail(ErrorCode::kInvalidArgument,
       "experiment: must be one of fisher_curve, release, mcmc, mse, iac "
       "(got '" +
           std::string(name) + "')");
}

Mechanism ExperimentConfig::MechanismFor(double epsilon) const {
  Mechanism m;
  m.kind = mechanism;
  m.epsilon = epsilon;
  m.delta = mechanism == MechanismKind::kLaplaceSmooth ? delta : 0.0;
  return m;
}

SamplerOptions ExperimentConfig::MakeSamplerOptions(int proposals) const {
  SamplerOptions o;
  o.proposals = proposals;
  o.subset_size = alg7_mode == LatentMode::kSubset ? subset_size : 0;
  return o;
}

Sampler ExperimentConfig::SamplerFor(const StatisticSpec& statistic) const {
  if (sampler) return *sampler;
  if (statistic.sequential()) return Sampler::kAlg8;
  if (statistic.additive() && mechanism == MechanismKind::kGaussian) {
    return Sampler::kAlg4;
  }
  if (statistic.additive() && mechanism == MechanismKind::kLaplace) {
    return Sampler::kAlg5;
  }
  return Sampler::kAlg7;
}

FisherMethod ExperimentConfig::MethodFor(const StatisticSpec& statistic,
                                         const Mechanism& mech) const {
  return method ? *method : DefaultFisherMethod(statistic, mech);
}

ExperimentConfig ParseConfig(std::string_view text,
                             std::optional<Experiment> forced) {
  std::map<std::string, std::string> entries;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kInvalidArgument,
           "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = Trim(std::string_view(trimmed).substr(eq + 1));
    const bool known =
        std::any_of(std::begin(kKeys), std::end(kKeys),
                    [&](const KeyInfo& k) { return key == k.key; });
    if (!known) {
      Fail(ErrorCode::kInvalidArgument, "line " + std::to_string(line_no) +
                                            ": unknown key '" + key +
                                            "' (see --print-schema)");
    }
    if (value.empty()) BadValue(key, "empty value");
    if (!entries.emplace(key, value).second) BadValue(key, "duplicate key");
  }
  auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  };

  ExperimentConfig c;
  if (auto v = get("experiment")) {
    c.experiment = ParseExperiment(*v);
    if (forced && *forced != c.experiment) {
      BadValue("experiment", "config says '" + *v + "' but the command runs '" +
                                 std::string(ExperimentName(*forced)) + "'");
    }
  } else if (forced) {
    c.experiment = *forced;
  } else {
    Fail(ErrorCode::kInvalidArgument, "experiment: missing required key");
  }
  const bool iac = c.experiment == Experiment::kIac;

  if (auto v = get("family")) {
    WithKey("family", [&] { c.family = ParseFamily(*v); });
  }
  if (auto v = get("support_bound")) {
    c.support_bound = ParseReal("support_bound", *v);
    if (!(c.support_bound > 0.0 && std::isfinite(c.support_bound))) {
      BadValue("support_bound", "must be a finite positive number");
    }
  }
  if (auto v = get("n")) c.n = ParseBoundedInt("n", *v, 1, "at least 1");

  const std::string stats = get("statistics").value_or("mean:abs_power:1");
  for (const std::string& item : SplitList(stats)) {
    WithKey("statistics",
            [&] { c.statistics.push_back(StatisticSpec::Parse(item)); });
  }
  if (auto v = get("mechanism")) {
    WithKey("mechanism", [&] { c.mechanism = ParseMechanism(*v); });
  } else {
    c.mechanism = iac ? MechanismKind::kLaplace : MechanismKind::kGaussian;
  }
  const std::string eps = get("epsilon").value_or(iac ? "5" : "1, inf");
  for (const std::string& item : SplitList(eps)) {
    const double e = ParseReal("epsilon", item);
    if (!(e > 0.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "epsilon: epsilon must be positive or inf");
    }
    c.epsilons.push_back(e);
  }
  const std::string delta = get("delta").value_or("auto");
  c.delta_auto = delta == "auto";
  c.delta = c.delta_auto ? 1.0 / (static_cast<double>(c.n) * c.n)
                         : ParseReal("delta", delta);
  if (!c.delta_auto && !(c.delta > 0.0 && c.delta < 1.0)) {
    BadValue("delta", "must lie in (0, 1)");
  }

  for (const std::string& item :
       SplitList(get("theta_grid").value_or("0.5, 1, 2, 3, 5"))) {
    c.theta_grid.push_back(ParseReal("theta_grid", item));
  }
  c.theta_true = c.family == Family::kBernoulli ? 0.3 : 2.0;
  if (auto v = get("theta_true")) c.theta_true = ParseReal("theta_true", *v);

  if (auto v = get("method"); v && *v != "auto") {
    WithKey("method", [&] { c.method = ParseFisherMethod(*v); });
  }
  if (auto v = get("outer_samples")) {
    c.outer_samples = ParseBoundedInt("outer_samples", *v, 2, "at least 2");
  }
  if (auto v = get("inner_samples")) {
    c.inner_samples = ParseBoundedInt("inner_samples", *v, 1, "at least 1");
  }
  if (auto v = get("sampler"); v && *v != "auto") {
    WithKey("sampler", [&] { c.sampler = ParseSampler(*v); });
  }
  for (const std::string& item :
       SplitList(get("samplers").value_or("alg5, alg6"))) {
    WithKey("samplers", [&] { c.samplers.push_back(ParseSampler(item)); });
  }
  if (auto v = get("num_proposals")) {
    c.num_proposals = ParseBoundedInt("num_proposals", *v, 1, "at least 1");
  }
  for (const std::string& item :
       SplitList(get("num_proposals_list").value_or("2, 5, 10, 20, 50, 100"))) {
    c.num_proposals_list.push_back(
        ParseBoundedInt("num_proposals_list", item, 1, "at least 1"));
  }
  if (auto v = get("alg7_mode")) {
    if (*v == "full") {
      c.alg7_mode = LatentMode::kFull;
    } else if (*v == "subset") {
      c.alg7_mode = LatentMode::kSubset;
    } else {
      BadValue("alg7_mode", "must be full or subset");
    }
  }
  const std::string subset = get("subset_size").value_or("auto");
  c.subset_size = subset == "auto"
                      ? std::max(1, c.n / 10)
                      : ParseBoundedInt("subset_size", subset, 1, "at least 1");
  if (auto v = get("iterations")) {
    c.iterations = static_cast<std::size_t>(
        ParseBoundedInt("iterations", *v, 4, "at least 4"));
  }
  if (auto v = get("burn_in_fraction")) {
    c.burn_in_fraction = ParseReal("burn_in_fraction", *v);
    if (!(c.burn_in_fraction >= 0.0 && c.burn_in_fraction < 1.0)) {
      BadValue("burn_in_fraction", "must lie in [0, 1)");
    }
  }
  const std::string step = get("step_scale").value_or("auto");
  c.step_scale = step == "auto" ? kNaN : ParseReal("step_scale", step);
  if (!std::isnan(c.step_scale) &&
      !(c.step_scale >= 0.0 && std::isfinite(c.step_scale))) {
    BadValue("step_scale", "must be a finite number >= 0 or auto");
  }
  const PopulationModel model = c.Model();
  const std::string lo = get("prior_lo").value_or("auto");
  const std::string hi = get("prior_hi").value_or("auto");
  c.prior_lo =
      lo == "auto" ? model.DefaultPriorLow() : ParseReal("prior_lo", lo);
  c.prior_hi =
      hi == "auto" ? model.DefaultPriorHigh() : ParseReal("prior_hi", hi);
  const std::string init = get("theta_init").value_or("auto");
  c.theta_init = init == "auto" ? kNaN : ParseReal("theta_init", init);
  if (auto v = get("replicates")) {
    c.replicates = ParseBoundedInt("replicates", *v, 2, "at least 2");
  }
  if (auto v = get("chains")) {
    c.chains = ParseBoundedInt("chains", *v, 1, "at least 1");
  }
  if (auto v = get("observed"); v && *v != "none") {
    for (const std::string& item : SplitList(*v)) {
      c.observed.push_back(ParseReal("observed", item));
    }
  }
  if (auto v = get("seed")) c.seed = ParseUnsigned("seed", *v);
  if (auto v = get("output_dir")) c.output_dir = *v;
  if (auto v = get("threads")) {
    c.threads = ParseBoundedInt("threads", *v, 1, "at least 1");
  }
  if (auto v = get("plot_scripts")) {
    if (*v == "true") {
      c.plot_scripts = true;
    } else if (*v == "false") {
      c.plot_scripts = false;
    } else {
      BadValue("plot_scripts", "must be true or false");
    }
  }
  Validate(c);
  return c;
}

void ValidateOverrides(const ExperimentConfig& config) {
  Require(config.threads >= 1, ErrorCode::kInvalidArgument,
          "threads: must be at least 1");
  Require(!config.output_dir.empty(), ErrorCode::kInvalidArgument,
          "output_dir: must not be empty");
}

std::string EchoConfig(const ExperimentConfig& c, bool include_runtime) {
  auto real = [](double v) { return ShortDouble(v); };
  std::vector<std::pair<std::string, std::string>> kv = {
      {"experiment", std::string(ExperimentName(c.experiment))},
      {"family", std::string(FamilyName(c.family))},
      {"support_bound", real(c.support_bound)},
      {"statistics",
       JoinList(c.statistics,
                [](const StatisticSpec& s) { return s.Label(); })},
      {"mechanism", std::string(MechanismName(c.mechanism))},
      {"epsilon", JoinList(c.epsilons, real)},
      {"delta", real(c.delta)},
      {"theta_grid", JoinList(c.theta_grid, real)},
      {"theta_true", real(c.theta_true)},
      {"n", std::to_string(c.n)},
      {"method", c.method ? std::string(FisherMethodName(*c.method)) : "auto"},
      {"outer_samples", std::to_string(c.outer_samples)},
      {"inner_samples", std::to_string(c.inner_samples)},
      {"sampler", c.sampler ? std::string(SamplerName(*c.sampler)) : "auto"},
      {"samplers",
       JoinList(c.samplers,
                [](Sampler s) { return std::string(SamplerName(s)); })},
      {"num_proposals", std::to_string(c.num_proposals)},
      {"num_proposals_list",
       JoinList(c.num_proposals_list, [](int v) { return std::to_string(v); })},
      {"alg7_mode", c.alg7_mode == LatentMode::kFull ? "full" : "subset"},
      {"subset_size", std::to_string(c.subset_size)},
      {"iterations", std::to_string(c.iterations)},
      {"burn_in_fraction", real(c.burn_in_fraction)},
      {"step_scale", real(c.step_scale)},
      {"prior_lo", real(c.prior_lo)},
      {"prior_hi", real(c.prior_hi)},
      {"theta_init", real(c.theta_init)},
      {"replicates", std::to_string(c.replicates)},
      {"chains", std::to_string(c.chains)},
      {"observed", c.observed.empty() ? "none" : JoinList(c.observed, real)},
      {"seed", std::to_string(c.seed)},
      {"output_dir", c.output_dir},
      {"threads", std::to_string(c.threads)},
      {"plot_scripts", c.plot_scripts ? "true" : "false"},
  };
  std::string out;
  for (const auto& [key, value] : kv) {
    if (!include_runtime && (key == "output_dir" || key == "threads")) continue;
    out += key + " = " + value + "\n";
  }
  return out;
}

std::string ConfigSchema() {
  std::string out =
      "# dpbayes experiment config: one 'key = value' per line, '#' starts a\n"
      "# comment, lists are comma-separated. Unknown keys are rejected.\n"
      "# --seed, --out-dir and --threads override seed, output_dir, threads.\n";
  for (const KeyInfo& k : kKeys) {
    out += std::string(k.key) + "\n    type: " + k.type +
           "\n    default: " + k.fallback + "\n    " + k.meaning + "\n";
  }
  return out;
}

}  // namespace dpbayes
