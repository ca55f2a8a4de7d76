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

#include "experiments/runner.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core/csv.h"
#include "core/error.h"
#include "core/numeric.h"
#include "core/rng.h"
#include "core/version.h"
#include "diagnostics/diagnostics.h"
#include "json.hpp"

namespace dpbayes {
namespace {

using Json = nlohmann::ordered_json;

class OutputWriter {
 public:
  explicit OutputWriter(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
      Fail(ErrorCode::kIo,
           "cannot create output directory '" + dir + "': " + ec.message());
    }
  }

  void Write(const std::string& name, const std::string& content) {
    const std::filesystem::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) Fail(ErrorCode::kIo, "failed to write '" + path.string() + "'");
    written_.push_back(path.string());
    names_.push_back(name);
  }

  const std::vector<std::string>& written() const { return written_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> written_;
  std::vector<std::string> names_;
};

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

// gnuplot filter expression selecting rows by the statistic and epsilon
// columns.
std::string RowFilter(int stat_col, const std::string& stat, int eps_col,
                      double eps, int value_col) {
  return "(strcol(" + std::to_string(stat_col) + ") eq " + Quote(stat) +
         " && strcol(" + std::to_string(eps_col) + ") eq " +
         Quote(FormatDouble(eps)) + " ? $" + std::to_string(value_col) +
         " : NaN)";
}

std::string PlotHeader(const std::string& output, const std::string& title) {
  return "# gnuplot script; run from the output directory.\n"
         "set datafile separator ','\n"
         "set datafile missing NaN\n"
         "set key outside right\n"
         "set terminal pngcairo size 900,600\n"
         "set output " +
         Quote(output) +
         "\n"
         "set title " +
         Quote(title) + "\n";
}

ChainRequest MakeChainRequest(const ExperimentConfig& c, int proposals) {
  ChainRequest request;
  request.iterations = c.iterations;
  request.burn_in_fraction = c.burn_in_fraction;
  request.step_scale = c.step_scale;
  request.theta0 = c.theta_init;
  request.sampler_options = c.MakeSamplerOptions(proposals);
  return request;
}

Release MakeRelease(const PopulationModel& model, std::span<const double> x,
                    const StatisticSpec& stat, const Mechanism& mech,
                    RngStream& rng) {
  return stat.sequential() ? ReleaseSequential(model, x, stat, mech, rng)
                           : ReleaseBatch(model, x, stat, mech, rng);
}

void RunFisher(const ExperimentConfig& c, OutputWriter& out,
               RunResult& result) {
  const std::vector<FisherCurvePoint> points = ComputeFisherCurve(c);
  CsvTable table({"theta", "statistic", "epsilon", "F", "se"});
  for (const FisherCurvePoint& p : points) {
    table.AddRow({FormatDouble(p.theta), p.statistic, FormatDouble(p.epsilon),
                  FormatDouble(p.estimate.scalar()),
                  FormatDouble(p.estimate.scalar_se())});
    if (!p.estimate.warning.empty()) {
      result.warnings.push_back(
          p.statistic + " eps=" + FormatDouble(p.epsilon) +
          " theta=" + FormatDouble(p.theta) + ": " + p.estimate.warning);
    }
  }
  table.SortByLeadingColumns(2);
  out.Write("fisher.csv", table.ToString());

  CsvTable weighted({"statistic", "epsilon", "weighted_F"});
  const std::size_t t_count = c.theta_grid.size();
  for (std::size_t k = 0; k < points.size(); k += t_count) {
    std::vector<double> theta;
    std::vector<double> f;
    for (std::size_t t = 0; t < t_count; ++t) {
      theta.push_back(points[k + t].theta);
      f.push_back(points[k + t].estimate.scalar());
    }
    weighted.AddRow({points[k].statistic, FormatDouble(points[k].epsilon),
                     FormatDouble(PriorWeightedFisher(theta, f))});
  }
  weighted.SortByLeadingColumns(2);
  out.Write("fisher_prior_weighted.csv", weighted.ToString());

  if (c.plot_scripts) {
    std::string gp = PlotHeader("fisher.png", "Fisher information") +
                     "set xlabel 'theta'\nset ylabel 'F(theta)'\n"
                     "set logscale y\nplot \\\n";
    bool first = true;
    for (const StatisticSpec& stat : c.statistics) {
      for (double eps : c.epsilons) {
        gp += std::string(first ? "  " : ", \\\n  ") +
              "'fisher.csv' every ::1 using 1:" +
              RowFilter(2, stat.Label(), 3, eps, 4) +
              " with linespoints title " +
              Quote(stat.Label() + " eps=" + FormatDouble(eps));
        first = false;
      }
    }
    out.Write("fisher.gp", gp + "\n");
  }
}

void RunRelease(const ExperimentConfig& c, OutputWriter& out) {
  const PopulationModel model = c.Model();
  RngStream data_rng(c.seed, 0);
  const std::vector<double> x = model.SampleMany(c.theta_true, c.n, data_rng);
  CsvTable table({"statistic", "epsilon", "index", "y", "noise_scale"});
  std::uint64_t combo = 0;
  for (const StatisticSpec& stat : c.statistics) {
    for (double eps : c.epsilons) {
      RngStream rng = data_rng.Child(++combo);
      const Release release =
          MakeRelease(model, x, stat, c.MechanismFor(eps), rng);
      for (std::size_t i = 0; i < release.values.size(); ++i) {
        table.AddRow({stat.Label(), FormatDouble(eps), std::to_string(i),
                      FormatDouble(release.values[i]),
                      FormatDouble(release.noise_scale[i])});
      }
    }
  }
  table.SortByLeadingColumns(2);
  out.Write("release.csv", table.ToString());
}

void RunMcmc(const ExperimentConfig& c, OutputWriter& out) {
  const PopulationModel model = c.Model();
  struct Job {
    StatisticSpec stat;
    double epsilon;
    Sampler sampler;
    std::vector<double> y;
    ChainTrace trace;
  };
  std::vector<Job> jobs;
  for (const StatisticSpec& stat : c.statistics) {
    for (double eps : c.epsilons) {
      jobs.push_back({stat, eps, c.SamplerFor(stat), {}, {}});
    }
  }
  RngStream data_rng(c.seed, 0);
  std::vector<double> x;
  if (c.observed.empty()) x = model.SampleMany(c.theta_true, c.n, data_rng);
  ParallelFor(jobs.size(), c.threads, [&](std::size_t k) {
    Job& job = jobs[k];
    RngStream rng = data_rng.Child(k + 1);
    const Mechanism mech = c.MechanismFor(job.epsilon);
    job.y = c.observed.empty()
                ? MakeRelease(model, x, job.stat, mech, rng).values
                : c.observed;
    const PosteriorProblem problem{model, job.stat, mech,
                                   c.n,   job.y,    c.MakePrior()};
    job.trace = RunPosteriorChain(job.sampler, problem,
                                  MakeChainRequest(c, c.num_proposals), rng);
  });

  CsvTable trace(
      {"statistic", "epsilon", "iteration", "theta", "accepted", "aux"});
  Json summary = Json::object();
  summary["version"] = kVersion;
  summary["seed"] = c.seed;
  summary["chains"] = Json::array();
  for (const Job& job : jobs) {
    const std::string label = job.stat.Label();
    const std::string eps = FormatDouble(job.epsilon);
    for (std::size_t t = 0; t < job.trace.samples.size(); ++t) {
      trace.AddRow(
          {label, eps, std::to_string(t), FormatDouble(job.trace.samples[t]),
           job.trace.accepted[t] ? "1" : "0", FormatDouble(job.trace.aux[t])});
    }
    const PosteriorSummary s = SummarizePosterior(job.trace);
    Json entry = Json::object();
    entry["statistic"] = label;
    entry["epsilon"] = eps;
    entry["sampler"] = std::string(SamplerName(job.sampler));
    entry["mechanism"] = std::string(MechanismName(c.mechanism));
    entry["y"] = job.y;
    entry["posterior_mean"] = s.mean;
    entry["posterior_sd"] = s.sd;
    entry["mcse"] = s.mcse;
    entry["iac"] = s.iac;
    entry["acceptance_rate"] = job.trace.AcceptanceRate();
    entry["step_scale"] = job.trace.step_scale;
    entry["iterations"] = job.trace.samples.size();
    entry["burn_in"] = job.trace.burn_in;
    entry["proposals"] = c.num_proposals;
    summary["chains"].push_back(entry);
  }
  trace.SortByLeadingColumns(2);
  out.Write("trace.csv", trace.ToString());
  out.Write("summary.json", summary.dump(2) + "\n");

  if (c.plot_scripts) {
    std::string gp = PlotHeader("trace.png", "Posterior chains") +
                     "set xlabel 'iteration'\nset ylabel 'theta'\nplot \\\n";
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      gp +=
          std::string(k == 0 ? "  " : ", \\\n  ") +
          "'trace.csv' every ::1 using 3:" +
          RowFilter(1, jobs[k].stat.Label(), 2, jobs[k].epsilon, 4) +
          " with lines title " +
          Quote(jobs[k].stat.Label() + " eps=" + FormatDouble(jobs[k].epsilon));
    }
    out.Write("trace.gp", gp + "\n");
  }
}

void RunMse(const ExperimentConfig& c, OutputWriter& out) {
  CsvTable table({"label", "mse", "se", "M", "n", "epsilon", "mechanism",
                  "sampler", "seed"});
  CsvTable estimates({"label", "epsilon", "replicate", "estimate"});
  for (double eps : c.epsilons) {
    MseSettings settings;
    settings.model = c.Model();
    settings.statistics = c.statistics;
    settings.mechanism = c.MechanismFor(eps);
    settings.sampler = c.SamplerFor(c.statistics.front());
    settings.prior = c.MakePrior();
    settings.theta_true = c.theta_true;
    settings.n = c.n;
    settings.replicates = c.replicates;
    settings.chain = MakeChainRequest(c, c.num_proposals);
    settings.seed = c.seed;
    settings.threads = c.threads;
    const MseReport report = RunMseExperiment(settings);
    for (const MseRow& row : report.rows) {
      table.AddRow({row.label, FormatDouble(row.mse), FormatDouble(row.se),
                    std::to_string(report.replicates), std::to_string(report.n),
                    FormatDouble(report.epsilon), report.mechanism,
                    report.sampler, std::to_string(report.seed)});
      for (std::size_t i = 0; i < row.estimates.size(); ++i) {
        estimates.AddRow({row.label, FormatDouble(eps), std::to_string(i),
                          FormatDouble(row.estimates[i])});
      }
    }
  }
  table.SortByLeadingColumns(2);
  estimates.SortByLeadingColumns(2);
  out.Write("mse.csv", table.ToString());
  out.Write("mse_estimates.csv", estimates.ToString());

  if (c.plot_scripts) {
    std::string gp = PlotHeader("mse.png", "Posterior-mean MSE") +
                     "set ylabel 'MSE'\nset logscale y\n"
                     "set xtics rotate by -30\nplot \\\n";
    for (std::size_t e = 0; e < c.epsilons.size(); ++e) {
      const std::string eps = Quote(FormatDouble(c.epsilons[e]));
      gp += std::string(e == 0 ? "  " : ", \\\n  ") +
            "'mse.csv' every ::1 using 0:(strcol(6) eq " + eps +
            " ? $2 : NaN):3:xtic(1) with yerrorbars title 'eps=' . " + eps;
    }
    out.Write("mse.gp", gp + "\n");
  }
}

void RunIac(const ExperimentConfig& c, OutputWriter& out) {
  const std::vector<IacCell> cells = ComputeIacTable(c);
  CsvTable table({"N", "algorithm", "iac"});
  CsvTable detail(
      {"N", "algorithm", "chain", "iac", "acceptance_rate", "step_scale"});
  for (const IacCell& cell : cells) {
    const std::string name(SamplerName(cell.sampler));
    table.AddRow(
        {std::to_string(cell.proposals), name, FormatDouble(cell.iac)});
    for (std::size_t k = 0; k < cell.chain_iac.size(); ++k) {
      detail.AddRow({std::to_string(cell.proposals), name, std::to_string(k),
                     FormatDouble(cell.chain_iac[k]),
                     FormatDouble(cell.acceptance[k]),
                     FormatDouble(cell.step_scale[k])});
    }
  }
  table.SortByLeadingColumns(2);
  detail.SortByLeadingColumns(2);
  out.Write("iac.csv", table.ToString());
  out.Write("iac_chains.csv", detail.ToString());

  if (c.plot_scripts) {
    std::string gp = PlotHeader("iac.png", "Integrated autocorrelation time") +
                     "set xlabel 'N'\nset ylabel 'IAC'\nset logscale x\n"
                     "plot \\\n";
    for (std::size_t s = 0; s < c.samplers.size(); ++s) {
      const std::string name(SamplerName(c.samplers[s]));
      gp += std::string(s == 0 ? "  " : ", \\\n  ") +
            "'iac.csv' every ::1 using 1:(strcol(2) eq " + Quote(name) +
            " ? $3 : NaN) with linespoints title " + Quote(name);
    }
    out.Write("iac.gp", gp + "\n");
  }
}

}  // namespace

double PriorWeightedFisher(std::vector<double> theta, std::vector<double> f) {
  Require(theta.size() == f.size() && !theta.empty(),
          ErrorCode::kInvalidArgument,
          "prior weighting needs matching, non-empty theta and F vectors");
  std::vector<std::size_t> order(theta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(
      order.begin(), order.end(),
      [&](std::size_t a, std::size_t b) { return theta[a] < theta[b]; });
  const double width = theta[order.back()] - theta[order.front()];
  if (!(width > 0.0)) {
    double sum = 0.0;
    for (double v : f) sum += v;
    return sum / static_cast<double>(f.size());
  }
  double area = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) {
    const std::size_t a = order[k - 1];
    const std::size_t b = order[k];
    area += 0.5 * (f[a] + f[b]) * (theta[b] - theta[a]);
  }
  return area / width;
}

std::vector<FisherCurvePoint> ComputeFisherCurve(const ExperimentConfig& c) {
  const PopulationModel model = c.Model();
  MonteCarloOptions options;
  options.outer = c.outer_samples;
  options.inner = c.inner_samples;
  options.threads = c.threads;
  std::vector<FisherCurvePoint> points;
  std::uint64_t combo = 0;
  for (const StatisticSpec& stat : c.statistics) {
    for (double eps : c.epsilons) {
      const Mechanism mech = c.MechanismFor(eps);
      const FisherMethod method = c.MethodFor(stat, mech);
      for (double theta : c.theta_grid) {
        const RngStream root(c.seed, combo++);
        points.push_back({theta, stat.Label(), eps,
                          EstimateFisher(method, model, stat, mech, c.n, theta,
                                         options, root)});
      }
    }
  }
  return points;
}

std::vector<IacCell> ComputeIacTable(const ExperimentConfig& c) {
  Require(c.statistics.size() == 1 && c.epsilons.size() == 1,
          ErrorCode::kInvalidArgument,
          "iac needs exactly one statistic and one epsilon");
  const PopulationModel model = c.Model();
  const StatisticSpec& stat = c.statistics.front();
  const Mechanism mech = c.MechanismFor(c.epsilons.front());
  const int max_n = *std::max_element(c.num_proposals_list.begin(),
                                      c.num_proposals_list.end());
  const std::size_t chains = static_cast<std::size_t>(c.chains);
  const std::size_t n_count = c.num_proposals_list.size();
  const std::size_t s_count = c.samplers.size();

  struct ChainSetup {
    PosteriorProblem problem;
    double step;
    double theta0;
  };
  std::vector<std::unique_ptr<ChainSetup>> setups(chains);
  ParallelFor(chains, c.threads, [&](std::size_t k) {
    RngStream data_rng(c.seed, k);
    const std::vector<double> x = model.SampleMany(c.theta_true, c.n, data_rng);
    RngStream release_rng = data_rng.Child(1);
    const Release release = MakeRelease(model, x, stat, mech, release_rng);
    PosteriorProblem problem{model, stat,           mech,
                             c.n,   release.values, c.MakePrior()};
    double theta0 =
        std::isnan(c.theta_init) ? problem.prior.Midpoint() : c.theta_init;
    double step = c.step_scale;
    if (std::isnan(step)) {
      const bool additive = std::any_of(
          c.samplers.begin(), c.samplers.end(),
          [](Sampler s) { return s == Sampler::kAlg5 || s == Sampler::kAlg6; });
      const Sampler tuner = additive ? Sampler::kAlg6 : c.samplers.front();
      std::unique_ptr<Kernel> kernel =
          MakeKernel(tuner, problem, InitialStepScale(model, problem.prior),
                     c.MakeSamplerOptions(max_n));
      RngStream tune_rng = data_rng.Child(2);
      ChainState pre = kernel->Initialize(theta0, tune_rng);
      step = TuneStepScale(*kernel, pre, tune_rng);
      theta0 = pre.theta;
    }
    setups[k] = std::make_unique<ChainSetup>(
        ChainSetup{std::move(problem), step, theta0});
  });

  const std::size_t cells = n_count * s_count;
  std::vector<double> iac(cells * chains);
  std::vector<double> acceptance(cells * chains);
  ParallelFor(cells * chains, c.threads, [&](std::size_t job) {
    const std::size_t k = job / cells;
    const std::size_t cell = job % cells;
    const int proposals = c.num_proposals_list[cell / s_count];
    const Sampler sampler = c.samplers[cell % s_count];
    const ChainSetup& setup = *setups[k];
    ChainRequest request = MakeChainRequest(c, proposals);
    request.step_scale = setup.step;
    request.theta0 = setup.theta0;
    RngStream rng = RngStream(c.seed, k).Child(3 + cell);
    const ChainTrace trace =
        RunPosteriorChain(sampler, setup.problem, request, rng);
    double tau = std::numeric_limits<double>::infinity();
    try {
      tau = IntegratedAutocorrelationTime(trace.PostBurnIn());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNumerical) throw;
    }
    iac[job] = tau;
    acceptance[job] = trace.AcceptanceRate();
  });

  std::vector<IacCell> table;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    IacCell out{c.num_proposals_list[cell / s_count],
                c.samplers[cell % s_count],
                0.0,
                {},
                {},
                {}};
    for (std::size_t k = 0; k < chains; ++k) {
      out.chain_iac.push_back(iac[k * cells + cell]);
      out.acceptance.push_back(acceptance[k * cells + cell]);
      out.step_scale.push_back(setups[k]->step);
      out.iac += iac[k * cells + cell];
    }
    out.iac /= static_cast<double>(chains);
    table.push_back(std::move(out));
  }
  return table;
}

RunResult RunExperiment(const ExperimentConfig& config) {
  ValidateOverrides(config);
  OutputWriter out(config.output_dir);
  RunResult result;
  switch (config.experiment) {
    case Experiment::kFisherCurve:
      RunFisher(config, out, result);
      break;
    case Experiment::kRelease:
      RunRelease(config, out);
      break;
    case Experiment::kMcmc:
      RunMcmc(config, out);
      break;
    case Experiment::kMse:
      RunMse(config, out);
      break;
    case Experiment::kIac:
      RunIac(config, out);
      break;
  }
  Json provenance = Json::object();
  provenance["tool"] = "dpbayes";
  provenance["version"] = kVersion;
  provenance["experiment"] = std::string(ExperimentName(config.experiment));
  provenance["seed"] = config.seed;
  Json echo = Json::object();
  std::istringstream lines(EchoConfig(config));
  for (std::string line; std::getline(lines, line);) {
    const std::size_t eq = line.find(" = ");
    if (eq != std::string::npos) echo[line.substr(0, eq)] = line.substr(eq + 3);
  }
  provenance["config"] = echo;
  provenance["outputs"] = out.names();
  provenance["warnings"] = result.warnings;
  out.Write("provenance.json", provenance.dump(2) + "\n");
  result.files = out.written();
  return result;
}

}  // namespace dpbayes
