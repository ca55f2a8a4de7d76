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

#include "core/numeric.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "core/error.h"

namespace dpbayes {

double LogSumExp(std::span<const double> log_weights) {
  Require(!log_weights.empty(), ErrorCode::kInvalidArgument,
          "log_sum_exp: empty weight list");
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (std::isnan(top)) Fail(ErrorCode::kNumerical, "log_sum_exp: NaN weight");
  if (top == -std::numeric_limits<double>::infinity()) {
    Fail(ErrorCode::kNumerical, "degenerate weights");
  }
  if (top == std::numeric_limits<double>::infinity()) return top;
  double sum = 0.0;
  for (double lw : log_weights) sum += std::exp(lw - top);
  return top + std::log(sum);
}

std::size_t SampleWeighted(std::span<const double> log_weights,
                           RngStream& rng) {
  const double total = LogSumExp(log_weights);
  const double target = rng.Uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < log_weights.size(); ++j) {
    const double p = std::exp(log_weights[j] - total);
    if (p > 0.0) last_positive = j;
    cumulative += p;
    if (target < cumulative) return j;
  }
  // Rounding left the cumulative sum a hair below one.
  return last_positive;
}

double EffectiveSampleSize(std::span<const double> log_weights) {
  const double top = LogSumExp(log_weights);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double lw : log_weights) {
    const double w = std::exp(lw - top);
    sum += w;
    sum_sq += w * w;
  }
  return sum * sum / sum_sq;
}

double WeightedMean(std::span<const double> log_weights,
                    std::span<const double> values) {
  Require(log_weights.size() == values.size(), ErrorCode::kInvalidArgument,
          "weighted mean: size mismatch");
  const double total = LogSumExp(log_weights);
  double acc = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double w = std::exp(log_weights[j] - total);
    if (w > 0.0) acc += w * values[j];
  }
  return acc;
}

double DefaultStep(double theta) {
  return std::max(1e-5, 1e-5 * std::abs(theta));
}

std::vector<double> FiniteDifferenceGradient(
    const std::function<std::vector<double>(double)>& f, double theta,
    double h) {
  Require(h > 0.0, ErrorCode::kInvalidArgument,
          "finite difference step must be positive");
  const std::vector<double> up = f(theta + h);
  const std::vector<double> down = f(theta - h);
  Require(up.size() == down.size(), ErrorCode::kInvalidArgument,
          "finite difference: inconsistent output size");
  std::vector<double> grad(up.size());
  for (std::size_t k = 0; k < up.size(); ++k) {
    if (!std::isfinite(up[k]) || !std::isfinite(down[k])) {
      Fail(ErrorCode::kNumerical, "finite difference: non-finite f value");
    }
    grad[k] = (up[k] - down[k]) / (2.0 * h);
  }
  return grad;
}

void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(
      count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace dpbayes
