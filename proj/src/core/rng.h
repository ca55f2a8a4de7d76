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

#ifndef DPBAYES_CORE_RNG_H_
#define DPBAYES_CORE_RNG_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace dpbayes {

// A deterministic random stream identified by (master_seed, stream_id).
//
// Equal identifiers always produce identical sequences. Child() derives
// further streams by mixing the index into the stream id, which is how
// replicate and outer-loop indices get their own order-independent streams.
// A stream is not thread-safe; give every thread or replicate its own.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  RngStream Child(std::uint64_t index) const;

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double Uniform();
  double Normal();
  double Normal(double mean, double sd) { return mean + sd * Normal(); }
  // Zero-mean Laplace with the given scale b (variance 2b^2).
  double Laplace(double scale);
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform on {0, ..., n - 1}; n must be positive.
  std::size_t Index(std::size_t n);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// SplitMix64 finalizer; used to derive stream ids.
std::uint64_t MixBits(std::uint64_t x);

}  // namespace dpbayes

#endif  // DPBAYES_CORE_RNG_H_
