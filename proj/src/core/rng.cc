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

#include "core/rng.h"

#include <cmath>

namespace dpbayes {

std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 SeedEngine(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(SeedEngine(master_seed, stream_id)) {}

RngStream RngStream::Child(std::uint64_t index) const {
  return RngStream(master_seed_, MixBits(stream_id_ ^ MixBits(index)));
}

double RngStream::Uniform() {
  // 53 random mantissa bits, offset by half a step so 0 is never returned.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::Normal() { return normal_(engine_); }

double RngStream::Laplace(double scale) {
  const double u = Uniform() - 0.5;
  return u < 0 ? scale * std::log1p(2.0 * u) : -scale * std::log1p(-2.0 * u);
}

std::size_t RngStream::Index(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

}  // namespace dpbayes
