// Copyright 2026 The faassim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAASSIM_RNG_H_
#define FAASSIM_RNG_H_

#include <cstdint>
#include <random>

namespace faassim {

// Well-known stream ids. Each stochastic consumer owns one stream so that
// adding a consumer never perturbs another's draws.
enum class StreamId : std::uint64_t {
  kWorkload = 1,
  kDispatcher = 2,
  kTest = 99,
};

// Seeded random stream. std::mt19937_64 is fully specified by the standard;
// the distributions here are implemented locally because the standard
// library's distributions differ between implementations.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamId stream) : RngStream(seed, static_cast<std::uint64_t>(stream)) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of resolution.
  double NextDouble();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n);
  // Exponential with the given rate (mean 1/rate).
  double Exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace faassim

#endif  // FAASSIM_RNG_H_
