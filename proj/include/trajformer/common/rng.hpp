// Copyright 2026 The Trajformer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRAJFORMER_COMMON_RNG_HPP_
#define TRAJFORMER_COMMON_RNG_HPP_

#include <cstdint>
#include <random>

namespace trajformer {

// Seeded generator with platform-stable uniform and normal draws. The
// standard distributions are implementation-defined, so samples are derived
// from raw engine bits instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

  double normal();
  // Normal(0, std) resampled until |x| <= bound * std.
  double truncated_normal(double std, double bound = 2.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace trajformer

#endif  // TRAJFORMER_COMMON_RNG_HPP_
