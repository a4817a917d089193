// Copyright 2026 The Genomask Authors
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
#ifndef GENOMASK_RANDOM_H_
#define GENOMASK_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>

namespace genomask {

using Rng = std::mt19937_64;

// Uniform double in [0,1) from the top 53 bits; identical on every platform
// for a given engine state.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool Bernoulli(Rng& rng, double p) { return Uniform01(rng) < p; }

// Uniform integer in [0, bound).
inline std::uint64_t UniformIndex(Rng& rng, std::uint64_t bound) {
  return static_cast<std::uint64_t>(Uniform01(rng) * static_cast<double>(bound));
}

// Draw an index from a (not necessarily normalized) weight vector.
std::size_t SampleCategorical(Rng& rng, std::span<const double> weights);

std::uint64_t SplitMix64(std::uint64_t x);

// Independent stream number `index` derived from a root seed.
inline Rng StreamFor(std::uint64_t root_seed, std::uint64_t index) {
  return Rng(SplitMix64(root_seed ^ SplitMix64(index + 0x632be59bd9b4e019ULL)));
}

}  // namespace genomask

#endif  // GENOMASK_RANDOM_H_
