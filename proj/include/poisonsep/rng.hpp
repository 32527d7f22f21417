//
// Copyright 2026 The poisonsep Authors
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

// Seed discipline shared by every sampler in the library.
//
// A single master seed fans out into independent streams through
// derive_seed(seed, index), a splitmix64 finalizer applied to the pair.
// Trial t of an experiment always uses derive_seed(master, t), so results do
// not depend on the order (or thread) in which trials are executed.

#ifndef POISONSEP_RNG_HPP_
#define POISONSEP_RNG_HPP_

#include <cstdint>
#include <random>

namespace poisonsep {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

// Named sub-streams so that, e.g., the noise vector of a sampled dataset can
// change without perturbing the design matrix.
enum class Stream : std::uint64_t {
  kDesign = 1,
  kNoise = 2,
  kSplit = 3,
  kAdversary = 4,
  kLabels = 5,
  kTest = 6,
  kResample = 7,
};

inline Engine make_engine(std::uint64_t seed, Stream stream) {
  return make_engine(derive_seed(seed, static_cast<std::uint64_t>(stream)));
}

}  // namespace poisonsep

#endif  // POISONSEP_RNG_HPP_
