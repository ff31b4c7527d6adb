// Copyright 2026 The povmforge Authors
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

#ifndef POVMFORGE_RNG_HPP
#define POVMFORGE_RNG_HPP

#include <cstdint>

namespace povmforge {

/// SplitMix64 (Steele, Lea, Flood 2014). Its state advances by a fixed
/// increment, so the n-th output can be computed directly. Sampling uses
/// that to give every shot its own stream: shot k draws output k + 1 of the
/// generator seeded with `seed`, independent of how shots are scheduled.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kIncrement = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t operator()() {
    state_ += kIncrement;
    return mix(state_);
  }

  /// Output number n (1-based) of SplitMix64(seed), without iterating.
  static std::uint64_t nth(std::uint64_t seed, std::uint64_t n) {
    return mix(seed + n * kIncrement);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Top 53 bits of x as a double in [0, 1).
inline double to_unit_interval(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Uniform variate for shot `shot` (0-based) under seed `seed`.
inline double shot_uniform(std::uint64_t seed, std::uint64_t shot) {
  return to_unit_interval(SplitMix64::nth(seed, shot + 1));
}

}  // namespace povmforge

#endif  // POVMFORGE_RNG_HPP
