// Copyright 2026 The sqkd-sim Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sqkd/errors.hpp"

namespace sqkd {

inline constexpr std::uint64_t kSeedMixConstant = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer; the mixing primitive behind derive_seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic sub-seed derivation. Trial i of a master seed s runs with
/// derive_seed(s, i); the same formula produces per-scan-point and
/// per-purpose streams. Defined as splitmix64(s XOR (salt+1)*K) with
/// K = 0x9E3779B97F4A7C15, so salt 0 never collides with the master itself.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  return splitmix64(master ^ ((salt + 1) * kSeedMixConstant));
}

/// Seedable pseudo-random stream. All sampling in the simulator draws from
/// an explicitly passed stream; there is no hidden global randomness.
/// Derivations (uniform doubles, bounded ints, gaussians) are spelled out
/// here rather than taken from <random> distributions so a given seed
/// replays identically across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Fair bit.
  int bit() { return static_cast<int>(engine_() >> 63); }

  /// Uniform integer in [0, bound), bias-free by rejection.
  std::uint64_t uniform_int(std::uint64_t bound) {
    if (bound == 0) throw ArgumentError("uniform_int: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  /// Standard normal deviate (Box-Muller, cached spare).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sqkd
