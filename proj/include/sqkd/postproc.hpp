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

#include <cstdint>

#include "sqkd/bits.hpp"
#include "sqkd/rng.hpp"

// Classical post-processing: syndrome-based reconciliation and Toeplitz
// privacy amplification. Both sides are simulated in one process, so the
// authenticated verification step of a real deployment is replaced by a
// direct comparison against the reference string.

namespace sqkd::postproc {

struct ReconcileConfig {
  std::uint64_t parity_seed = 0;
  /// Number of random parity rows published; each one leaks one bit.
  int syndrome_length = 16;
};

struct ReconcileOutcome {
  /// True iff the corrected string equals the reference exactly.
  bool success;
  Bits corrected;
  int leaked_bits;
};

/// Corrects `noisy` toward `reference` using the syndrome of a seeded
/// random parity matrix. Searches error patterns of weight at most 2,
/// lowest weight first. With syndrome_length 0 nothing can be corrected,
/// so unequal inputs simply fail.
ReconcileOutcome reconcile(const Bits& reference, const Bits& noisy,
                           const ReconcileConfig& cfg);

struct HashConfig {
  std::uint64_t hash_seed = 0;
  /// Final key length m; must satisfy 0 <= m <= input length.
  int output_bits = 0;
};

/// Toeplitz-matrix universal hash. The m x n matrix is defined by
/// m + n - 1 seeded bits t, with entry (i, j) = t[i - j + n - 1].
Bits privacy_amplify(const Bits& key, const HashConfig& cfg);

/// ceil(n / 8): extra bits removed beyond the leaked ones.
int default_security_margin(int n);

}  // namespace sqkd::postproc
