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
#include <vector>

#include "sqkd/adversary.hpp"
#include "sqkd/metrics.hpp"
#include "sqkd/protocol.hpp"

// Sweep of return-leg attacks to exhibit the detection/information
// tradeoff: an attack that never fires the checks forces Eve's kept states
// to be independent of the key, so every sampled point should land on
// "detected" or "learned nothing". Partial measure-and-resend sweeps are
// included as the forward-leg counterpart, where the information shows up
// in guess advantage instead of kept ancillas.

namespace sqkd::adversary {

enum class ScanFamily {
  /// Unstructured unitary on travel plus ancilla.
  HaarUnitary,
  /// Block form |t><t| (x) V_t: travel passes untouched, the ancilla
  /// receives V_0 or V_1 depending on the travel bit.
  ConstrainedUnitary,
  /// Forward measure-and-resend on a per-round fraction.
  MeasureResendFraction,
};

const char* to_string(ScanFamily f);

struct ScanPoint {
  ScanFamily family = ScanFamily::HaarUnitary;
  /// Constrained family only: the two ancilla branches forced identical.
  bool shared_branches = false;
  /// Attacked fraction of rounds (1 for the unitary families).
  double fraction = 1.0;
  double detection_probability = 0.0;
  double avg_trace_distance = 0.0;
  double guess_advantage = 0.0;
  std::size_t ctrl_rounds = 0;
  std::size_t test_rounds = 0;
  std::uint64_t seed = 0;
};

struct ScanOptions {
  /// Unitary attack samples. Sample 0 is always the do-nothing identity
  /// baseline; the rest alternate Haar and constrained draws, the latter
  /// switching between shared and independent branches.
  int samples = 200;
  int ancilla_qubits = 2;
  /// Block length per simulated run.
  int n = 100;
  std::uint64_t seed = 0;
  /// Append forward measure-and-resend sweep points after the unitaries.
  bool include_measure_resend = false;
  /// Fractions 0, 1/(k-1), ..., 1 when k > 1.
  int measure_resend_points = 9;
};

/// Uniformly random unitary via QR of a complex gaussian matrix.
qsim::Gate haar_unitary(int qubits, RandomStream& rng);

/// The block family above; shared_branches forces V_1 = V_0.
qsim::Gate constrained_unitary(int ancilla_qubits, bool shared_branches,
                               RandomStream& rng);

/// Runs one protocol instance per sampled attack (abort thresholds
/// disabled so the statistics cover full transcripts) and scores each.
/// Deterministic in opts.seed.
std::vector<ScanPoint> robustness_scan(const ScanOptions& opts = {});

}  // namespace sqkd::adversary
