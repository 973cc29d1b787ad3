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
#include <span>
#include <string>
#include <vector>

#include "sqkd/protocol.hpp"

// Scoring of finished runs: qubit efficiency, how often the checks caught
// the eavesdropper, and how much the eavesdropper actually learned.

namespace sqkd::metrics {

/// Reduced nonnegative rational.
struct Fraction {
  std::uint64_t num;
  std::uint64_t den;

  bool operator==(const Fraction&) const = default;
};

std::string to_string(const Fraction& f);
double value(const Fraction& f);

/// Key bits distilled per qubit handled by either party:
/// sifted / (sender + receiver). Throws ArgumentError when no qubits moved.
Fraction efficiency_fraction(std::size_t sifted_bits,
                             std::size_t sender_qubits,
                             std::size_t receiver_qubits);

/// Recomputes transcript counts from the round records.
protocol::TranscriptCounts count_transcript(const protocol::RunResult& run);

/// Fraction of all rounds on which a check fired: failed CTRL comparisons
/// plus TEST mismatches, over the total number of rounds. Counts whatever
/// the run recorded, so aborted runs score the rounds that were checked
/// before the abort.
double detection_probability(const protocol::RunResult& run);

struct EveInformation {
  /// Fraction of information-block bits Eve guesses correctly; 0.5 when
  /// the run aborted before a key existed.
  double guess_accuracy = 0.5;
  /// Distinguishability of Eve's kept ancillas between key bit 0 and 1,
  /// conditioned on the announced home bit (which she also hears) and
  /// averaged over the announcement strata. 0 when she kept nothing.
  double avg_trace_distance = 0.0;
  /// Information-block rounds scored for the guess.
  std::size_t rounds_scored = 0;
  /// Information-block rounds where Eve holds a quantum ancilla.
  std::size_t ancilla_rounds = 0;

  double guess_advantage() const { return 2.0 * guess_accuracy - 1.0; }
};

/// Scores what Eve ended up knowing about the sender's information block.
/// Rounds where she has a measurement record are guessed as
/// (announced home bit) xor (her bit); the rest fall back to a seeded coin.
EveInformation eve_key_information(const protocol::RunResult& run);

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for fewer than 2
  std::size_t count = 0;
};

SampleStats detection_stats(std::span<const protocol::RunResult> runs);

struct EfficiencyRow {
  std::string scheme;
  std::string source;  // "analytic" or "simulated"
  std::size_t sifted_bits;
  std::size_t sender_qubits;
  std::size_t receiver_qubits;
  Fraction efficiency;
  std::string note;
};

struct EfficiencyReport {
  std::vector<EfficiencyRow> rows;
  int n;
  double delta;
  std::uint64_t seed_used;
  int attempts;
};

/// Reference efficiencies of two single-photon schemes next to a simulated
/// honest run of this one. delta > 0 inflates the pair count and lowers
/// the simulated figure below the analytic 1/8.
EfficiencyReport efficiency_report(int n = 64, double delta = 0.0,
                                   std::uint64_t seed = 0);

}  // namespace sqkd::metrics
