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
#include <optional>
#include <vector>

#include "sqkd/adversary.hpp"
#include "sqkd/bits.hpp"
#include "sqkd/postproc.hpp"
#include "sqkd/qsim.hpp"
#include "sqkd/rng.hpp"

// Two-party key distribution over entangled pairs with a classical
// receiver. Per round, the sender draws a key bit, prepares phi+ (bit 0)
// or psi+ (bit 1) on (home, travel), and sends the travel qubit across.
// The receiver either reflects it untouched (CTRL) or measures it in the
// computational basis and returns the collapsed qubit (SIFT). After the
// receiver announces the per-round choices, the sender Bell-measures every
// CTRL pair against what she prepared, both sides sacrifice a random
// sample of SIFT rounds for a public comparison, and the survivors become
// the raw key: the sender's bit is her encoding, the receiver recovers it
// as (announced home bit) xor (his measured bit). Reconciliation plus
// Toeplitz hashing turn the first n raw bits into the final key.

namespace sqkd::protocol {

enum class BobChoice { Ctrl, Sift };

const char* to_string(BobChoice c);

enum class AbortReason { InsufficientSift, CtrlErrorRate, TestMismatch };

/// Stable identifier: "insufficient_sift", "ctrl_error_rate",
/// "test_mismatch".
const char* abort_id(AbortReason r);

struct ProtocolParams {
  /// Final raw-key block length.
  int n = 64;
  /// Oversampling margin: ceil(4 n (1 + delta)) pairs are prepared.
  double delta = 0.25;
  /// Abort when the CTRL error rate strictly exceeds this.
  double p_ctrl_threshold = 0.0;
  /// Abort when the TEST mismatch rate strictly exceeds this.
  double p_test_threshold = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t pair_count() const;
};

/// Fixed salts for the per-run derived seed streams; every stochastic
/// choice draws from its own stream so that one party's consumption never
/// shifts another's.
inline constexpr std::uint64_t kSaltAlice = 0;
inline constexpr std::uint64_t kSaltBob = 1;
inline constexpr std::uint64_t kSaltEve = 2;
inline constexpr std::uint64_t kSaltTest = 3;
inline constexpr std::uint64_t kSaltParity = 4;
inline constexpr std::uint64_t kSaltHash = 5;
inline constexpr std::uint64_t kSaltEveGuess = 6;

struct PostprocParams {
  int syndrome_length = 16;
  /// Extra bits removed beyond the leaked ones; negative selects
  /// ceil(n / 8).
  int security_margin = -1;
  /// Default to streams derived from the run seed.
  std::optional<std::uint64_t> parity_seed;
  std::optional<std::uint64_t> hash_seed;
};

struct RoundRecord {
  std::size_t index = 0;
  int encoding_bit = 0;
  BobChoice bob_choice = BobChoice::Ctrl;
  /// Present iff the receiver measured (SIFT).
  std::optional<int> bob_measured_bit;
  /// Sender's home-qubit readout; present iff SIFT.
  std::optional<int> alice_h_bit;
  /// Present iff CTRL and the check phase ran.
  std::optional<qsim::BellState> ctrl_outcome;
  bool is_test = false;
};

struct TranscriptCounts {
  /// Raw-key bits distilled (n on completion, 0 on abort).
  std::size_t sifted_key_bits = 0;
  /// Qubits prepared by the sender.
  std::size_t qubits_sender = 0;
  /// Travel qubits handled by the receiver.
  std::size_t qubits_receiver = 0;
  /// Channel uses: each travel qubit crosses twice.
  std::size_t physical_qubit_crossings = 0;
};

struct RunResult {
  ProtocolParams params;
  std::vector<RoundRecord> rounds;
  std::optional<AbortReason> aborted;

  /// Valid once the corresponding phase ran; 0 before that.
  double ctrl_error_rate = 0.0;
  double test_mismatch_rate = 0.0;

  std::vector<std::size_t> test_indices;
  /// SIFT rounds surviving the test sample, ascending. The first n form
  /// the information block.
  std::vector<std::size_t> raw_key_indices;
  Bits raw_key_alice;
  Bits raw_key_bob;
  Bits info_alice;
  Bits info_bob;

  bool reconcile_success = false;
  int leaked_bits = 0;
  std::optional<Bits> final_key_alice;
  std::optional<Bits> final_key_bob;

  TranscriptCounts counts;
  adversary::EveRecord eve;

  bool completed() const { return !aborted.has_value(); }
};

struct PreparedRound {
  int encoding_bit;
  qsim::StateVector state;
};

/// Draws the key bit and prepares the matching Bell pair, home qubit
/// first.
PreparedRound alice_prepare_round(RandomStream& rng);

struct BobAction {
  qsim::StateVector state;
  std::optional<int> measured_bit;
};

/// CTRL reflects; SIFT measures the travel qubit and forwards the
/// collapsed register.
BobAction bob_act(const qsim::StateVector& s, int travel_qubit,
                  BobChoice choice, RandomStream& rng);

/// Bell state the sender expects back for an encoding bit.
qsim::BellState expected_ctrl_outcome(int encoding_bit);

struct CtrlCheckResult {
  qsim::BellState outcome;
  bool pass;
  qsim::StateVector state;
};

/// Bell-measures (home, travel) = (0, 1) and compares with the expectation.
CtrlCheckResult ctrl_check(const qsim::StateVector& s, int encoding_bit,
                           RandomStream& rng);

struct Partition {
  std::vector<std::size_t> ctrl;
  std::vector<std::size_t> sift;
  bool insufficient_sift;
};

/// Splits rounds by announced choice; flags |SIFT| < 2n.
Partition partition_rounds(const std::vector<RoundRecord>& rounds, int n);

/// Uniform sample of `count` indices from `pool`, without replacement,
/// returned ascending.
std::vector<std::size_t> choose_test_indices(
    const std::vector<std::size_t>& pool, int count, RandomStream& rng);

/// Mismatch: the receiver's published bit differs from
/// (sender home bit) xor (encoding bit).
bool test_round_mismatch(const RoundRecord& record);

/// Runs the whole protocol under an optional attack. Deterministic in
/// params.seed for a fixed attack and post-processing configuration.
RunResult run_protocol(const ProtocolParams& params,
                       const adversary::AttackSpec& attack =
                           adversary::AttackSpec::none(),
                       const PostprocParams& post = PostprocParams{});

}  // namespace sqkd::protocol
