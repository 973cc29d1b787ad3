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
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "sqkd/bits.hpp"
#include "sqkd/qsim.hpp"
#include "sqkd/rng.hpp"

// Eavesdropper models. An attack is a per-round action on the travel qubit,
// applied on the forward leg (sender to receiver) or the return leg
// (receiver back to sender). The protocol runner invokes the hooks; it also
// feeds Eve every classical announcement through EveRecord so that her
// information can be scored afterwards.

namespace sqkd::adversary {

/// Eve does nothing.
struct NoAttack {};

/// Forward leg: measure the travel qubit in the computational basis, keep
/// the outcome, and substitute a fresh qubit c|0> + d|1>.
struct InterceptResendFake {
  qsim::Complex c;
  qsim::Complex d;
};

/// Forward leg: measure the travel qubit in the computational basis, keep
/// the outcome, and forward the collapsed qubit unchanged.
struct MeasureResendZ {};

/// Return leg: adjoin `ancilla_qubits` fresh |0> qubits and apply `u` to
/// (travel, ancilla...). The ancilla stays entangled with the pair and is
/// traced out at the end of the run to score what Eve holds.
struct UnitaryReturn {
  qsim::Gate u;
  int ancilla_qubits;
};

using AttackKind =
    std::variant<NoAttack, InterceptResendFake, MeasureResendZ, UnitaryReturn>;

/// Deterministic per-round coin: round r is attacked iff a hash of
/// (salt, r) falls below `fraction`. Independent of every sampling stream.
struct RoundPredicate {
  double fraction = 1.0;
  std::uint64_t salt = 0;

  bool applies(std::size_t round) const;
};

struct AttackSpec {
  AttackKind kind;
  RoundPredicate applies_to;

  static AttackSpec none() { return AttackSpec{}; }

  bool is_none() const { return std::holds_alternative<NoAttack>(kind); }

  /// Throws ValidationError on an unnormalized fake state, a unitary whose
  /// arity does not cover travel plus ancilla, or a fraction outside [0, 1].
  void validate() const;
};

/// CLI-facing name: "none", "intercept-fake", "measure-resend",
/// "unitary-return".
const char* kind_name(const AttackSpec& spec);

/// True iff the attack acts on this round at all.
bool applies(const AttackSpec& spec, std::size_t round);

/// What Eve gathered about one round.
struct EveRoundIntel {
  std::optional<int> measured_bit;
  std::optional<qsim::DensityMatrix> ancilla;
};

/// Everything Eve accumulates during a run: her own measurements plus the
/// public announcements she overhears.
struct EveRecord {
  std::map<std::size_t, EveRoundIntel> rounds;
  /// Receiver's announced choice per round, 1 = measure-and-resend.
  Bits heard_sift_flags;
  /// Sender's published parity bit for each raw-key round.
  std::map<std::size_t, int> heard_h_bits;
  /// Rounds sacrificed for the public comparison, and the receiver's
  /// published outcomes for them.
  std::vector<std::size_t> heard_test_indices;
  std::map<std::size_t, int> heard_test_bits;
};

/// Eve's action while the travel qubit flies toward the receiver.
qsim::StateVector hook_forward(const qsim::StateVector& s, int travel_qubit,
                               const AttackSpec& spec, RandomStream& rng,
                               EveRecord& record, std::size_t round);

/// Eve's action while the travel qubit flies back. UnitaryReturn grows the
/// register by its ancilla count; other attacks leave it alone.
qsim::StateVector hook_return(const qsim::StateVector& s, int travel_qubit,
                              const AttackSpec& spec, RandomStream& rng,
                              EveRecord& record, std::size_t round);

/// Reduced state of the qubits beyond the first `system_qubits`, or empty
/// when the register holds no ancilla.
std::optional<qsim::DensityMatrix> extract_ancilla(const qsim::StateVector& s,
                                                   int system_qubits);

}  // namespace sqkd::adversary
