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

#include "sqkd/adversary.hpp"

#include <cmath>
#include <numeric>

namespace sqkd::adversary {

namespace {

using qsim::Complex;
using qsim::StateVector;

/// Replaces the (already collapsed) travel qubit with c|0> + d|1>.
StateVector substitute_qubit(const StateVector& s, int travel_qubit,
                             int collapsed_bit, Complex c, Complex d) {
  const int pos = s.num_qubits() - 1 - travel_qubit;
  const std::size_t bit = std::size_t{1} << pos;
  std::vector<Complex> out(s.dim(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const bool one = (i & bit) != 0;
    if (one != (collapsed_bit == 1)) continue;
    const std::size_t base = i & ~bit;
    out[base] = s.amp(i) * c;
    out[base | bit] = s.amp(i) * d;
  }
  return StateVector(s.num_qubits(), std::move(out));
}

}  // namespace

bool RoundPredicate::applies(std::size_t round) const {
  if (fraction >= 1.0) return true;
  if (fraction <= 0.0) return false;
  const std::uint64_t h = derive_seed(salt, static_cast<std::uint64_t>(round));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < fraction;
}

void AttackSpec::validate() const {
  if (applies_to.fraction < 0.0 || applies_to.fraction > 1.0) {
    throw ValidationError("attack fraction must lie in [0, 1]");
  }
  if (const auto* fake = std::get_if<InterceptResendFake>(&kind)) {
    const double norm = std::norm(fake->c) + std::norm(fake->d);
    if (std::abs(norm - 1.0) > qsim::kTol) {
      throw ValidationError("fake qubit amplitudes must be normalized");
    }
  } else if (const auto* ur = std::get_if<UnitaryReturn>(&kind)) {
    if (ur->ancilla_qubits < 1) {
      throw ValidationError("unitary-return attack needs at least one ancilla");
    }
    if (ur->u.arity() != 1 + ur->ancilla_qubits) {
      throw ValidationError(
          "unitary arity must equal 1 + ancilla count (travel plus ancilla)");
    }
  }
}

const char* kind_name(const AttackSpec& spec) {
  if (std::holds_alternative<NoAttack>(spec.kind)) return "none";
  if (std::holds_alternative<InterceptResendFake>(spec.kind)) return "intercept-fake";
  if (std::holds_alternative<MeasureResendZ>(spec.kind)) return "measure-resend";
  return "unitary-return";
}

bool applies(const AttackSpec& spec, std::size_t round) {
  return !spec.is_none() && spec.applies_to.applies(round);
}

StateVector hook_forward(const StateVector& s, int travel_qubit,
                         const AttackSpec& spec, RandomStream& rng,
                         EveRecord& record, std::size_t round) {
  if (!applies(spec, round)) return s;
  if (const auto* fake = std::get_if<InterceptResendFake>(&spec.kind)) {
    const auto m = qsim::measure_z(s, travel_qubit, rng);
    record.rounds[round].measured_bit = m.bit;
    return substitute_qubit(m.state, travel_qubit, m.bit, fake->c, fake->d);
  }
  if (std::holds_alternative<MeasureResendZ>(spec.kind)) {
    const auto m = qsim::measure_z(s, travel_qubit, rng);
    record.rounds[round].measured_bit = m.bit;
    return m.state;
  }
  return s;
}

StateVector hook_return(const StateVector& s, int travel_qubit,
                        const AttackSpec& spec, RandomStream& /*rng*/,
                        EveRecord& record, std::size_t round) {
  if (!applies(spec, round)) return s;
  const auto* ur = std::get_if<UnitaryReturn>(&spec.kind);
  if (ur == nullptr) return s;

  const int k = s.num_qubits();
  const auto joint = qsim::tensor(s, qsim::make_register(ur->ancilla_qubits));
  std::vector<int> targets;
  targets.reserve(1 + static_cast<std::size_t>(ur->ancilla_qubits));
  targets.push_back(travel_qubit);
  for (int q = 0; q < ur->ancilla_qubits; ++q) targets.push_back(k + q);
  record.rounds[round];  // marks the round as touched even before tracing
  return qsim::apply_gate(joint, ur->u, targets);
}

std::optional<qsim::DensityMatrix> extract_ancilla(const StateVector& s,
                                                   int system_qubits) {
  if (s.num_qubits() <= system_qubits) return std::nullopt;
  std::vector<int> keep;
  for (int q = system_qubits; q < s.num_qubits(); ++q) keep.push_back(q);
  return qsim::partial_trace(qsim::dm_of(s), keep);
}

}  // namespace sqkd::adversary
