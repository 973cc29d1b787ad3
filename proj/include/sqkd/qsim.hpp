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

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sqkd/errors.hpp"
#include "sqkd/rng.hpp"

// Minimal exact simulator for small qubit registers: dense statevectors,
// unitary gates, computational-basis and Bell-basis measurement, tensor
// products, density matrices and partial traces.
//
// Qubit index convention: qubit 0 is the MOST significant bit of the
// amplitude index. For a two-qubit pair the home qubit is qubit 0 and the
// travel qubit is qubit 1, so |10> has amplitude index 0b10 = 2.
//
// Every operation returns a fresh value; nothing mutates in place. Each
// thread must own its RandomStream.

namespace sqkd::qsim {

using Complex = std::complex<double>;

/// Tolerance for all norm / unitarity / Hermiticity checks.
inline constexpr double kTol = 1e-10;

/// Dense-register cap: at most 2^12 amplitudes.
inline constexpr int kMaxRegisterQubits = 12;

/// The four maximally entangled two-qubit states. PhiPlus and PsiPlus
/// encode classical 0 and 1 in the key distribution protocol.
enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellState, 4> kAllBellStates = {
    BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus,
    BellState::PsiMinus};

const char* to_string(BellState b);

/// Canonical amplitudes of a Bell state over (|00>, |01>, |10>, |11>).
std::array<Complex, 4> bell_amplitudes(BellState b);

/// Normalized pure state of a k-qubit register.
class StateVector {
 public:
  /// Validates the size (exactly 2^num_qubits, within the register cap)
  /// and that the amplitudes carry unit norm within kTol.
  StateVector(int num_qubits, std::vector<Complex> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const Complex& amp(std::size_t index) const { return amps_[index]; }
  std::span<const Complex> amplitudes() const { return amps_; }

  double norm_sq() const;

 private:
  int num_qubits_;
  std::vector<Complex> amps_;
};

/// Unitary acting on `arity` qubits. Row/column index bit j corresponds to
/// target qubit j, most significant first, matching the register
/// convention above.
class Gate {
 public:
  /// Validates that the matrix is square with power-of-two dimension and
  /// unitary within kTol.
  explicit Gate(Eigen::MatrixXcd matrix);

  int arity() const { return arity_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  static Gate identity(int arity = 1);
  static Gate pauli_x();
  /// Control on the first (more significant) target, X on the second.
  static Gate cnot();

 private:
  Eigen::MatrixXcd matrix_;
  int arity_;
};

/// Hermitian unit-trace matrix over a k-qubit register.
class DensityMatrix {
 public:
  /// Validates shape, Hermiticity and unit trace within kTol. Positive
  /// semidefiniteness is checked separately by validate_psd() since it
  /// needs an eigendecomposition.
  DensityMatrix(int num_qubits, Eigen::MatrixXcd entries);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  /// Throws ValidationError if any eigenvalue is below -kTol.
  void validate_psd() const;

 private:
  int num_qubits_;
  Eigen::MatrixXcd entries_;
};

/// |0...0> on k qubits. Throws SizeError unless 1 <= k <= max_qubits.
StateVector make_register(int num_qubits, int max_qubits = kMaxRegisterQubits);

/// The canonical two-qubit state for b.
StateVector prepare_bell(BellState b);

/// Applies g to the listed target qubits (identity elsewhere). Targets are
/// ordered: targets[0] is the most significant gate index bit.
StateVector apply_gate(const StateVector& s, const Gate& g,
                       std::span<const int> targets);

struct ZMeasurement {
  int bit;
  StateVector state;  // renormalized collapse
};

/// Samples qubit q in the computational basis with Born probabilities.
ZMeasurement measure_z(const StateVector& s, int qubit, RandomStream& rng);

struct BellMeasurement {
  BellState outcome;
  StateVector state;  // renormalized collapse
};

/// Projects qubits (q1, q2) onto the Bell basis, q1 playing the role of
/// the more significant pair member.
BellMeasurement bell_measure(const StateVector& s, int q1, int q2,
                             RandomStream& rng);

/// Kronecker product; a's qubits come first (more significant).
StateVector tensor(const StateVector& a, const StateVector& b);

/// |s><s|.
DensityMatrix dm_of(const StateVector& s);

/// Reduced state over `keep` (relative qubit order preserved); the traced
/// subsystem is summed out. Throws ArgumentError for an empty keep set.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// (1/2)||a - b||_1 via the eigenvalues of the (Hermitian) difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Born probability of reading 1 on qubit q.
double prob_one(const StateVector& s, int qubit);

/// Born probabilities of the four Bell outcomes on (q1, q2), indexed in
/// kAllBellStates order. Sums to 1 for any valid state.
std::array<double, 4> bell_probabilities(const StateVector& s, int q1, int q2);

/// Entrywise mean of density matrices over the same register.
DensityMatrix mean_density(std::span<const DensityMatrix> states);

}  // namespace sqkd::qsim
