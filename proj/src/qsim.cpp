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

#include "sqkd/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sqkd::qsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Bit position (shift amount) of `qubit` inside an amplitude index.
int bit_position(int num_qubits, int qubit) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw ArgumentError("qubit index " + std::to_string(qubit) +
                        " out of range for a " + std::to_string(num_qubits) +
                        "-qubit register");
  }
  return num_qubits - 1 - qubit;
}

bool is_unitary(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd gram = m.adjoint() * m;
  const Eigen::MatrixXcd id =
      Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return (gram - id).cwiseAbs().maxCoeff() <= kTol;
}

}  // namespace

const char* to_string(BellState b) {
  switch (b) {
    case BellState::PhiPlus: return "phi_plus";
    case BellState::PhiMinus: return "phi_minus";
    case BellState::PsiPlus: return "psi_plus";
    case BellState::PsiMinus: return "psi_minus";
  }
  throw InternalError("unknown BellState");
}

std::array<Complex, 4> bell_amplitudes(BellState b) {
  switch (b) {
    case BellState::PhiPlus: return {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
    case BellState::PhiMinus: return {kInvSqrt2, 0.0, 0.0, -kInvSqrt2};
    case BellState::PsiPlus: return {0.0, kInvSqrt2, kInvSqrt2, 0.0};
    case BellState::PsiMinus: return {0.0, kInvSqrt2, -kInvSqrt2, 0.0};
  }
  throw InternalError("unknown BellState");
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  if (num_qubits_ < 1 || num_qubits_ > kMaxRegisterQubits) {
    throw SizeError("register size " + std::to_string(num_qubits_) +
                    " outside [1, " + std::to_string(kMaxRegisterQubits) + "]");
  }
  if (amps_.size() != (std::size_t{1} << num_qubits_)) {
    throw ArgumentError("amplitude count does not match 2^num_qubits");
  }
  if (std::abs(norm_sq() - 1.0) > kTol) {
    throw ValidationError("state vector is not normalized");
  }
}

double StateVector::norm_sq() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

Gate::Gate(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  const auto rows = matrix_.rows();
  if (rows < 2 || rows != matrix_.cols() || (rows & (rows - 1)) != 0) {
    throw ValidationError("gate matrix must be square with 2^t rows");
  }
  arity_ = 0;
  for (auto d = rows; d > 1; d >>= 1) ++arity_;
  if (!is_unitary(matrix_)) {
    throw ValidationError("gate matrix is not unitary");
  }
}

Gate Gate::identity(int arity) {
  const auto dim = Eigen::Index{1} << arity;
  return Gate(Eigen::MatrixXcd::Identity(dim, dim));
}

Gate Gate::pauli_x() {
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  return Gate(x);
}

Gate Gate::cnot() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return Gate(m);
}

DensityMatrix::DensityMatrix(int num_qubits, Eigen::MatrixXcd entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
  if (num_qubits_ < 1 || num_qubits_ > kMaxRegisterQubits) {
    throw SizeError("density matrix register size out of range");
  }
  const auto dim = Eigen::Index{1} << num_qubits_;
  if (entries_.rows() != dim || entries_.cols() != dim) {
    throw ArgumentError("density matrix shape does not match 2^num_qubits");
  }
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kTol) {
    throw ValidationError("density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace().real() - 1.0) > kTol ||
      std::abs(entries_.trace().imag()) > kTol) {
    throw ValidationError("density matrix trace is not 1");
  }
}

void DensityMatrix::validate_psd() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_);
  if (solver.info() != Eigen::Success) {
    throw InternalError("eigendecomposition failed");
  }
  if (solver.eigenvalues().minCoeff() < -kTol) {
    throw ValidationError("density matrix has a negative eigenvalue");
  }
}

StateVector make_register(int num_qubits, int max_qubits) {
  if (num_qubits < 1 || num_qubits > max_qubits ||
      num_qubits > kMaxRegisterQubits) {
    throw SizeError("register size " + std::to_string(num_qubits) +
                    " outside [1, " +
                    std::to_string(std::min(max_qubits, kMaxRegisterQubits)) +
                    "]");
  }
  std::vector<Complex> amps(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
  amps[0] = Complex{1.0, 0.0};
  return StateVector(num_qubits, std::move(amps));
}

StateVector prepare_bell(BellState b) {
  const auto a = bell_amplitudes(b);
  return StateVector(2, std::vector<Complex>(a.begin(), a.end()));
}

StateVector apply_gate(const StateVector& s, const Gate& g,
                       std::span<const int> targets) {
  const int k = s.num_qubits();
  const int t = g.arity();
  if (static_cast<int>(targets.size()) != t) {
    throw ArgumentError("target count does not match gate arity");
  }
  std::vector<int> positions(targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j) {
    positions[j] = bit_position(k, targets[j]);
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) {
        throw ArgumentError("gate targets must be distinct");
      }
    }
  }
  const std::size_t dim = s.dim();
  const std::size_t sub = std::size_t{1} << t;
  // Amplitude-index offset of each gate-basis pattern; pattern bit j
  // (MSB-first) lands on targets[j].
  std::vector<std::size_t> offsets(sub, 0);
  std::size_t mask = 0;
  for (int j = 0; j < t; ++j) mask |= std::size_t{1} << positions[j];
  for (std::size_t p = 0; p < sub; ++p) {
    for (int j = 0; j < t; ++j) {
      if ((p >> (t - 1 - j)) & 1) offsets[p] |= std::size_t{1} << positions[j];
    }
  }

  std::vector<Complex> out(dim, Complex{0.0, 0.0});
  const auto& m = g.matrix();
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (std::size_t row = 0; row < sub; ++row) {
      Complex acc{0.0, 0.0};
      for (std::size_t col = 0; col < sub; ++col) {
        acc += m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) *
               s.amp(base + offsets[col]);
      }
      out[base + offsets[row]] = acc;
    }
  }
  return StateVector(k, std::move(out));
}

double prob_one(const StateVector& s, int qubit) {
  const std::size_t bit = std::size_t{1}
                          << bit_position(s.num_qubits(), qubit);
  double p = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (i & bit) p += std::norm(s.amp(i));
  }
  return p;
}

ZMeasurement measure_z(const StateVector& s, int qubit, RandomStream& rng) {
  const std::size_t bit = std::size_t{1}
                          << bit_position(s.num_qubits(), qubit);
  const double p1 = prob_one(s, qubit);
  const double p0 = 1.0 - p1;
  if (p1 < -kTol || p1 > 1.0 + kTol) {
    throw InternalError("Born probabilities out of range");
  }
  const int outcome = rng.uniform() < p1 ? 1 : 0;
  const double p = outcome ? p1 : p0;
  const double scale = 1.0 / std::sqrt(p);
  std::vector<Complex> out(s.dim(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const bool one = (i & bit) != 0;
    if (one == (outcome == 1)) out[i] = s.amp(i) * scale;
  }
  return {outcome, StateVector(s.num_qubits(), std::move(out))};
}

namespace {

struct BellOverlaps {
  // overlap[b][r]: <B_b| x I applied to the state, indexed by the rest
  // pattern r (the amplitude index with both pair bits cleared).
  std::array<std::vector<Complex>, 4> overlap;
  std::array<double, 4> prob;
  std::size_t bit1, bit2;
};

BellOverlaps bell_overlaps(const StateVector& s, int q1, int q2) {
  if (q1 == q2) throw ArgumentError("Bell measurement needs distinct qubits");
  BellOverlaps result;
  result.bit1 = std::size_t{1} << bit_position(s.num_qubits(), q1);
  result.bit2 = std::size_t{1} << bit_position(s.num_qubits(), q2);
  for (auto& v : result.overlap) v.assign(s.dim(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const int a = (i & result.bit1) ? 1 : 0;
    const int b = (i & result.bit2) ? 1 : 0;
    const std::size_t rest = i & ~result.bit1 & ~result.bit2;
    for (std::size_t o = 0; o < 4; ++o) {
      const auto beta = bell_amplitudes(kAllBellStates[o]);
      result.overlap[o][rest] += std::conj(beta[a * 2 + b]) * s.amp(i);
    }
  }
  double total = 0.0;
  for (std::size_t o = 0; o < 4; ++o) {
    double p = 0.0;
    for (const auto& c : result.overlap[o]) p += std::norm(c);
    result.prob[o] = p;
    total += p;
  }
  if (std::abs(total - 1.0) > kTol) {
    throw InternalError("Bell outcome probabilities do not sum to 1");
  }
  return result;
}

}  // namespace

std::array<double, 4> bell_probabilities(const StateVector& s, int q1, int q2) {
  return bell_overlaps(s, q1, q2).prob;
}

BellMeasurement bell_measure(const StateVector& s, int q1, int q2,
                             RandomStream& rng) {
  const BellOverlaps ov = bell_overlaps(s, q1, q2);
  const double u = rng.uniform();
  std::size_t pick = 0;
  double cumulative = 0.0;
  bool chosen = false;
  for (std::size_t o = 0; o < 4; ++o) {
    cumulative += ov.prob[o];
    if (u < cumulative) {
      pick = o;
      chosen = true;
      break;
    }
  }
  if (!chosen) {
    // Rounding pushed the cumulative sum a hair under u; take the last
    // outcome with nonzero probability.
    for (std::size_t o = 4; o-- > 0;) {
      if (ov.prob[o] > 0.0) {
        pick = o;
        break;
      }
    }
  }

  const auto beta = bell_amplitudes(kAllBellStates[pick]);
  const double scale = 1.0 / std::sqrt(ov.prob[pick]);
  std::vector<Complex> out(s.dim(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const int a = (i & ov.bit1) ? 1 : 0;
    const int b = (i & ov.bit2) ? 1 : 0;
    const std::size_t rest = i & ~ov.bit1 & ~ov.bit2;
    out[i] = beta[a * 2 + b] * ov.overlap[pick][rest] * scale;
  }
  return {kAllBellStates[pick], StateVector(s.num_qubits(), std::move(out))};
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const int k = a.num_qubits() + b.num_qubits();
  if (k > kMaxRegisterQubits) {
    throw SizeError("tensor product exceeds the register cap");
  }
  std::vector<Complex> out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) {
      out[i * b.dim() + j] = a.amp(i) * b.amp(j);
    }
  }
  return StateVector(k, std::move(out));
}

DensityMatrix dm_of(const StateVector& s) {
  const auto dim = static_cast<Eigen::Index>(s.dim());
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = s.amp(static_cast<std::size_t>(i));
  Eigen::MatrixXcd entries = v * v.adjoint();
  return DensityMatrix(s.num_qubits(), std::move(entries));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  const int k = rho.num_qubits();
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw ArgumentError("partial_trace: duplicate qubit in keep set");
  }
  for (int q : kept) bit_position(k, q);  // range check

  std::vector<int> traced;
  for (int q = 0; q < k; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }

  const int kk = static_cast<int>(kept.size());
  const int kt = static_cast<int>(traced.size());
  const std::size_t dim_keep = std::size_t{1} << kk;
  const std::size_t dim_traced = std::size_t{1} << kt;

  const auto compose = [&](std::size_t kept_idx, std::size_t traced_idx) {
    std::size_t idx = 0;
    for (int j = 0; j < kk; ++j) {
      if ((kept_idx >> (kk - 1 - j)) & 1) {
        idx |= std::size_t{1} << bit_position(k, kept[j]);
      }
    }
    for (int j = 0; j < kt; ++j) {
      if ((traced_idx >> (kt - 1 - j)) & 1) {
        idx |= std::size_t{1} << bit_position(k, traced[j]);
      }
    }
    return static_cast<Eigen::Index>(idx);
  };

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(dim_keep), static_cast<Eigen::Index>(dim_keep));
  for (std::size_t i = 0; i < dim_keep; ++i) {
    for (std::size_t j = 0; j < dim_keep; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t tr = 0; tr < dim_traced; ++tr) {
        acc += rho.entries()(compose(i, tr), compose(j, tr));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return DensityMatrix(kk, std::move(out));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw ArgumentError("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.entries() -
                                                         b.entries());
  if (solver.info() != Eigen::Success) {
    throw InternalError("eigendecomposition failed");
  }
  const double half_l1 = 0.5 * solver.eigenvalues().cwiseAbs().sum();
  return std::clamp(half_l1, 0.0, 1.0);
}

DensityMatrix mean_density(std::span<const DensityMatrix> states) {
  if (states.empty()) throw ArgumentError("mean_density: empty input");
  Eigen::MatrixXcd acc = states.front().entries();
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (states[i].num_qubits() != states.front().num_qubits()) {
      throw ArgumentError("mean_density: dimension mismatch");
    }
    acc += states[i].entries();
  }
  acc /= static_cast<double>(states.size());
  return DensityMatrix(states.front().num_qubits(), std::move(acc));
}

}  // namespace sqkd::qsim
