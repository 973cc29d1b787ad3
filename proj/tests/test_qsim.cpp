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

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"

using namespace sqkd;
using namespace sqkd::qsim;
using sqkd::testutil::embed_gate_matrix;
using sqkd::testutil::max_amp_delta;
using sqkd::testutil::random_state;
using sqkd::testutil::random_unitary;

namespace {

constexpr double kS = 0.70710678118654752440;  // 1/sqrt(2)

double dm_delta(const DensityMatrix& got, const Eigen::MatrixXcd& want) {
  return (got.entries() - want).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("bell amplitudes match the canonical table") {
  const auto phi_p = bell_amplitudes(BellState::PhiPlus);
  const auto phi_m = bell_amplitudes(BellState::PhiMinus);
  const auto psi_p = bell_amplitudes(BellState::PsiPlus);
  const auto psi_m = bell_amplitudes(BellState::PsiMinus);
  CHECK(std::abs(phi_p[0] - Complex{kS, 0}) < kTol);
  CHECK(std::abs(phi_p[1]) < kTol);
  CHECK(std::abs(phi_p[2]) < kTol);
  CHECK(std::abs(phi_p[3] - Complex{kS, 0}) < kTol);
  CHECK(std::abs(phi_m[0] - Complex{kS, 0}) < kTol);
  CHECK(std::abs(phi_m[3] - Complex{-kS, 0}) < kTol);
  CHECK(std::abs(psi_p[1] - Complex{kS, 0}) < kTol);
  CHECK(std::abs(psi_p[2] - Complex{kS, 0}) < kTol);
  CHECK(std::abs(psi_p[0]) < kTol);
  CHECK(std::abs(psi_m[1] - Complex{kS, 0}) < kTol);
  CHECK(std::abs(psi_m[2] - Complex{-kS, 0}) < kTol);
}

TEST_CASE("bell states are orthonormal") {
  for (auto a : kAllBellStates) {
    for (auto b : kAllBellStates) {
      const auto va = bell_amplitudes(a);
      const auto vb = bell_amplitudes(b);
      Complex inner{0, 0};
      for (int i = 0; i < 4; ++i) inner += std::conj(va[i]) * vb[i];
      const double want = a == b ? 1.0 : 0.0;
      CHECK(std::abs(inner - Complex{want, 0}) < kTol);
    }
  }
}

TEST_CASE("make_register yields the all-zero state and enforces the cap") {
  const auto s = make_register(3);
  CHECK(s.num_qubits() == 3);
  CHECK(s.dim() == 8);
  CHECK(std::abs(s.amp(0) - Complex{1, 0}) < kTol);
  for (std::size_t i = 1; i < s.dim(); ++i) CHECK(std::abs(s.amp(i)) < kTol);

  CHECK_THROWS_AS(make_register(0), SizeError);
  CHECK_THROWS_AS(make_register(kMaxRegisterQubits + 1), SizeError);
  CHECK_THROWS_AS(make_register(5, 4), SizeError);
  CHECK_NOTHROW(make_register(kMaxRegisterQubits));
}

TEST_CASE("state vector constructor validates size and norm") {
  CHECK_THROWS_AS(StateVector(2, std::vector<Complex>(3, Complex{0.5, 0})),
                  ArgumentError);
  CHECK_THROWS_AS(StateVector(1, {Complex{1, 0}, Complex{1, 0}}),
                  ValidationError);
  CHECK_THROWS_AS(StateVector(13, std::vector<Complex>(1 << 13)), SizeError);
}

TEST_CASE("pauli X on the home qubit toggles phi+ and psi+") {
  const int targets[] = {0};
  const auto flipped = apply_gate(prepare_bell(BellState::PhiPlus),
                                  Gate::pauli_x(), targets);
  const auto psi = bell_amplitudes(BellState::PsiPlus);
  CHECK(max_amp_delta(flipped, {psi.begin(), psi.end()}) < kTol);

  const auto back = apply_gate(flipped, Gate::pauli_x(), targets);
  const auto phi = bell_amplitudes(BellState::PhiPlus);
  CHECK(max_amp_delta(back, {phi.begin(), phi.end()}) < kTol);
}

TEST_CASE("cnot controls on the more significant target") {
  const int home[] = {0};
  const auto ten = apply_gate(make_register(2), Gate::pauli_x(), home);
  const int both[] = {0, 1};
  const auto out = apply_gate(ten, Gate::cnot(), both);
  CHECK(std::abs(out.amp(3) - Complex{1, 0}) < kTol);
  CHECK(std::abs(out.amp(2)) < kTol);
}

TEST_CASE("apply_gate matches the embedded matrix on random registers") {
  RandomStream rng(0x51a9u);
  const std::vector<std::vector<int>> target_sets = {
      {0}, {2}, {0, 1}, {0, 2}, {2, 0}, {1, 3}};
  for (const auto& targets : target_sets) {
    const int k = 4;
    const auto dim = Eigen::Index{1} << targets.size();
    const Eigen::MatrixXcd u = random_unitary(static_cast<int>(dim), rng);
    const Eigen::MatrixXcd full = embed_gate_matrix(k, u, targets);
    for (int rep = 0; rep < 4; ++rep) {
      const auto s = random_state(k, rng);
      const auto got = apply_gate(s, Gate(u), targets);
      Eigen::VectorXcd v(s.dim());
      for (std::size_t i = 0; i < s.dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s.amp(i);
      }
      const Eigen::VectorXcd want = full * v;
      double worst = 0.0;
      for (std::size_t i = 0; i < s.dim(); ++i) {
        worst = std::max(worst,
                         std::abs(got.amp(i) - want(static_cast<Eigen::Index>(i))));
      }
      CHECK(worst < 1e-9);
    }
  }
}

TEST_CASE("apply_gate validates targets") {
  const auto s = make_register(2);
  const int too_many[] = {0, 1};
  CHECK_THROWS_AS(apply_gate(s, Gate::pauli_x(), too_many), ArgumentError);
  const int dup[] = {1, 1};
  CHECK_THROWS_AS(apply_gate(s, Gate::cnot(), dup), ArgumentError);
  const int oob[] = {2};
  CHECK_THROWS_AS(apply_gate(s, Gate::pauli_x(), oob), ArgumentError);
}

TEST_CASE("gate constructor rejects bad matrices") {
  Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(2, 2);
  CHECK_THROWS_AS(Gate{ones}, ValidationError);
  Eigen::MatrixXcd odd = Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(Gate{odd}, ValidationError);
  Eigen::MatrixXcd tiny = Eigen::MatrixXcd::Identity(1, 1);
  CHECK_THROWS_AS(Gate{tiny}, ValidationError);
  Eigen::MatrixXcd rect = Eigen::MatrixXcd::Identity(2, 4);
  CHECK_THROWS_AS(Gate{rect}, ValidationError);
}

TEST_CASE("measure_z collapses an entangled pair to correlated bits") {
  bool saw_zero = false;
  bool saw_one = false;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomStream rng(seed);
    const auto m = measure_z(prepare_bell(BellState::PhiPlus), 0, rng);
    (m.bit ? saw_one : saw_zero) = true;
    CHECK(prob_one(m.state, 1) == doctest::Approx(m.bit).epsilon(1e-10));
    CHECK(std::abs(m.state.norm_sq() - 1.0) < kTol);
  }
  CHECK(saw_zero);
  CHECK(saw_one);
}

TEST_CASE("measuring both halves of psi+ yields opposite bits") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    RandomStream rng(seed);
    const auto first = measure_z(prepare_bell(BellState::PsiPlus), 0, rng);
    const auto second = measure_z(first.state, 1, rng);
    CHECK(first.bit != second.bit);
  }
}

TEST_CASE("measure_z frequencies follow Born probabilities") {
  const StateVector s(1, {Complex{std::sqrt(0.3), 0}, Complex{std::sqrt(0.7), 0}});
  RandomStream rng(0xb04au);
  const int trials = 20000;
  int ones = 0;
  for (int i = 0; i < trials; ++i) {
    ones += measure_z(s, 0, rng).bit;
  }
  const double freq = static_cast<double>(ones) / trials;
  // 4 sigma around 0.7 with sigma = sqrt(0.21 / trials).
  CHECK(std::abs(freq - 0.7) < 4.0 * std::sqrt(0.21 / trials));
}

TEST_CASE("bell probabilities of |00> split between the phi outcomes") {
  const auto probs = bell_probabilities(make_register(2), 0, 1);
  CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(probs[2] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(probs[3] == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("bell_measure is deterministic on Bell states and preserves them") {
  for (auto b : kAllBellStates) {
    RandomStream rng(7u);
    const auto m = bell_measure(prepare_bell(b), 0, 1, rng);
    CHECK(m.outcome == b);
    const auto want = bell_amplitudes(b);
    CHECK(max_amp_delta(m.state, {want.begin(), want.end()}) < kTol);
  }
}

TEST_CASE("bell_measure on |00> collapses to the sampled phi state") {
  bool saw_plus = false;
  bool saw_minus = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomStream rng(seed);
    const auto m = bell_measure(make_register(2), 0, 1, rng);
    REQUIRE((m.outcome == BellState::PhiPlus || m.outcome == BellState::PhiMinus));
    (m.outcome == BellState::PhiPlus ? saw_plus : saw_minus) = true;
    const auto want = bell_amplitudes(m.outcome);
    CHECK(max_amp_delta(m.state, {want.begin(), want.end()}) < kTol);
  }
  CHECK(saw_plus);
  CHECK(saw_minus);
}

TEST_CASE("bell_measure acts only on the named pair") {
  // |phi+> on qubits (0, 1) next to |+> on qubit 2: the spectator factor
  // must survive the collapse untouched.
  const StateVector plus(1, {Complex{kS, 0}, Complex{kS, 0}});
  const auto joint = tensor(prepare_bell(BellState::PhiPlus), plus);
  RandomStream rng(3u);
  const auto m = bell_measure(joint, 0, 1, rng);
  CHECK(m.outcome == BellState::PhiPlus);
  CHECK(prob_one(m.state, 2) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("tensor stacks registers most significant first") {
  const int flip[] = {0};
  const auto one = apply_gate(make_register(1), Gate::pauli_x(), flip);
  const auto s = tensor(one, make_register(1));
  CHECK(s.num_qubits() == 2);
  CHECK(std::abs(s.amp(2) - Complex{1, 0}) < kTol);

  const auto s2 = tensor(make_register(1), one);
  CHECK(std::abs(s2.amp(1) - Complex{1, 0}) < kTol);
}

TEST_CASE("partial trace of any Bell pair leaves a maximally mixed qubit") {
  const Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
  for (auto b : kAllBellStates) {
    const auto rho = dm_of(prepare_bell(b));
    const int keep_home[] = {0};
    const int keep_travel[] = {1};
    CHECK(dm_delta(partial_trace(rho, keep_home), half) < kTol);
    CHECK(dm_delta(partial_trace(rho, keep_travel), half) < kTol);
  }
}

TEST_CASE("partial trace keeps marginals of product states") {
  const int flip[] = {1};
  const auto s = apply_gate(make_register(2), Gate::pauli_x(), flip);  // |01>
  const auto rho = dm_of(s);
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
  zero(0, 0) = 1;
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Zero(2, 2);
  one(1, 1) = 1;
  const int keep_home[] = {0};
  const int keep_travel[] = {1};
  CHECK(dm_delta(partial_trace(rho, keep_home), zero) < kTol);
  CHECK(dm_delta(partial_trace(rho, keep_travel), one) < kTol);
}

TEST_CASE("partial trace validates the keep set") {
  const auto rho = dm_of(make_register(2));
  CHECK_THROWS_AS(partial_trace(rho, std::span<const int>{}), ArgumentError);
  const int dup[] = {0, 0};
  CHECK_THROWS_AS(partial_trace(rho, dup), ArgumentError);
  const int oob[] = {2};
  CHECK_THROWS_AS(partial_trace(rho, oob), ArgumentError);
}

TEST_CASE("trace distance separates |0> from |+> by 1/sqrt(2)") {
  const auto zero = dm_of(make_register(1));
  const StateVector plus_state(1, {Complex{kS, 0}, Complex{kS, 0}});
  const auto plus = dm_of(plus_state);
  CHECK(trace_distance(zero, plus) ==
        doctest::Approx(0.7071067811865476).epsilon(1e-10));
}

TEST_CASE("trace distance spans [0, 1]") {
  const auto zero = dm_of(make_register(1));
  const int flip[] = {0};
  const auto one = dm_of(apply_gate(make_register(1), Gate::pauli_x(), flip));
  CHECK(trace_distance(zero, zero) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mean_density averages pure states into the mixed state") {
  const auto zero = dm_of(make_register(1));
  const int flip[] = {0};
  const auto one = dm_of(apply_gate(make_register(1), Gate::pauli_x(), flip));
  const DensityMatrix dms[] = {zero, one};
  const auto mixed = mean_density(dms);
  CHECK(dm_delta(mixed, 0.5 * Eigen::MatrixXcd::Identity(2, 2)) < kTol);
  mixed.validate_psd();
}

TEST_CASE("density matrix constructor rejects bad inputs") {
  Eigen::MatrixXcd skew(2, 2);
  skew << Complex{0.5, 0}, Complex{0, 1}, Complex{0, 1}, Complex{0.5, 0};
  CHECK_THROWS_AS(DensityMatrix(1, skew), ValidationError);

  Eigen::MatrixXcd big_trace = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix(1, big_trace), ValidationError);

  Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(1, indefinite).validate_psd(), ValidationError);

  CHECK_THROWS_AS(DensityMatrix(2, Eigen::MatrixXcd::Identity(2, 2) * 0.5),
                  ArgumentError);
}

TEST_CASE("random stream reproduces sequences and separates derived seeds") {
  RandomStream a(42u);
  RandomStream b(42u);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  CHECK(derive_seed(42u, 0) != derive_seed(42u, 1));
  CHECK(derive_seed(42u, 0) != 42u);
}

TEST_CASE("uniform_int rejects a zero bound and respects the range") {
  RandomStream rng(9u);
  CHECK_THROWS_AS(rng.uniform_int(0), ArgumentError);
  for (int i = 0; i < 1000; ++i) CHECK(rng.uniform_int(7) < 7);
}
