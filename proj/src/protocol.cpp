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

#include "sqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace sqkd::protocol {

const char* to_string(BobChoice c) {
  return c == BobChoice::Ctrl ? "ctrl" : "sift";
}

const char* abort_id(AbortReason r) {
  switch (r) {
    case AbortReason::InsufficientSift: return "insufficient_sift";
    case AbortReason::CtrlErrorRate: return "ctrl_error_rate";
    case AbortReason::TestMismatch: return "test_mismatch";
  }
  throw InternalError("unknown abort reason");
}

void ProtocolParams::validate() const {
  if (n < 1) throw ArgumentError("block length n must be at least 1");
  if (delta < 0.0) throw ArgumentError("delta must be nonnegative");
  if (p_ctrl_threshold < 0.0 || p_ctrl_threshold > 1.0) {
    throw ArgumentError("ctrl threshold must lie in [0, 1]");
  }
  if (p_test_threshold < 0.0 || p_test_threshold > 1.0) {
    throw ArgumentError("test threshold must lie in [0, 1]");
  }
}

std::size_t ProtocolParams::pair_count() const {
  return static_cast<std::size_t>(std::ceil(4.0 * n * (1.0 + delta)));
}

PreparedRound alice_prepare_round(RandomStream& rng) {
  const int bit = rng.bit();
  auto state = qsim::prepare_bell(qsim::BellState::PhiPlus);
  if (bit) {
    const int home[] = {0};
    state = qsim::apply_gate(state, qsim::Gate::pauli_x(), home);
  }
  return {bit, std::move(state)};
}

BobAction bob_act(const qsim::StateVector& s, int travel_qubit,
                  BobChoice choice, RandomStream& rng) {
  if (choice == BobChoice::Ctrl) return {s, std::nullopt};
  auto m = qsim::measure_z(s, travel_qubit, rng);
  return {std::move(m.state), m.bit};
}

qsim::BellState expected_ctrl_outcome(int encoding_bit) {
  return encoding_bit ? qsim::BellState::PsiPlus : qsim::BellState::PhiPlus;
}

CtrlCheckResult ctrl_check(const qsim::StateVector& s, int encoding_bit,
                           RandomStream& rng) {
  auto m = qsim::bell_measure(s, 0, 1, rng);
  const bool pass = m.outcome == expected_ctrl_outcome(encoding_bit);
  return {m.outcome, pass, std::move(m.state)};
}

Partition partition_rounds(const std::vector<RoundRecord>& rounds, int n) {
  Partition part;
  for (const auto& r : rounds) {
    (r.bob_choice == BobChoice::Ctrl ? part.ctrl : part.sift).push_back(r.index);
  }
  part.insufficient_sift =
      part.sift.size() < 2 * static_cast<std::size_t>(n);
  return part;
}

std::vector<std::size_t> choose_test_indices(
    const std::vector<std::size_t>& pool, int count, RandomStream& rng) {
  if (count < 0 || static_cast<std::size_t>(count) > pool.size()) {
    throw ArgumentError("sample size exceeds the pool");
  }
  std::vector<std::size_t> shuffled = pool;
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
    const std::size_t j =
        i + rng.uniform_int(static_cast<std::uint64_t>(shuffled.size() - i));
    std::swap(shuffled[i], shuffled[j]);
  }
  std::vector<std::size_t> chosen(shuffled.begin(), shuffled.begin() + count);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

bool test_round_mismatch(const RoundRecord& record) {
  if (!record.bob_measured_bit || !record.alice_h_bit) {
    throw InternalError("test comparison on an unmeasured round");
  }
  return *record.bob_measured_bit !=
         (*record.alice_h_bit ^ record.encoding_bit);
}

RunResult run_protocol(const ProtocolParams& params,
                       const adversary::AttackSpec& attack,
                       const PostprocParams& post) {
  params.validate();
  attack.validate();
  if (post.syndrome_length < 0) {
    throw ArgumentError("syndrome length must be nonnegative");
  }

  RunResult result;
  result.params = params;
  const std::size_t count = params.pair_count();
  result.counts.qubits_sender = count;
  result.counts.qubits_receiver = count;
  result.counts.physical_qubit_crossings = 2 * count;

  RandomStream alice_rng(derive_seed(params.seed, kSaltAlice));
  RandomStream bob_rng(derive_seed(params.seed, kSaltBob));
  RandomStream eve_rng(derive_seed(params.seed, kSaltEve));
  RandomStream test_rng(derive_seed(params.seed, kSaltTest));

  std::vector<qsim::StateVector> states;
  states.reserve(count);
  result.rounds.reserve(count);

  for (std::size_t i = 0; i < count; ++i) {
    auto prep = alice_prepare_round(alice_rng);
    auto flying =
        adversary::hook_forward(prep.state, 1, attack, eve_rng, result.eve, i);
    const BobChoice choice = bob_rng.bit() ? BobChoice::Sift : BobChoice::Ctrl;
    auto action = bob_act(flying, 1, choice, bob_rng);
    auto back =
        adversary::hook_return(action.state, 1, attack, eve_rng, result.eve, i);

    RoundRecord rec;
    rec.index = i;
    rec.encoding_bit = prep.encoding_bit;
    rec.bob_choice = choice;
    rec.bob_measured_bit = action.measured_bit;
    result.rounds.push_back(std::move(rec));
    states.push_back(std::move(back));
  }

  // The receiver announces the per-round choices.
  result.eve.heard_sift_flags.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    result.eve.heard_sift_flags[i] =
        result.rounds[i].bob_choice == BobChoice::Sift ? 1 : 0;
  }

  // Whatever Eve entangled on the way back is hers to keep; trace it out
  // of each register as it stands when the run ends.
  const auto capture_ancillas = [&]() {
    for (std::size_t i = 0; i < states.size(); ++i) {
      auto anc = adversary::extract_ancilla(states[i], 2);
      if (anc) result.eve.rounds[i].ancilla = std::move(*anc);
    }
  };

  const Partition part = partition_rounds(result.rounds, params.n);
  if (part.insufficient_sift) {
    result.aborted = AbortReason::InsufficientSift;
    capture_ancillas();
    return result;
  }

  std::size_t ctrl_errors = 0;
  for (std::size_t idx : part.ctrl) {
    auto check = ctrl_check(states[idx], result.rounds[idx].encoding_bit,
                            alice_rng);
    result.rounds[idx].ctrl_outcome = check.outcome;
    states[idx] = std::move(check.state);
    if (!check.pass) ++ctrl_errors;
  }
  result.ctrl_error_rate =
      part.ctrl.empty() ? 0.0
                        : static_cast<double>(ctrl_errors) / part.ctrl.size();
  if (result.ctrl_error_rate > params.p_ctrl_threshold) {
    result.aborted = AbortReason::CtrlErrorRate;
    capture_ancillas();
    return result;
  }

  // Sender reads out every SIFT pair, home qubit then travel qubit. The
  // travel readout is not kept but still collapses the register before
  // Eve's ancilla is traced out.
  for (std::size_t idx : part.sift) {
    auto home = qsim::measure_z(states[idx], 0, alice_rng);
    result.rounds[idx].alice_h_bit = home.bit;
    auto travel = qsim::measure_z(home.state, 1, alice_rng);
    states[idx] = std::move(travel.state);
  }

  // Public comparison over a random SIFT sample of size n.
  result.test_indices = choose_test_indices(part.sift, params.n, test_rng);
  std::size_t mismatches = 0;
  for (std::size_t idx : result.test_indices) {
    auto& rec = result.rounds[idx];
    rec.is_test = true;
    result.eve.heard_test_indices.push_back(idx);
    result.eve.heard_test_bits[idx] = *rec.bob_measured_bit;
    if (test_round_mismatch(rec)) ++mismatches;
  }
  result.test_mismatch_rate =
      static_cast<double>(mismatches) / static_cast<double>(params.n);
  if (result.test_mismatch_rate > params.p_test_threshold) {
    result.aborted = AbortReason::TestMismatch;
    capture_ancillas();
    return result;
  }

  // Surviving SIFT rounds carry the raw key. The sender announces her home
  // bits so the receiver can undo the encoding correlation.
  for (std::size_t idx : part.sift) {
    if (!result.rounds[idx].is_test) result.raw_key_indices.push_back(idx);
  }
  for (std::size_t idx : result.raw_key_indices) {
    const auto& rec = result.rounds[idx];
    result.raw_key_alice.push_back(
        static_cast<std::uint8_t>(rec.encoding_bit));
    result.raw_key_bob.push_back(
        static_cast<std::uint8_t>(*rec.alice_h_bit ^ *rec.bob_measured_bit));
    result.eve.heard_h_bits[idx] = *rec.alice_h_bit;
  }

  result.info_alice.assign(result.raw_key_alice.begin(),
                           result.raw_key_alice.begin() + params.n);
  result.info_bob.assign(result.raw_key_bob.begin(),
                         result.raw_key_bob.begin() + params.n);

  const std::uint64_t parity_seed =
      post.parity_seed.value_or(derive_seed(params.seed, kSaltParity));
  const std::uint64_t hash_seed =
      post.hash_seed.value_or(derive_seed(params.seed, kSaltHash));
  const auto rec = postproc::reconcile(result.info_alice, result.info_bob,
                                       {parity_seed, post.syndrome_length});
  result.reconcile_success = rec.success;
  result.leaked_bits = rec.leaked_bits;
  const int margin = post.security_margin < 0
                         ? postproc::default_security_margin(params.n)
                         : post.security_margin;
  const int final_bits = params.n - rec.leaked_bits - margin;
  if (rec.success && final_bits > 0) {
    result.final_key_alice =
        postproc::privacy_amplify(result.info_alice, {hash_seed, final_bits});
    result.final_key_bob =
        postproc::privacy_amplify(rec.corrected, {hash_seed, final_bits});
  }

  result.counts.sifted_key_bits = static_cast<std::size_t>(params.n);
  capture_ancillas();
  return result;
}

}  // namespace sqkd::protocol
