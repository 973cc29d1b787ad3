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

#include <cmath>
#include <set>

#include "doctest.h"

using namespace sqkd;
using namespace sqkd::protocol;
using adversary::AttackSpec;

namespace {

ProtocolParams honest_params(std::uint64_t seed) {
  ProtocolParams p;
  p.n = 64;
  p.delta = 0.25;
  p.seed = seed;
  return p;
}

AttackSpec intercept(double c, double d) {
  AttackSpec spec;
  spec.kind = adversary::InterceptResendFake{qsim::Complex{c, 0},
                                             qsim::Complex{d, 0}};
  return spec;
}

AttackSpec measure_resend() {
  AttackSpec spec;
  spec.kind = adversary::MeasureResendZ{};
  return spec;
}

/// X on the travel qubit (the more significant gate input), identity on
/// one ancilla.
AttackSpec travel_flip_attack() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 2) = 1;
  m(1, 3) = 1;
  m(2, 0) = 1;
  m(3, 1) = 1;
  AttackSpec spec;
  spec.kind = adversary::UnitaryReturn{qsim::Gate(m), 1};
  return spec;
}

}  // namespace

TEST_CASE("honest runs complete with matching keys") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto result = run_protocol(honest_params(seed));
    REQUIRE(result.completed());
    CHECK(result.ctrl_error_rate == 0.0);
    CHECK(result.test_mismatch_rate == 0.0);
    CHECK(result.info_alice == result.info_bob);
    CHECK(result.raw_key_alice == result.raw_key_bob);
    CHECK(result.reconcile_success);
    CHECK(result.leaked_bits == 16);
    REQUIRE(result.final_key_alice.has_value());
    REQUIRE(result.final_key_bob.has_value());
    CHECK(*result.final_key_alice == *result.final_key_bob);
    // 64 info bits minus 16 leaked minus ceil(64 / 8) margin.
    CHECK(result.final_key_alice->size() == 40);
    CHECK(result.counts.sifted_key_bits == 64);
    CHECK(result.counts.qubits_sender == 320);
    CHECK(result.counts.qubits_receiver == 320);
    CHECK(result.counts.physical_qubit_crossings == 640);
  }
}

TEST_CASE("raw key bits equal the sender's encodings on honest runs") {
  const auto result = run_protocol(honest_params(7));
  REQUIRE(result.completed());
  REQUIRE(result.raw_key_indices.size() >= 64);
  for (std::size_t k = 0; k < result.raw_key_indices.size(); ++k) {
    const auto& rec = result.rounds[result.raw_key_indices[k]];
    CHECK(static_cast<int>(result.raw_key_alice[k]) == rec.encoding_bit);
  }
  CHECK(result.info_alice ==
        Bits(result.raw_key_alice.begin(), result.raw_key_alice.begin() + 64));
}

TEST_CASE("round records expose exactly the fields their phase produced") {
  const auto result = run_protocol(honest_params(11));
  REQUIRE(result.completed());
  for (const auto& rec : result.rounds) {
    if (rec.bob_choice == BobChoice::Sift) {
      CHECK(rec.bob_measured_bit.has_value());
      CHECK(rec.alice_h_bit.has_value());
      CHECK_FALSE(rec.ctrl_outcome.has_value());
    } else {
      CHECK_FALSE(rec.bob_measured_bit.has_value());
      CHECK_FALSE(rec.alice_h_bit.has_value());
      CHECK(rec.ctrl_outcome.has_value());
      CHECK(*rec.ctrl_outcome == expected_ctrl_outcome(rec.encoding_bit));
    }
    CHECK(rec.is_test == (std::find(result.test_indices.begin(),
                                    result.test_indices.end(),
                                    rec.index) != result.test_indices.end()));
  }
}

TEST_CASE("raw key indices are the sift survivors in order") {
  const auto result = run_protocol(honest_params(13));
  REQUIRE(result.completed());
  const std::set<std::size_t> test_set(result.test_indices.begin(),
                                       result.test_indices.end());
  CHECK(test_set.size() == 64);
  CHECK(std::is_sorted(result.raw_key_indices.begin(),
                       result.raw_key_indices.end()));
  std::size_t sift_total = 0;
  for (const auto& rec : result.rounds) {
    sift_total += rec.bob_choice == BobChoice::Sift ? 1 : 0;
  }
  CHECK(result.raw_key_indices.size() == sift_total - 64);
  for (auto idx : result.raw_key_indices) {
    CHECK(test_set.count(idx) == 0);
    CHECK(result.rounds[idx].bob_choice == BobChoice::Sift);
  }
}

TEST_CASE("eve overhears every announcement") {
  const auto result = run_protocol(honest_params(17));
  REQUIRE(result.completed());
  REQUIRE(result.eve.heard_sift_flags.size() == result.rounds.size());
  for (const auto& rec : result.rounds) {
    CHECK(static_cast<int>(result.eve.heard_sift_flags[rec.index]) ==
          (rec.bob_choice == BobChoice::Sift ? 1 : 0));
  }
  CHECK(result.eve.heard_test_indices == result.test_indices);
  for (auto idx : result.test_indices) {
    CHECK(result.eve.heard_test_bits.at(idx) ==
          *result.rounds[idx].bob_measured_bit);
  }
  CHECK(result.eve.heard_h_bits.size() == result.raw_key_indices.size());
  for (auto idx : result.raw_key_indices) {
    CHECK(result.eve.heard_h_bits.at(idx) == *result.rounds[idx].alice_h_bit);
  }
}

TEST_CASE("a thin sift set aborts before any quantum check") {
  ProtocolParams p;
  p.n = 8;
  p.delta = 0.0;  // 32 pairs, so |SIFT| >= 16 fails for about half the seeds
  bool found = false;
  for (std::uint64_t seed = 0; seed < 200 && !found; ++seed) {
    p.seed = seed;
    const auto result = run_protocol(p);
    if (result.completed()) continue;
    found = true;
    CHECK(*result.aborted == AbortReason::InsufficientSift);
    CHECK(result.counts.sifted_key_bits == 0);
    CHECK_FALSE(result.final_key_alice.has_value());
    CHECK(result.test_indices.empty());
    for (const auto& rec : result.rounds) {
      CHECK_FALSE(rec.ctrl_outcome.has_value());
      CHECK_FALSE(rec.alice_h_bit.has_value());
    }
  }
  CHECK(found);
  CHECK_EQ(std::string(abort_id(AbortReason::InsufficientSift)),
           "insufficient_sift");
}

TEST_CASE("intercepting with a fake qubit trips the ctrl check") {
  ProtocolParams p;
  p.n = 8;
  p.delta = 1.0;
  p.seed = 1;
  const auto result = run_protocol(p, intercept(1.0, 0.0));
  REQUIRE_FALSE(result.completed());
  CHECK(*result.aborted == AbortReason::CtrlErrorRate);
  CHECK(result.ctrl_error_rate > 0.0);
  CHECK(result.counts.sifted_key_bits == 0);
}

TEST_CASE("a travel-qubit flip on the return leg errors every ctrl round") {
  ProtocolParams p;
  p.n = 8;
  p.delta = 1.0;
  p.seed = 3;
  const auto result = run_protocol(p, travel_flip_attack());
  REQUIRE_FALSE(result.completed());
  CHECK(*result.aborted == AbortReason::CtrlErrorRate);
  CHECK(result.ctrl_error_rate == 1.0);
}

TEST_CASE("a permissive ctrl threshold pushes interception into the test phase") {
  ProtocolParams p;
  p.n = 8;
  p.delta = 1.0;
  p.p_ctrl_threshold = 1.0;
  bool found = false;
  for (std::uint64_t seed = 0; seed < 20 && !found; ++seed) {
    p.seed = seed;
    const auto result = run_protocol(p, intercept(0.0, 1.0));
    if (!result.aborted) continue;
    if (*result.aborted != AbortReason::TestMismatch) continue;
    found = true;
    CHECK(result.test_mismatch_rate > 0.0);
    CHECK(result.final_key_alice == std::nullopt);
  }
  CHECK(found);
}

TEST_CASE("measure-resend hides from the test phase but not the ctrl check") {
  ProtocolParams p = honest_params(23);
  p.p_ctrl_threshold = 1.0;
  p.p_test_threshold = 1.0;
  const auto result = run_protocol(p, measure_resend());
  REQUIRE(result.completed());
  // Collapsed pairs pass the Bell comparison half the time.
  std::size_t ctrl_total = 0;
  for (const auto& rec : result.rounds) {
    ctrl_total += rec.bob_choice == BobChoice::Ctrl ? 1 : 0;
  }
  const double sigma = 0.5 / std::sqrt(static_cast<double>(ctrl_total));
  CHECK(std::abs(result.ctrl_error_rate - 0.5) < 4.0 * sigma);
  CHECK(result.test_mismatch_rate == 0.0);
  // Eve's forward measurement pins the receiver's outcome.
  for (const auto& rec : result.rounds) {
    if (rec.bob_choice != BobChoice::Sift) continue;
    CHECK(result.eve.rounds.at(rec.index).measured_bit ==
          rec.bob_measured_bit);
  }
}

TEST_CASE("runs are reproducible and seed sensitive") {
  const auto a = run_protocol(honest_params(31));
  const auto b = run_protocol(honest_params(31));
  REQUIRE(a.completed());
  CHECK(a.info_alice == b.info_alice);
  CHECK(a.test_indices == b.test_indices);
  CHECK(a.final_key_alice == b.final_key_alice);
  REQUIRE(a.rounds.size() == b.rounds.size());
  for (std::size_t i = 0; i < a.rounds.size(); ++i) {
    CHECK(a.rounds[i].encoding_bit == b.rounds[i].encoding_bit);
    CHECK(a.rounds[i].bob_choice == b.rounds[i].bob_choice);
  }

  const auto c = run_protocol(honest_params(32));
  bool differs = a.completed() != c.completed();
  for (std::size_t i = 0; !differs && i < a.rounds.size() && i < c.rounds.size();
       ++i) {
    differs = a.rounds[i].encoding_bit != c.rounds[i].encoding_bit;
  }
  CHECK(differs);
}

TEST_CASE("postproc knobs control the final key length") {
  ProtocolParams p = honest_params(37);
  p.n = 16;

  PostprocParams cheap;
  cheap.syndrome_length = 0;
  cheap.security_margin = 0;
  const auto full = run_protocol(p, AttackSpec::none(), cheap);
  REQUIRE(full.completed());
  REQUIRE(full.final_key_alice.has_value());
  CHECK(full.final_key_alice->size() == 16);
  CHECK(full.leaked_bits == 0);

  PostprocParams leaky;  // 16 - 16 - ceil(16/8) < 0: nothing survives
  leaky.syndrome_length = 16;
  const auto empty = run_protocol(p, AttackSpec::none(), leaky);
  REQUIRE(empty.completed());
  CHECK(empty.reconcile_success);
  CHECK_FALSE(empty.final_key_alice.has_value());
}

TEST_CASE("parameter validation rejects nonsense") {
  ProtocolParams p;
  p.n = 0;
  CHECK_THROWS_AS(run_protocol(p), ArgumentError);
  p = ProtocolParams{};
  p.delta = -0.1;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  p = ProtocolParams{};
  p.p_ctrl_threshold = 1.5;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  p = ProtocolParams{};
  p.p_test_threshold = -0.5;
  CHECK_THROWS_AS(p.validate(), ArgumentError);

  PostprocParams post;
  post.syndrome_length = -1;
  CHECK_THROWS_AS(run_protocol(ProtocolParams{}, AttackSpec::none(), post),
                  ArgumentError);
}

TEST_CASE("pair count rounds up the oversampling margin") {
  ProtocolParams p;
  p.n = 3;
  p.delta = 0.1;
  CHECK(p.pair_count() == 14);  // ceil(13.2)
  p.n = 1;
  p.delta = 0.0;
  CHECK(p.pair_count() == 4);
  p.n = 64;
  p.delta = 0.25;
  CHECK(p.pair_count() == 320);
}

TEST_CASE("test sampling is uniform without replacement") {
  const std::vector<std::size_t> pool{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  RandomStream rng(0x7e57u);
  int zero_hits = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    const auto picked = choose_test_indices(pool, 4, rng);
    CHECK(picked.size() == 4);
    CHECK(std::is_sorted(picked.begin(), picked.end()));
    const std::set<std::size_t> unique(picked.begin(), picked.end());
    CHECK(unique.size() == 4);
    for (auto v : picked) CHECK(v < 10);
    zero_hits += unique.count(0) ? 1 : 0;
  }
  const double freq = static_cast<double>(zero_hits) / trials;
  CHECK(std::abs(freq - 0.4) < 4.0 * std::sqrt(0.4 * 0.6 / trials));

  CHECK_THROWS_AS(choose_test_indices(pool, 11, rng), ArgumentError);
}

TEST_CASE("test comparison mirrors the encoding correlation") {
  RoundRecord rec;
  rec.encoding_bit = 0;
  rec.alice_h_bit = 1;
  rec.bob_measured_bit = 1;
  CHECK_FALSE(test_round_mismatch(rec));
  rec.encoding_bit = 1;
  CHECK(test_round_mismatch(rec));
  rec.bob_measured_bit.reset();
  CHECK_THROWS_AS(test_round_mismatch(rec), InternalError);
}
