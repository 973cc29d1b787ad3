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

#include "sqkd/metrics.hpp"

#include <cmath>
#include <numeric>

namespace sqkd::metrics {

std::string to_string(const Fraction& f) {
  return std::to_string(f.num) + "/" + std::to_string(f.den);
}

double value(const Fraction& f) {
  return static_cast<double>(f.num) / static_cast<double>(f.den);
}

Fraction efficiency_fraction(std::size_t sifted_bits,
                             std::size_t sender_qubits,
                             std::size_t receiver_qubits) {
  const std::uint64_t den =
      static_cast<std::uint64_t>(sender_qubits) + receiver_qubits;
  if (den == 0) throw ArgumentError("efficiency of an empty transcript");
  const std::uint64_t num = sifted_bits;
  const std::uint64_t g = std::gcd(num, den);
  if (g == 0) return {0, 1};
  return {num / g, den / g};
}

protocol::TranscriptCounts count_transcript(const protocol::RunResult& run) {
  protocol::TranscriptCounts counts;
  counts.qubits_sender = run.rounds.size();
  counts.qubits_receiver = run.rounds.size();
  counts.physical_qubit_crossings = 2 * run.rounds.size();
  counts.sifted_key_bits =
      run.completed() ? static_cast<std::size_t>(run.params.n) : 0;
  return counts;
}

double detection_probability(const protocol::RunResult& run) {
  if (run.rounds.empty()) return 0.0;
  std::size_t fired = 0;
  for (const auto& rec : run.rounds) {
    if (rec.ctrl_outcome &&
        *rec.ctrl_outcome != protocol::expected_ctrl_outcome(rec.encoding_bit)) {
      ++fired;
    }
    if (rec.is_test && protocol::test_round_mismatch(rec)) ++fired;
  }
  return static_cast<double>(fired) / static_cast<double>(run.rounds.size());
}

EveInformation eve_key_information(const protocol::RunResult& run) {
  EveInformation info;
  if (!run.completed() || run.info_alice.empty()) return info;

  const std::size_t n = run.info_alice.size();
  RandomStream coin(derive_seed(run.params.seed, protocol::kSaltEveGuess));

  std::size_t correct = 0;
  // Per announcement stratum, Eve's ancillas split by the key bit.
  std::vector<qsim::DensityMatrix> cell[2][2];
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t idx = run.raw_key_indices[k];
    const int key_bit = run.info_alice[k];
    const int heard_h = run.eve.heard_h_bits.at(idx);

    int guess;
    const auto it = run.eve.rounds.find(idx);
    if (it != run.eve.rounds.end() && it->second.measured_bit) {
      guess = heard_h ^ *it->second.measured_bit;
    } else {
      guess = coin.bit();
    }
    correct += guess == key_bit ? 1 : 0;

    if (it != run.eve.rounds.end() && it->second.ancilla) {
      cell[heard_h][key_bit].push_back(*it->second.ancilla);
      ++info.ancilla_rounds;
    }
  }
  info.rounds_scored = n;
  info.guess_accuracy = static_cast<double>(correct) / static_cast<double>(n);

  if (info.ancilla_rounds > 0) {
    double weighted = 0.0;
    for (int h = 0; h < 2; ++h) {
      const std::size_t stratum = cell[h][0].size() + cell[h][1].size();
      if (stratum == 0 || cell[h][0].empty() || cell[h][1].empty()) continue;
      const double d = qsim::trace_distance(qsim::mean_density(cell[h][0]),
                                            qsim::mean_density(cell[h][1]));
      weighted += d * static_cast<double>(stratum) /
                  static_cast<double>(info.ancilla_rounds);
    }
    info.avg_trace_distance = weighted;
  }
  return info;
}

SampleStats detection_stats(std::span<const protocol::RunResult> runs) {
  SampleStats stats;
  stats.count = runs.size();
  if (runs.empty()) return stats;
  double sum = 0.0;
  std::vector<double> values;
  values.reserve(runs.size());
  for (const auto& run : runs) {
    values.push_back(detection_probability(run));
    sum += values.back();
  }
  stats.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return stats;
}

EfficiencyReport efficiency_report(int n, double delta, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("block length n must be at least 1");
  EfficiencyReport report;
  report.n = n;
  report.delta = delta;

  const auto nn = static_cast<std::size_t>(n);
  report.rows.push_back({"bkm2007", "analytic", nn, 8 * nn, 8 * nn,
                         efficiency_fraction(nn, 8 * nn, 8 * nn),
                         "random-measure single-photon scheme"});
  report.rows.push_back({"zqlwl2009", "analytic", nn, 4 * nn, 4 * nn,
                         efficiency_fraction(nn, 4 * nn, 4 * nn),
                         "single-state single-photon scheme"});
  report.rows.push_back({"bell-pair", "analytic", nn, 4 * nn, 4 * nn,
                         efficiency_fraction(nn, 4 * nn, 4 * nn),
                         "this protocol at delta = 0"});

  // Honest simulated run. With delta = 0 roughly half the seeds land
  // under the 2n sift floor, so walk derived seeds until one completes.
  protocol::ProtocolParams params;
  params.n = n;
  params.delta = delta;
  report.attempts = 0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    params.seed = attempt == 0 ? seed : derive_seed(seed, attempt);
    ++report.attempts;
    const auto run = protocol::run_protocol(params);
    if (!run.completed()) continue;
    report.seed_used = params.seed;
    const auto& c = run.counts;
    std::string note = "simulated honest run";
    if (delta > 0.0) note += " (oversampling lowers the ratio)";
    report.rows.push_back(
        {"bell-pair", "simulated", c.sifted_key_bits, c.qubits_sender,
         c.qubits_receiver,
         efficiency_fraction(c.sifted_key_bits, c.qubits_sender,
                             c.qubits_receiver),
         std::move(note)});
    return report;
  }
  throw InternalError("no honest run completed across 64 derived seeds");
}

}  // namespace sqkd::metrics
