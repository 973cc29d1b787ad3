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

#include "sqkd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqkd/errors.hpp"
#include "sqkd/metrics.hpp"
#include "sqkd/protocol.hpp"
#include "sqkd/robustness.hpp"

// Three subcommands over the library:
//   run     protocol trials under a configurable attack
//   scan    return-leg attack sweep (detection vs. leaked information)
//   table2  efficiency comparison against two single-photon schemes
// Output is deterministic for a fixed configuration and seed; the only
// wall-clock field is the timestamp, which --deterministic suppresses.

namespace sqkd::cli {
namespace {

using nlohmann::json;

// %g keeps integers short and is stable across invocations.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw ArgumentError("attack parameter " + key + ": \"" + text +
                        "\" is not a number");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw ArgumentError("attack parameter " + key + ": \"" + text +
                        "\" is not an unsigned integer");
  return v;
}

// "c=0.6,d=0.8" -> {{"c","0.6"},{"d","0.8"}}. Duplicate keys and entries
// without '=' are rejected.
std::map<std::string, std::string> parse_attack_params(
    const std::string& text) {
  std::map<std::string, std::string> kv;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    const std::size_t eq = item.find('=');
    if (item.empty() || eq == std::string::npos || eq == 0)
      throw ArgumentError("attack parameter \"" + item +
                          "\" is not of the form key=value");
    const std::string key = item.substr(0, eq);
    if (!kv.emplace(key, item.substr(eq + 1)).second)
      throw ArgumentError("attack parameter " + key + " given twice");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return kv;
}

struct OutputOptions {
  std::string format = "text";
  bool deterministic = false;
};

void add_output_options(CLI::App* cmd, OutputOptions* oo) {
  cmd->add_option("--format", oo->format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  cmd->add_flag("--deterministic", oo->deterministic,
                "Omit the timestamp so identical configurations produce "
                "byte-identical output");
}

// ---------------------------------------------------------------- run --

struct RunConfig {
  protocol::ProtocolParams params;
  protocol::PostprocParams post;
  int trials = 1;
  std::string attack = "none";
  OutputOptions output;
};

// Everything the emitters need about one finished trial.
struct TrialView {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string status;
  bool completed = false;
  double ctrl_error_rate = 0.0;
  double test_mismatch_rate = 0.0;
  double detection = 0.0;
  metrics::EveInformation eve;
  std::size_t ctrl_rounds = 0;
  std::size_t sift_rounds = 0;
  std::size_t raw_bits = 0;
  std::size_t final_bits = 0;
  bool keys_match = false;
  bool reconcile_success = false;
  int leaked_bits = 0;
  double efficiency = 0.0;
  std::string final_key;
};

TrialView summarize(int trial, const protocol::RunResult& run) {
  TrialView v;
  v.trial = trial;
  v.seed = run.params.seed;
  v.completed = run.completed();
  v.status = v.completed ? "completed" : protocol::abort_id(*run.aborted);
  v.ctrl_error_rate = run.ctrl_error_rate;
  v.test_mismatch_rate = run.test_mismatch_rate;
  v.detection = metrics::detection_probability(run);
  v.eve = metrics::eve_key_information(run);
  for (const auto& r : run.rounds)
    (r.bob_choice == protocol::BobChoice::Ctrl ? v.ctrl_rounds
                                               : v.sift_rounds)++;
  v.raw_bits = run.raw_key_alice.size();
  v.reconcile_success = run.reconcile_success;
  v.leaked_bits = run.leaked_bits;
  if (run.final_key_alice) {
    v.final_bits = run.final_key_alice->size();
    v.final_key = to_string(*run.final_key_alice);
    v.keys_match =
        run.final_key_bob && *run.final_key_alice == *run.final_key_bob;
  }
  const auto& c = run.counts;
  if (c.qubits_sender + c.qubits_receiver > 0)
    v.efficiency = metrics::value(metrics::efficiency_fraction(
        c.sifted_key_bits, c.qubits_sender, c.qubits_receiver));
  return v;
}

struct Aggregate {
  int trials = 0;
  int completed = 0;
  int aborts_insufficient_sift = 0;
  int aborts_ctrl_error_rate = 0;
  int aborts_test_mismatch = 0;
  // Rates are averaged only over trials whose corresponding phase ran.
  double mean_ctrl_error_rate = 0.0;
  std::size_t ctrl_rate_trials = 0;
  double mean_test_mismatch_rate = 0.0;
  std::size_t test_rate_trials = 0;
  double mean_guess_accuracy = 0.0;
  int keys_match = 0;
  metrics::SampleStats detection;
};

Aggregate aggregate_views(const std::vector<TrialView>& views,
                          const std::vector<protocol::RunResult>& runs) {
  Aggregate a;
  a.trials = static_cast<int>(views.size());
  double guess_sum = 0.0;
  for (const auto& v : views) {
    if (v.completed) a.completed++;
    if (v.status == "insufficient_sift") a.aborts_insufficient_sift++;
    if (v.status == "ctrl_error_rate") a.aborts_ctrl_error_rate++;
    if (v.status == "test_mismatch") a.aborts_test_mismatch++;
    if (v.status != "insufficient_sift") {
      a.mean_ctrl_error_rate += v.ctrl_error_rate;
      a.ctrl_rate_trials++;
    }
    if (v.completed || v.status == "test_mismatch") {
      a.mean_test_mismatch_rate += v.test_mismatch_rate;
      a.test_rate_trials++;
    }
    guess_sum += v.eve.guess_accuracy;
    if (v.keys_match) a.keys_match++;
  }
  if (a.ctrl_rate_trials > 0) a.mean_ctrl_error_rate /= a.ctrl_rate_trials;
  if (a.test_rate_trials > 0) a.mean_test_mismatch_rate /= a.test_rate_trials;
  if (a.trials > 0) a.mean_guess_accuracy = guess_sum / a.trials;
  a.detection = metrics::detection_stats(runs);
  return a;
}

json view_json(const TrialView& v) {
  json j;
  j["trial"] = v.trial;
  j["seed"] = v.seed;
  j["status"] = v.status;
  j["ctrl_error_rate"] = v.ctrl_error_rate;
  j["test_mismatch_rate"] = v.test_mismatch_rate;
  j["detection_probability"] = v.detection;
  j["eve"] = {{"guess_accuracy", v.eve.guess_accuracy},
              {"guess_advantage", v.eve.guess_advantage()},
              {"avg_trace_distance", v.eve.avg_trace_distance},
              {"rounds_scored", v.eve.rounds_scored},
              {"ancilla_rounds", v.eve.ancilla_rounds}};
  j["ctrl_rounds"] = v.ctrl_rounds;
  j["sift_rounds"] = v.sift_rounds;
  j["raw_key_bits"] = v.raw_bits;
  j["final_key_bits"] = v.final_bits;
  j["final_key"] = v.final_key;
  j["keys_match"] = v.keys_match;
  j["reconcile_success"] = v.reconcile_success;
  j["leaked_bits"] = v.leaked_bits;
  j["efficiency"] = v.efficiency;
  return j;
}

json aggregate_json(const Aggregate& a) {
  json j;
  j["trials"] = a.trials;
  j["completed"] = a.completed;
  j["aborts"] = {{"insufficient_sift", a.aborts_insufficient_sift},
                 {"ctrl_error_rate", a.aborts_ctrl_error_rate},
                 {"test_mismatch", a.aborts_test_mismatch}};
  j["ctrl_error_rate"] = a.mean_ctrl_error_rate;
  j["ctrl_rate_trials"] = a.ctrl_rate_trials;
  j["test_mismatch_rate"] = a.mean_test_mismatch_rate;
  j["test_rate_trials"] = a.test_rate_trials;
  j["detection_mean"] = a.detection.mean;
  j["detection_stddev"] = a.detection.stddev;
  j["guess_accuracy"] = a.mean_guess_accuracy;
  j["keys_match"] = a.keys_match;
  return j;
}

constexpr const char* kRunCsvHeader =
    "trial,seed,status,ctrl_error_rate,test_mismatch_rate,"
    "detection_probability,guess_accuracy,avg_trace_distance,ctrl_rounds,"
    "sift_rounds,raw_key_bits,final_key_bits,keys_match,reconcile_success,"
    "leaked_bits,efficiency";

void run_csv_row(std::ostream& out, const TrialView& v) {
  out << v.trial << ',' << v.seed << ',' << v.status << ','
      << fmt(v.ctrl_error_rate) << ',' << fmt(v.test_mismatch_rate) << ','
      << fmt(v.detection) << ',' << fmt(v.eve.guess_accuracy) << ','
      << fmt(v.eve.avg_trace_distance) << ',' << v.ctrl_rounds << ','
      << v.sift_rounds << ',' << v.raw_bits << ',' << v.final_bits << ','
      << (v.keys_match ? 1 : 0) << ',' << (v.reconcile_success ? 1 : 0) << ','
      << v.leaked_bits << ',' << fmt(v.efficiency) << '\n';
}

void run_text(std::ostream& out, const RunConfig& cfg,
              const std::vector<TrialView>& views, const Aggregate& a) {
  out << "run: n=" << cfg.params.n << " delta=" << fmt(cfg.params.delta)
      << " ctrl_threshold=" << fmt(cfg.params.p_ctrl_threshold)
      << " test_threshold=" << fmt(cfg.params.p_test_threshold)
      << " attack=" << cfg.attack << " trials=" << cfg.trials
      << " seed=" << cfg.params.seed << '\n';
  if (!cfg.output.deterministic)
    out << "generated: " << utc_timestamp() << '\n';
  for (const auto& v : views) {
    out << "trial " << pad(std::to_string(v.trial), 3) << " seed=" << v.seed
        << " status=" << v.status << " ctrl_err=" << fmt(v.ctrl_error_rate)
        << " test_mis=" << fmt(v.test_mismatch_rate)
        << " detect=" << fmt(v.detection)
        << " guess=" << fmt(v.eve.guess_accuracy)
        << " final_key_bits=" << v.final_bits
        << " match=" << (v.keys_match ? "yes" : "no") << '\n';
  }
  out << "aggregate: completed=" << a.completed << "/" << a.trials
      << " aborts[insufficient_sift=" << a.aborts_insufficient_sift
      << " ctrl_error_rate=" << a.aborts_ctrl_error_rate
      << " test_mismatch=" << a.aborts_test_mismatch << "]" << '\n';
  out << "aggregate: ctrl_error_rate=" << fmt(a.mean_ctrl_error_rate)
      << " (over " << a.ctrl_rate_trials
      << " trials) test_mismatch_rate=" << fmt(a.mean_test_mismatch_rate)
      << " (over " << a.test_rate_trials << " trials)" << '\n';
  out << "aggregate: detection mean=" << fmt(a.detection.mean)
      << " stddev=" << fmt(a.detection.stddev)
      << " guess_accuracy=" << fmt(a.mean_guess_accuracy)
      << " keys_match=" << a.keys_match << '\n';
}

int do_run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.trials < 1) throw ArgumentError("trials must be at least 1");
  cfg.params.validate();
  const adversary::AttackSpec attack = parse_attack(cfg.attack);

  std::vector<protocol::RunResult> runs;
  std::vector<TrialView> views;
  runs.reserve(static_cast<std::size_t>(cfg.trials));
  for (int t = 0; t < cfg.trials; ++t) {
    protocol::ProtocolParams p = cfg.params;
    p.seed = derive_seed(cfg.params.seed, static_cast<std::uint64_t>(t));
    runs.push_back(protocol::run_protocol(p, attack, cfg.post));
    views.push_back(summarize(t, runs.back()));
  }
  const Aggregate agg = aggregate_views(views, runs);

  if (cfg.output.format == "json") {
    json doc;
    doc["command"] = "run";
    doc["config"] = {{"n", cfg.params.n},
                     {"delta", cfg.params.delta},
                     {"ctrl_threshold", cfg.params.p_ctrl_threshold},
                     {"test_threshold", cfg.params.p_test_threshold},
                     {"seed", cfg.params.seed},
                     {"trials", cfg.trials},
                     {"attack", cfg.attack},
                     {"syndrome_length", cfg.post.syndrome_length},
                     {"security_margin", cfg.post.security_margin}};
    if (!cfg.output.deterministic) doc["timestamp"] = utc_timestamp();
    doc["trials"] = json::array();
    for (const auto& v : views) doc["trials"].push_back(view_json(v));
    doc["aggregate"] = aggregate_json(agg);
    out << doc.dump(2) << '\n';
  } else if (cfg.output.format == "csv") {
    out << kRunCsvHeader << '\n';
    for (const auto& v : views) run_csv_row(out, v);
  } else {
    run_text(out, cfg, views, agg);
  }
  return 0;
}

// --------------------------------------------------------------- scan --

struct ScanConfig {
  adversary::ScanOptions opts;
  OutputOptions output;
};

json point_json(const adversary::ScanPoint& p) {
  json j;
  j["family"] = adversary::to_string(p.family);
  j["shared_branches"] = p.shared_branches;
  j["fraction"] = p.fraction;
  j["detection_probability"] = p.detection_probability;
  j["avg_trace_distance"] = p.avg_trace_distance;
  j["guess_advantage"] = p.guess_advantage;
  j["ctrl_rounds"] = p.ctrl_rounds;
  j["test_rounds"] = p.test_rounds;
  j["seed"] = p.seed;
  return j;
}

constexpr const char* kScanCsvHeader =
    "family,shared_branches,fraction,detection_probability,"
    "avg_trace_distance,guess_advantage,ctrl_rounds,test_rounds,seed";

// A point Eve would love: invisible to the checks yet informative.
bool undetected_leak(const adversary::ScanPoint& p) {
  return p.detection_probability < 1e-6 && p.avg_trace_distance > 1e-6;
}

int do_scan(const ScanConfig& cfg, std::ostream& out) {
  const auto points = adversary::robustness_scan(cfg.opts);
  std::size_t leaks = 0;
  for (const auto& p : points)
    if (undetected_leak(p)) leaks++;

  if (cfg.output.format == "json") {
    json doc;
    doc["command"] = "scan";
    doc["config"] = {
        {"samples", cfg.opts.samples},
        {"ancilla_qubits", cfg.opts.ancilla_qubits},
        {"n", cfg.opts.n},
        {"seed", cfg.opts.seed},
        {"measure_resend_points",
         cfg.opts.include_measure_resend ? cfg.opts.measure_resend_points : 0}};
    if (!cfg.output.deterministic) doc["timestamp"] = utc_timestamp();
    doc["points"] = json::array();
    for (const auto& p : points) doc["points"].push_back(point_json(p));
    doc["summary"] = {{"points", points.size()},
                      {"undetected_leaky_points", leaks}};
    out << doc.dump(2) << '\n';
  } else if (cfg.output.format == "csv") {
    out << kScanCsvHeader << '\n';
    for (const auto& p : points) {
      out << adversary::to_string(p.family) << ','
          << (p.shared_branches ? 1 : 0) << ',' << fmt(p.fraction) << ','
          << fmt(p.detection_probability) << ',' << fmt(p.avg_trace_distance)
          << ',' << fmt(p.guess_advantage) << ',' << p.ctrl_rounds << ','
          << p.test_rounds << ',' << p.seed << '\n';
    }
  } else {
    out << "scan: samples=" << cfg.opts.samples
        << " ancilla_qubits=" << cfg.opts.ancilla_qubits
        << " n=" << cfg.opts.n << " seed=" << cfg.opts.seed << '\n';
    if (!cfg.output.deterministic)
      out << "generated: " << utc_timestamp() << '\n';
    std::size_t i = 0;
    for (const auto& p : points) {
      out << "point " << pad(std::to_string(i++), 4)
          << " family=" << pad(adversary::to_string(p.family), 14)
          << " shared=" << (p.shared_branches ? 1 : 0)
          << " fraction=" << fmt(p.fraction)
          << " detect=" << fmt(p.detection_probability)
          << " distance=" << fmt(p.avg_trace_distance)
          << " advantage=" << fmt(p.guess_advantage)
          << " ctrl=" << p.ctrl_rounds << " test=" << p.test_rounds << '\n';
    }
    out << "summary: points=" << points.size()
        << " undetected_leaky_points=" << leaks << '\n';
  }
  return 0;
}

// ------------------------------------------------------------- table2 --

struct TableConfig {
  int n = 64;
  double delta = 0.0;
  std::uint64_t seed = 0;
  OutputOptions output;
};

int do_table(const TableConfig& cfg, std::ostream& out) {
  const auto report = metrics::efficiency_report(cfg.n, cfg.delta, cfg.seed);

  if (cfg.output.format == "json") {
    json doc;
    doc["command"] = "table2";
    doc["config"] = {{"n", cfg.n}, {"delta", cfg.delta}, {"seed", cfg.seed}};
    if (!cfg.output.deterministic) doc["timestamp"] = utc_timestamp();
    doc["rows"] = json::array();
    for (const auto& r : report.rows) {
      doc["rows"].push_back({{"scheme", r.scheme},
                             {"source", r.source},
                             {"sifted_bits", r.sifted_bits},
                             {"sender_qubits", r.sender_qubits},
                             {"receiver_qubits", r.receiver_qubits},
                             {"efficiency", metrics::to_string(r.efficiency)},
                             {"efficiency_value", metrics::value(r.efficiency)},
                             {"note", r.note}});
    }
    doc["attempts"] = report.attempts;
    doc["seed_used"] = report.seed_used;
    out << doc.dump(2) << '\n';
  } else if (cfg.output.format == "csv") {
    out << "scheme,source,sifted_bits,sender_qubits,receiver_qubits,"
           "efficiency,efficiency_value,note\n";
    for (const auto& r : report.rows) {
      out << r.scheme << ',' << r.source << ',' << r.sifted_bits << ','
          << r.sender_qubits << ',' << r.receiver_qubits << ','
          << metrics::to_string(r.efficiency) << ','
          << fmt(metrics::value(r.efficiency)) << ",\"" << r.note << "\"\n";
    }
  } else {
    out << "efficiency comparison: n=" << cfg.n << " delta=" << fmt(cfg.delta)
        << " seed=" << cfg.seed << '\n';
    if (!cfg.output.deterministic)
      out << "generated: " << utc_timestamp() << '\n';
    out << pad("scheme", 12) << pad("source", 11) << pad("sifted", 8)
        << pad("sender", 8) << pad("receiver", 10) << pad("efficiency", 16)
        << "note" << '\n';
    for (const auto& r : report.rows) {
      out << pad(r.scheme, 12) << pad(r.source, 11)
          << pad(std::to_string(r.sifted_bits), 8)
          << pad(std::to_string(r.sender_qubits), 8)
          << pad(std::to_string(r.receiver_qubits), 10)
          << pad(metrics::to_string(r.efficiency) + " (" +
                     fmt(metrics::value(r.efficiency)) + ")",
                 16)
          << r.note << '\n';
    }
  }
  return 0;
}

}  // namespace

adversary::AttackSpec parse_attack(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string name = text.substr(0, colon);
  auto kv = colon == std::string::npos
                ? std::map<std::string, std::string>{}
                : parse_attack_params(text.substr(colon + 1));

  auto take = [&kv](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  adversary::AttackSpec spec;
  if (name == "none") {
    spec.kind = adversary::NoAttack{};
  } else if (name == "measure-resend") {
    spec.kind = adversary::MeasureResendZ{};
  } else if (name == "intercept-fake") {
    double c = 1.0 / std::sqrt(2.0);
    double d = c;
    if (auto v = take("c")) c = parse_double("c", *v);
    if (auto v = take("d")) d = parse_double("d", *v);
    spec.kind = adversary::InterceptResendFake{qsim::Complex(c, 0.0),
                                               qsim::Complex(d, 0.0)};
  } else {
    throw ArgumentError("unknown attack \"" + name +
                        "\": expected none, intercept-fake, or "
                        "measure-resend");
  }
  if (!spec.is_none()) {
    if (auto v = take("fraction"))
      spec.applies_to.fraction = parse_double("fraction", *v);
    if (auto v = take("salt")) spec.applies_to.salt = parse_u64("salt", *v);
  }
  if (!kv.empty())
    throw ArgumentError("unknown attack parameter \"" + kv.begin()->first +
                        "\" for " + name);
  spec.validate();
  return spec;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Semi-quantum key distribution simulator over entangled pairs"};
  app.name("sqkd");
  app.require_subcommand(1);

  RunConfig rc;
  ScanConfig sc;
  TableConfig tc;
  int mr_points = 0;

  auto* run_cmd = app.add_subcommand(
      "run", "Simulate key distribution trials under a configurable attack");
  run_cmd->add_option("--n", rc.params.n, "Raw key block length")
      ->capture_default_str();
  run_cmd
      ->add_option("--delta", rc.params.delta,
                   "Oversampling margin; ceil(4 n (1 + delta)) pairs are "
                   "prepared")
      ->capture_default_str();
  run_cmd
      ->add_option("--ctrl-threshold", rc.params.p_ctrl_threshold,
                   "Abort when the CTRL error rate strictly exceeds this")
      ->capture_default_str();
  run_cmd
      ->add_option("--test-threshold", rc.params.p_test_threshold,
                   "Abort when the TEST mismatch rate strictly exceeds this")
      ->capture_default_str();
  run_cmd
      ->add_option("--seed", rc.params.seed,
                   "Master seed; trial t runs on a seed derived from "
                   "(seed, t)")
      ->envname("SQKD_SEED")
      ->capture_default_str();
  run_cmd->add_option("--trials", rc.trials, "Number of independent trials")
      ->capture_default_str();
  run_cmd
      ->add_option("--attack", rc.attack,
                   "none | intercept-fake[:c=R,d=R] | "
                   "measure-resend[:fraction=F]")
      ->capture_default_str();
  run_cmd
      ->add_option("--syndrome-length", rc.post.syndrome_length,
                   "Parity bits published for reconciliation")
      ->capture_default_str();
  run_cmd
      ->add_option("--security-margin", rc.post.security_margin,
                   "Extra bits removed by hashing; negative selects "
                   "ceil(n / 8)")
      ->capture_default_str();
  add_output_options(run_cmd, &rc.output);

  auto* scan_cmd = app.add_subcommand(
      "scan", "Sweep return-leg attacks and report detection versus leaked "
              "information per sample");
  scan_cmd
      ->add_option("--samples", sc.opts.samples,
                   "Unitary attack samples; sample 0 is the identity "
                   "baseline")
      ->capture_default_str();
  scan_cmd
      ->add_option("--ancilla", sc.opts.ancilla_qubits,
                   "Ancilla qubits Eve attaches per round")
      ->capture_default_str();
  scan_cmd->add_option("--n", sc.opts.n, "Block length per simulated run")
      ->capture_default_str();
  scan_cmd->add_option("--seed", sc.opts.seed, "Master seed for the sweep")
      ->envname("SQKD_SEED")
      ->capture_default_str();
  scan_cmd
      ->add_option("--measure-resend", mr_points,
                   "Append this many forward measure-and-resend fraction "
                   "points (0 disables)")
      ->capture_default_str();
  add_output_options(scan_cmd, &sc.output);

  auto* table_cmd = app.add_subcommand(
      "table2", "Compare qubit efficiency against two single-photon schemes");
  table_cmd->alias("efficiency");
  table_cmd->add_option("--n", tc.n, "Raw key block length")
      ->capture_default_str();
  table_cmd
      ->add_option("--delta", tc.delta,
                   "Oversampling margin for the simulated row")
      ->capture_default_str();
  table_cmd->add_option("--seed", tc.seed, "Seed for the simulated row")
      ->envname("SQKD_SEED")
      ->capture_default_str();
  add_output_options(table_cmd, &tc.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return do_run(rc, out);
    if (scan_cmd->parsed()) {
      if (mr_points < 0)
        throw ArgumentError("measure-resend point count must be nonnegative");
      sc.opts.include_measure_resend = mr_points > 0;
      if (mr_points > 0) sc.opts.measure_resend_points = mr_points;
      return do_scan(sc, out);
    }
    return do_table(tc, out);
  } catch (const ArgumentError& e) {
    err << "sqkd: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const SizeError& e) {
    err << "sqkd: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "sqkd: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const InternalError& e) {
    err << "sqkd: internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "sqkd: internal error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace sqkd::cli
