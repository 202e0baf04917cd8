// Command-line front end: handshake demos, attack simulations, puzzle
// benchmarks, and proof checking.
//
// Exit codes: 0 success, 1 failed check or rejected proof, 2 bad arguments,
// unreadable files, or parse errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cloudauth/simnet.hpp"
#include "cloudauth/svo/paper_script.hpp"

namespace {

using namespace cloudauth;

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_handshake(const std::string& config_path,
                  std::optional<std::uint64_t> seed, bool show_transcript) {
  auto text = slurp(config_path);
  if (!text) {
    std::cerr << "cannot read " << config_path << "\n";
    return 2;
  }
  auto scenario = simnet::parse_scenario(*text);
  if (!scenario) {
    std::cerr << config_path << ": " << scenario.error() << "\n";
    return 2;
  }
  std::uint64_t use_seed = seed.value_or(scenario.value().seed);
  auto [report, transcript] =
      simnet::run_handshake(use_seed, scenario.value().config);

  std::cout << "seed=" << use_seed << "\n";
  std::cout << "transcript_messages=" << transcript.size() << "\n";
  if (show_transcript) {
    for (std::size_t i = 0; i < transcript.size(); ++i) {
      auto bytes = wire::encode(transcript[i]);
      std::cout << "  [" << i << "] " << wire::type_name(transcript[i]) << " ("
                << bytes.size() << " bytes) " << to_hex(bytes) << "\n";
    }
  }
  std::cout << report.to_text();
  return report.established == 1 && report.sk_agreement ? 0 : 1;
}

int cmd_attack(const std::string& config_path,
               std::optional<std::uint64_t> seed, bool tsv) {
  auto text = slurp(config_path);
  if (!text) {
    std::cerr << "cannot read " << config_path << "\n";
    return 2;
  }
  auto scenario = simnet::parse_scenario(*text);
  if (!scenario) {
    std::cerr << config_path << ": " << scenario.error() << "\n";
    return 2;
  }
  std::uint64_t use_seed = seed.value_or(scenario.value().seed);
  auto report = simnet::run_attack(use_seed, scenario.value().config,
                                   scenario.value().workload);
  std::cout << "seed=" << use_seed << "\n"
            << "workload=" << simnet::to_string(scenario.value().workload.kind)
            << "\n"
            << report.to_text();
  if (tsv) {
    std::cout << "index\tkind\toutcome\n";
    for (const auto& row : report.tsv) std::cout << row << "\n";
  }
  return 0;
}

int cmd_puzzle_bench(int difficulty, int runs, std::uint64_t seed) {
  if (difficulty < 0 || difficulty > 24 || runs < 1) {
    std::cerr << "difficulty must be in [0, 24] and runs >= 1\n";
    return 2;
  }
  Rng rng(seed);
  crypto::Key key = rng.key32();
  std::uint64_t total = 0, min = ~0ull, max = 0;
  auto before = crypto::op_counts();
  std::uint64_t verify_hmac = 0, verify_sha = 0;
  for (int i = 0; i < runs; ++i) {
    auto challenge = puzzle::generate_challenge(key, "bench", difficulty, i, rng);
    auto solution = puzzle::solve(challenge);
    auto snap = crypto::op_counts();
    if (puzzle::verify(key, challenge, solution, i, 1000) !=
        puzzle::PuzzleCheck::accept) {
      std::cerr << "solver produced a non-verifying solution\n";
      return 1;
    }
    verify_hmac += crypto::op_counts().hmac - snap.hmac;
    verify_sha += crypto::op_counts().sha256 - snap.sha256;
    total += solution.attempts;
    min = std::min(min, solution.attempts);
    max = std::max(max, solution.attempts);
  }
  auto after = crypto::op_counts();
  double mean = static_cast<double>(total) / runs;
  std::cout << "difficulty=" << difficulty << "\n"
            << "runs=" << runs << "\n"
            << "expected_attempts=" << puzzle::expected_cost(difficulty) << "\n"
            << "mean_attempts=" << mean << "\n"
            << "min_attempts=" << min << "\n"
            << "max_attempts=" << max << "\n"
            << "total_hashes=" << after.sha256 - before.sha256 << "\n"
            << "verify_mac_per_call=" << static_cast<double>(verify_hmac) / runs
            << "\n"
            << "verify_hash_per_call=" << static_cast<double>(verify_sha) / runs
            << "\n";
  return 0;
}

int report_verdict(const svo::ProofScript& script) {
  auto verdict = svo::check_script(script);
  for (const auto& step : verdict.steps) {
    std::cout << (step.ok ? "  ok   " : "  FAIL ") << step.label;
    if (!step.ok) std::cout << ": " << step.diagnostic;
    std::cout << "\n";
  }
  std::cout << "steps=" << verdict.steps.size() << "\n";
  if (verdict.accepted) {
    std::cout << "ACCEPTED: " << svo::print(script.goal) << "\n";
    return 0;
  }
  std::cout << "REJECTED at "
            << (verdict.failing_label.empty() ? "goal" : verdict.failing_label)
            << ": " << svo::print(script.goal) << "\n";
  return 1;
}

int cmd_svo_check(const std::string& path) {
  auto text = slurp(path);
  if (!text) {
    std::cerr << "cannot read " << path << "\n";
    return 2;
  }
  auto script = svo::parse_script(*text);
  if (!script) {
    std::cerr << path << ": " << script.error().to_string() << "\n";
    return 2;
  }
  return report_verdict(script.value());
}

int cmd_svo_paper() { return report_verdict(svo::paper_derivation()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DoS-resistant authentication engine and SVO proof checker"};
  app.require_subcommand(1);

  std::string config_path;
  std::string script_path;
  std::optional<std::uint64_t> seed;
  bool show_transcript = false;
  bool tsv = false;
  int difficulty = 16;
  int runs = 200;
  std::uint64_t bench_seed = 1;

  auto* handshake = app.add_subcommand(
      "handshake", "Run one seeded handshake and report SK agreement");
  handshake->add_option("--config", config_path, "scenario file")->required();
  handshake->add_option("--seed", seed, "override the scenario seed");
  handshake->add_flag("--transcript", show_transcript,
                      "print the full message transcript");

  auto* attack = app.add_subcommand(
      "attack", "Run an adversarial workload and report server costs");
  attack->add_option("--config", config_path, "scenario file")->required();
  attack->add_option("--seed", seed, "override the scenario seed");
  attack->add_flag("--tsv", tsv, "emit per-message outcomes as TSV");

  auto* bench = app.add_subcommand(
      "puzzle-bench", "Measure solver attempts against the 2^n cost law");
  bench->add_option("--difficulty", difficulty, "leading zero bits")->required();
  bench->add_option("--runs", runs, "number of solves");
  bench->add_option("--seed", bench_seed, "rng seed");

  auto* check = app.add_subcommand("svo-check", "Check a proof script file");
  check->add_option("script", script_path, "proof script path")->required();

  app.add_subcommand("svo-paper", "Check the bundled derivation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (handshake->parsed())
      return cmd_handshake(config_path, seed, show_transcript);
    if (attack->parsed()) return cmd_attack(config_path, seed, tsv);
    if (bench->parsed()) return cmd_puzzle_bench(difficulty, runs, bench_seed);
    if (check->parsed()) return cmd_svo_check(script_path);
    return cmd_svo_paper();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
