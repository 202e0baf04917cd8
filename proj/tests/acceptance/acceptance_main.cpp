// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cloudauth/simnet.hpp"
#include "cloudauth/svo/paper_script.hpp"

using namespace cloudauth;

namespace {

struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <typename A, typename B>
  void expect_eq(const A& a, const B& b, const std::string& what) {
    if (!(a == b)) {
      std::ostringstream os;
      os << what << " (got " << a << ", want " << b << ")";
      failures.push_back(os.str());
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string without_premise(std::string_view label) {
  std::string needle = "premise " + std::string(label) + ":";
  std::istringstream is{std::string(svo::kPaperDerivation)};
  std::string out, line;
  while (std::getline(is, line))
    if (line.rfind(needle, 0) != 0) out += line + "\n";
  return out;
}

// ---- criterion bodies ----------------------------------------------------

void criterion_svo_paper(Check& c) {
  auto start = std::chrono::steady_clock::now();
  auto script = svo::paper_derivation();
  auto verdict = svo::check_script(script);
  double elapsed = seconds_since(start);
  c.expect(verdict.accepted, "bundled derivation must be accepted");
  c.expect(svo::equal(script.goal, svo::believes(svo::atom("CServer"),
                                                 svo::says(svo::atom("client"),
                                                           svo::atom("T")))),
           "goal must be: CServer believes (client says T)");
  c.expect(elapsed < 1.0, "check must finish within 1s");

  const std::pair<const char*, const char*> ablations[] = {
      {"I1", "D2.8"}, {"I2", "D4.5"},  {"C1", "D1.2"},
      {"C2", "D4.13"}, {"P1", "D1.2"}, {"AUX1", "D6.8"},
  };
  int rejections = 0;
  for (const auto& [premise, failing_step] : ablations) {
    auto ablated = svo::parse_script(without_premise(premise));
    if (!ablated.ok()) {
      c.failures.push_back(std::string("ablated script must still parse: ") + premise);
      continue;
    }
    auto v = svo::check_script(ablated.value());
    if (!v.accepted && v.failing_label == failing_step) {
      ++rejections;
    } else {
      c.failures.push_back(std::string("removing ") + premise +
                           " must reject at " + failing_step + ", got " +
                           v.summary());
    }
  }
  c.expect_eq(rejections, 6, "ablation rejections");
}

void criterion_axiom_coverage(Check& c) {
  using svo::AxiomId;
  auto fparse = [](std::string_view t) {
    return svo::parse_formula(t).value();
  };
  for (int i = 0; i <= static_cast<int>(AxiomId::A22); ++i) {
    auto id = static_cast<AxiomId>(i);
    svo::Subst s;
    s["P"] = svo::atom("client");
    s["Q"] = svo::atom("CServer");
    s["R"] = svo::atom("relay");
    s["k"] = svo::atom("PSK");
    s["kp"] = svo::atom("ka");
    s["kq"] = svo::atom("kb");
    s["X"] = svo::atom("T");
    s["Y"] = svo::atom("payload");
    s["Xs"] = svo::tuple({svo::atom("T"), svo::atom("SK")});
    s["Xi"] = svo::atom("T");
    s["phi"] = fparse("fresh(SK)");
    s["psi"] = fparse("fresh(T)");
    s["F"] = svo::atom("h");

    auto inst = instantiate(id, s);
    c.expect(inst.ok(), std::string(to_string(id)) + " accepted instantiation");
    if (inst.ok()) {
      // the instance checks as a step
      svo::ProofStep step;
      step.label = "S";
      step.conclusion = inst.value();
      step.rule = id;
      step.substitution = s;
      svo::detail::Env env;
      c.expect(svo::check_step(env, step).ok(),
               std::string(to_string(id)) + " accepted step");
      // a mangled conclusion is refused
      svo::ProofStep broken = step;
      broken.conclusion = svo::not_f(inst.value());
      c.expect(!svo::check_step(env, broken).ok(),
               std::string(to_string(id)) + " rejected wrong conclusion");
    }
    // a broken substitution is refused
    svo::Subst bad = s;
    bad.erase("P");
    bad.erase("Xs");
    bad.erase("phi");
    bad["k"] = fparse("fresh(SK)");
    c.expect(!instantiate(id, bad).ok(),
             std::string(to_string(id)) + " rejected bad substitution");
  }

  // MP and NEC, accepted and rejected
  auto run = [](std::string_view text) {
    return svo::check_script(svo::parse_script(text).value()).accepted;
  };
  c.expect(run("premise H1: fresh(SK)\n"
               "premise H2: fresh(SK) -> fresh(T)\n"
               "step S1: fresh(T) ; by MP from H1, H2\n"
               "goal: fresh(T)\n"),
           "MP accepted");
  c.expect(!run("premise H1: fresh(SK)\n"
                "premise H2: fresh(SK) -> fresh(T)\n"
                "step S1: fresh(SK) ; by MP from H1, H2\n"
                "goal: fresh(SK)\n"),
           "MP rejected");
  c.expect(run("step S1: client believes fresh(SK) -> fresh(SK) ; by A2 with P := client, phi := fresh(SK)\n"
               "step S2: p believes (client believes fresh(SK) -> fresh(SK)) ; by NEC from S1\n"
               "goal: p believes (client believes fresh(SK) -> fresh(SK))\n"),
           "NEC accepted");
  c.expect(!run("premise H1: fresh(SK)\n"
                "step S1: p believes fresh(SK) ; by NEC from H1\n"
                "goal: p believes fresh(SK)\n"),
           "NEC rejected on a non-theorem");

  // determinism across two passes
  auto script = svo::paper_derivation();
  auto v1 = svo::check_script(script);
  auto v2 = svo::check_script(script);
  bool same = v1.accepted == v2.accepted && v1.steps.size() == v2.steps.size();
  for (std::size_t i = 0; same && i < v1.steps.size(); ++i)
    same = v1.steps[i].ok == v2.steps[i].ok &&
           v1.steps[i].diagnostic == v2.steps[i].diagnostic;
  c.expect(same, "checker deterministic across two passes");
}

void criterion_handshake(Check& c) {
  auto start = std::chrono::steady_clock::now();
  simnet::SimConfig cfg;
  cfg.difficulty = 8;
  int established = 0, agreed = 0, identical = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto [r1, t1] = simnet::run_handshake(seed, cfg);
    auto [r2, t2] = simnet::run_handshake(seed, cfg);
    if (r1.established == 1) ++established;
    if (r1.sk_agreement) ++agreed;
    Bytes b1, b2;
    for (const auto& m : t1) {
      auto e = wire::encode(m);
      b1.insert(b1.end(), e.begin(), e.end());
    }
    for (const auto& m : t2) {
      auto e = wire::encode(m);
      b2.insert(b2.end(), e.begin(), e.end());
    }
    if (b1 == b2 && !b1.empty()) ++identical;
  }
  c.expect_eq(established, 100, "handshakes established");
  c.expect_eq(agreed, 100, "client SK equals token-embedded SK");
  c.expect_eq(identical, 100, "transcripts byte-identical per seed");
  c.expect(seconds_since(start) < 30.0, "runtime under 30s");
}

void criterion_flood(Check& c) {
  auto start = std::chrono::steady_clock::now();
  simnet::SimConfig cfg;
  cfg.difficulty = 8;
  simnet::Workload w;
  w.kind = simnet::WorkloadKind::random_cid_flood;
  w.count = 10'000;
  w.gap_ms = 1;
  auto report = simnet::run_attack(1, cfg, w);
  c.expect_eq(report.flood_expensive_ops, std::uint64_t{0},
              "flood-attributed expensive ops");
  c.expect_eq(report.legit_completion_rate(), 1.0, "legit completion rate");
  c.expect(seconds_since(start) < 10.0, "runtime under 10s");
}

void criterion_rate_rule(Check& c) {
  ServerConfig cfg;
  cfg.master_key = Rng(1).key32();
  cfg.difficulty = 8;
  Server server(cfg);
  Rng rng(2);
  int challenges = 0, blocked = 0;
  for (int i = 0; i < 10; ++i) {
    auto reply = server.handle_hello(wire::Hello{"alice"}, 1000 + i, rng);
    if (std::holds_alternative<wire::Challenge>(reply)) ++challenges;
    if (std::holds_alternative<wire::Blocked>(reply)) ++blocked;
  }
  c.expect_eq(challenges, 3, "challenges within one window");
  c.expect_eq(blocked, 7, "blocked within one window");
  auto after = server.handle_hello(wire::Hello{"alice"},
                                   1000 + cfg.block_duration_ms + 10, rng);
  c.expect(std::holds_alternative<wire::Challenge>(after),
           "post-block hello succeeds after block_duration");
}

void criterion_timestamp(Check& c) {
  simnet::SimConfig cfg;
  cfg.difficulty = 8;
  simnet::Workload w;
  w.kind = simnet::WorkloadKind::stale_stamp;
  w.count = 20;
  w.gap_ms = 4000;
  w.stamp_skew_ms = cfg.stamp_window_ms + 1;
  auto report = simnet::run_attack(3, cfg, w);
  c.expect_eq(report.drops[wire::DropReason::stale_stamp], std::uint64_t{20},
              "responses beyond the window dropped as stale_stamp");

  w.stamp_skew_ms = cfg.stamp_window_ms;  // boundary
  w.count = 5;
  auto boundary = simnet::run_attack(4, cfg, w);
  c.expect_eq(boundary.drops[wire::DropReason::stale_stamp], std::uint64_t{0},
              "boundary |now - T| = window accepted");
  c.expect(boundary.key_deliveries >= 5, "boundary responses earn deliveries");
}

void criterion_puzzle_cost(Check& c) {
  Rng key_rng(77);
  crypto::Key key = key_rng.key32();
  for (int n : {4, 8, 10}) {
    Rng rng(4000 + n);
    double total = 0;
    const int runs = 200;
    for (int i = 0; i < runs; ++i) {
      auto challenge = puzzle::generate_challenge(key, "bench", n, 0, rng);
      total += static_cast<double>(puzzle::solve(challenge).attempts);
    }
    double mean = total / runs;
    double expected = static_cast<double>(puzzle::expected_cost(n));
    std::ostringstream os;
    os << "difficulty " << n << " mean " << mean << " within 25% of " << expected;
    c.expect(mean >= 0.75 * expected && mean <= 1.25 * expected, os.str());
  }
  // verification cost: exactly 1 MAC + 1 hash
  Rng rng(5);
  auto challenge = puzzle::generate_challenge(key, "bench", 10, 0, rng);
  auto solution = puzzle::solve(challenge);
  auto before = crypto::op_counts();
  bool ok = puzzle::verify(key, challenge, solution, 0, 1000) ==
            puzzle::PuzzleCheck::accept;
  auto after = crypto::op_counts();
  c.expect(ok, "solver output verifies");
  c.expect_eq(after.hmac - before.hmac, std::uint64_t{1}, "verify MAC count");
  c.expect_eq(after.sha256 - before.sha256, std::uint64_t{1},
              "verify hash count");
}

void criterion_cost_asymmetry(Check& c) {
  simnet::SimConfig cfg;
  simnet::Workload w;
  w.kind = simnet::WorkloadKind::legitimate;
  w.gap_ms = 4000;
  double previous = 0.0;
  double at16 = 0.0;
  for (int difficulty : {4, 8, 12, 16}) {
    cfg.difficulty = difficulty;
    w.count = difficulty <= 8 ? 40 : (difficulty == 12 ? 10 : 5);
    auto report = simnet::run_attack(120 + difficulty, cfg, w);
    double ratio = simnet::cost_asymmetry(report, difficulty);
    std::ostringstream os;
    os << "ratio monotone at difficulty " << difficulty << " (" << ratio << ")";
    c.expect(ratio >= previous, os.str());
    previous = ratio;
    if (difficulty == 16) at16 = ratio;
  }
  std::ostringstream os;
  os << "difficulty-16 ratio >= 1000 (" << at16 << ")";
  c.expect(at16 >= 1000.0, os.str());
}

void criterion_statelessness(Check& c) {
  ServerConfig cfg;
  cfg.master_key = Rng(9).key32();
  cfg.difficulty = 4;
  Server server(cfg);
  Rng rng(10);
  auto provisioned = server.provision("alice", rng);
  Credentials creds{"alice", provisioned.value().psk,
                    provisioned.value().token};

  auto before = server.state();
  std::uint64_t now = 1000;
  int completed = 0;
  ClientSession last_session(creds);
  for (int i = 0; i < 1000; ++i) {
    ClientSession session(creds);
    auto hello = session.start();
    auto reply = server.handle_hello(hello.value(), now, rng);
    auto* ch = std::get_if<wire::Challenge>(&reply);
    if (!ch) break;
    auto response = session.on_challenge(*ch, now, rng);
    auto delivery = server.handle_response(response.value(), now + 1, rng);
    auto* kd = std::get_if<wire::KeyDelivery>(&delivery);
    if (!kd) break;
    auto confirm = session.on_key(*kd, rng);
    auto established = server.handle_confirm(confirm.value(), now + 2);
    auto* est = std::get_if<wire::Established>(&established);
    if (!est) break;
    session.on_established(*est);
    ++completed;
    last_session = session;
    now += 4000;  // stay under the rate limit
  }
  auto after = server.state();
  c.expect_eq(completed, 1000, "completed handshakes");
  c.expect_eq(after.psk_entries, before.psk_entries,
              "per-session state (beyond bounded tables) unchanged");
  c.expect(after.rate_entries <= cfg.rate_capacity, "rate table bounded");
  c.expect(after.replay_entries <= cfg.replay_capacity, "replay cache bounded");

  // renewal against a server that stores nothing: fresh instance, same
  // master key and registrations, no handshake history
  Server fresh(cfg);
  Rng rng2(11);
  auto renew = last_session.renew(now);
  auto delivery = fresh.renew_subkey(renew.value(), now + 1, rng2);
  auto* kd = std::get_if<wire::KeyDelivery>(&delivery);
  c.expect(kd != nullptr, "fresh server honors renewal from the token alone");
  if (kd) {
    auto confirm = last_session.on_key(*kd, rng2);
    c.expect(confirm.ok(), "client confirms the renewed sub-session key");
    if (confirm.ok()) {
      auto established = fresh.handle_confirm(confirm.value(), now + 2);
      c.expect(std::holds_alternative<wire::Established>(established),
               "renewed session established with zero server-stored keys");
    }
  }
}

void criterion_token_fuzz(Check& c) {
  crypto::Key mk = Rng(21).key32();
  Rng rng(22);
  auto base = token::mint(mk, "alice", 42, rng);
  auto contents = token::open(mk, base).value();
  auto tok = token::extend(mk, contents, rng.bytes(32), 99, rng);

  std::mt19937 gen(23);
  std::uniform_int_distribution<std::size_t> pos(0, tok.ciphertext.size() - 1);
  std::uniform_int_distribution<int> bit(0, 7);
  int rejections = 0;
  for (int i = 0; i < 1000; ++i) {
    token::Token mutated = tok;
    mutated.ciphertext[pos(gen)] ^= static_cast<std::uint8_t>(1u << bit(gen));
    if (!token::open(mk, mutated).ok()) ++rejections;
  }
  c.expect_eq(rejections, 1000, "mutated tokens rejected");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Check&)> body;
  };
  const Criterion criteria[] = {
      {1, "SVO derivation accepted; 6/6 ablations rejected", criterion_svo_paper},
      {2, "axiom schema coverage and determinism", criterion_axiom_coverage},
      {3, "100 seeded handshakes establish with SK agreement", criterion_handshake},
      {4, "random-CID flood causes zero expensive ops", criterion_flood},
      {5, "rate rule: 3 challenges then Blocked, recovery after block",
       criterion_rate_rule},
      {6, "timestamp window enforced with boundary accepted", criterion_timestamp},
      {7, "puzzle cost law and O(1) verification", criterion_puzzle_cost},
      {8, "cost asymmetry >= 1000 at difficulty 16, monotone",
       criterion_cost_asymmetry},
      {9, "statelessness across 1000 handshakes and renewal",
       criterion_statelessness},
      {10, "token integrity fuzz 1000/1000", criterion_token_fuzz},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    criterion.body(check);
    double elapsed = seconds_since(start);
    bool ok = check.failures.empty();
    std::printf("criterion %2d: %-58s %s (%.2fs)\n", criterion.id,
                criterion.name, ok ? "PASS" : "FAIL", elapsed);
    for (const auto& failure : check.failures)
      std::printf("              - %s\n", failure.c_str());
    if (!ok) ++failed;
  }
  if (failed == 0)
    std::printf("all %zu criteria passed\n", std::size(criteria));
  else
    std::printf("%d criteria FAILED\n", failed);
  return failed;
}
