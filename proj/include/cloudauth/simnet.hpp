#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cloudauth/client.hpp"
#include "cloudauth/result.hpp"
#include "cloudauth/server.hpp"
#include "cloudauth/wire.hpp"

namespace cloudauth::simnet {

// The only clock in the system under test. Nothing below this layer may
// read wall time; every timestamp traces back here.
class SimClock {
 public:
  std::uint64_t now() const { return now_ms_; }
  void advance(std::uint64_t delta_ms) { now_ms_ += delta_ms; }

 private:
  std::uint64_t now_ms_ = 0;
};

enum class WorkloadKind {
  legitimate,
  random_cid_flood,
  fixed_cid_flood,
  replay,
  stale_stamp,
  forged_token,
  mixed,
};

inline const char* to_string(WorkloadKind k) {
  switch (k) {
    case WorkloadKind::legitimate: return "legitimate";
    case WorkloadKind::random_cid_flood: return "random_cid_flood";
    case WorkloadKind::fixed_cid_flood: return "fixed_cid_flood";
    case WorkloadKind::replay: return "replay";
    case WorkloadKind::stale_stamp: return "stale_stamp";
    case WorkloadKind::forged_token: return "forged_token";
    case WorkloadKind::mixed: return "mixed";
  }
  return "?";
}

inline std::optional<WorkloadKind> workload_kind_from(std::string_view s) {
  if (s == "legitimate") return WorkloadKind::legitimate;
  if (s == "random_cid_flood") return WorkloadKind::random_cid_flood;
  if (s == "fixed_cid_flood") return WorkloadKind::fixed_cid_flood;
  if (s == "replay") return WorkloadKind::replay;
  if (s == "stale_stamp") return WorkloadKind::stale_stamp;
  if (s == "forged_token") return WorkloadKind::forged_token;
  if (s == "mixed") return WorkloadKind::mixed;
  return std::nullopt;
}

struct Workload {
  WorkloadKind kind = WorkloadKind::legitimate;
  int count = 1;
  std::uint64_t gap_ms = 1;          // sim-time between injections
  std::uint64_t stamp_skew_ms = 0;   // stale_stamp: T = now - skew
  std::uint64_t replay_delay_ms = 0; // replay: wait before re-injecting
  std::string target_cid;            // fixed_cid_flood target / forged_token donor
  int drop_every_nth = 0;            // lossy delivery knob, 0 = lossless
};

struct SimConfig {
  int difficulty = 8;
  int rate_max = 3;
  std::uint64_t rate_window_ms = 10'000;
  std::uint64_t block_duration_ms = 60'000;
  std::uint64_t stamp_window_ms = 60'000;
  std::uint64_t challenge_max_age_ms = 60'000;
  std::uint64_t replay_ttl_ms = 60'000;
  std::size_t rate_capacity = 4096;
  std::size_t replay_capacity = 4096;
  int client_difficulty_ceiling = 24;

  ServerConfig server_config(const crypto::Key& master_key) const {
    ServerConfig s;
    s.master_key = master_key;
    s.difficulty = difficulty;
    s.rate_max = rate_max;
    s.rate_window_ms = rate_window_ms;
    s.block_duration_ms = block_duration_ms;
    s.stamp_window_ms = stamp_window_ms;
    s.challenge_max_age_ms = challenge_max_age_ms;
    s.replay_ttl_ms = replay_ttl_ms;
    s.rate_capacity = rate_capacity;
    s.replay_capacity = replay_capacity;
    return s;
  }
};

struct RunReport {
  CostMeter meter;  // final server meter
  std::uint64_t injected = 0;
  std::uint64_t challenges = 0;
  std::uint64_t blocked = 0;
  std::uint64_t key_deliveries = 0;
  std::uint64_t established = 0;
  std::map<wire::DropReason, std::uint64_t> drops;

  std::uint64_t flood_expensive_ops = 0;  // expensive delta caused by workload traffic
  std::uint64_t attacker_hash_ops = 0;    // requester-side puzzle hashing
  std::uint64_t attacker_responses = 0;   // phase-3 requests reaching the server
  std::uint64_t server_response_ops = 0;  // server ops spent inside handle_response
  std::uint64_t responses_handled = 0;

  std::uint64_t legit_attempted = 0;
  std::uint64_t legit_completed = 0;
  std::uint64_t lost = 0;  // injections eaten by the lossy-delivery knob
  bool sk_agreement = true;
  std::uint64_t elapsed_ms = 0;

  std::vector<std::string> tsv;  // "index\tkind\toutcome" per injected message

  std::uint64_t dropped_total() const {
    std::uint64_t n = 0;
    for (const auto& [r, c] : drops) n += c;
    return n;
  }

  double legit_completion_rate() const {
    return legit_attempted == 0
               ? 1.0
               : static_cast<double>(legit_completed) / legit_attempted;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << meter.report();
    os << "injected=" << injected << '\n'
       << "challenges=" << challenges << '\n'
       << "blocked_replies=" << blocked << '\n'
       << "key_deliveries=" << key_deliveries << '\n'
       << "established_replies=" << established << '\n';
    for (const auto& [reason, count] : drops)
      os << "drop_" << wire::to_string(reason) << '=' << count << '\n';
    os << "flood_expensive_ops=" << flood_expensive_ops << '\n'
       << "attacker_hash_ops=" << attacker_hash_ops << '\n'
       << "attacker_responses=" << attacker_responses << '\n'
       << "server_response_ops=" << server_response_ops << '\n'
       << "responses_handled=" << responses_handled << '\n'
       << "legit_attempted=" << legit_attempted << '\n'
       << "legit_completed=" << legit_completed << '\n'
       << "legit_completion_rate=" << legit_completion_rate() << '\n'
       << "lost=" << lost << '\n'
       << "sk_agreement=" << (sk_agreement ? 1 : 0) << '\n'
       << "elapsed_sim_ms=" << elapsed_ms << '\n';
    return os.str();
  }
};

namespace detail {

struct Tally {
  RunReport& report;
  // Records the server's reply to one injected message.
  void record(const wire::Message& reply, const char* kind) {
    ++report.injected;
    const char* outcome = wire::type_name(reply);
    std::string out = outcome;
    if (auto* c = std::get_if<wire::Challenge>(&reply)) {
      (void)c;
      ++report.challenges;
    } else if (std::holds_alternative<wire::Blocked>(reply)) {
      ++report.blocked;
    } else if (std::holds_alternative<wire::KeyDelivery>(reply)) {
      ++report.key_deliveries;
    } else if (std::holds_alternative<wire::Established>(reply)) {
      ++report.established;
    } else if (auto* d = std::get_if<wire::Drop>(&reply)) {
      ++report.drops[d->reason];
      out += std::string(":") + wire::to_string(d->reason);
    }
    report.tsv.push_back(std::to_string(report.injected - 1) + "\t" + kind +
                         "\t" + out);
  }
};

// Drives one full handshake for `session` against `server`, recording
// outcomes. Returns true when Established was reached.
inline bool drive_handshake(Server& server, ClientSession& session,
                            SimClock& clock, Rng& rng, Tally& tally,
                            RunReport& report, const char* kind,
                            std::vector<wire::Message>* transcript = nullptr) {
  auto push = [&](const wire::Message& m) {
    if (transcript) transcript->push_back(m);
  };

  auto hello = session.start();
  if (!hello) return false;
  push(hello.value());
  ++report.legit_attempted;
  clock.advance(1);
  wire::Message reply = server.handle(hello.value(), clock.now(), rng);
  tally.record(reply, kind);
  push(reply);
  auto* challenge = std::get_if<wire::Challenge>(&reply);
  if (!challenge) {
    session.reset();
    return false;
  }

  clock.advance(1);
  std::uint64_t before_attempts = session.solve_attempts();
  auto response = session.on_challenge(*challenge, clock.now(), rng);
  if (!response) return false;
  report.attacker_hash_ops += session.solve_attempts() - before_attempts;
  push(response.value());
  clock.advance(1);
  auto before = server.meter();
  reply = server.handle(response.value(), clock.now(), rng);
  report.server_response_ops += (server.meter().cheap_ops - before.cheap_ops) +
                                (server.meter().expensive_ops - before.expensive_ops);
  ++report.responses_handled;
  ++report.attacker_responses;
  tally.record(reply, kind);
  push(reply);
  auto* delivery = std::get_if<wire::KeyDelivery>(&reply);
  if (!delivery) {
    session.reset();
    return false;
  }

  clock.advance(1);
  auto confirm = session.on_key(*delivery, rng);
  if (!confirm) return false;
  push(confirm.value());
  clock.advance(1);
  reply = server.handle(confirm.value(), clock.now(), rng);
  tally.record(reply, kind);
  push(reply);
  auto* established = std::get_if<wire::Established>(&reply);
  if (!established) {
    session.reset();
    return false;
  }
  if (!session.on_established(*established)) return false;
  ++report.legit_completed;
  return true;
}

}  // namespace detail

// One provisioned client, one clean five-message handshake (plus the
// closing Established). Deterministic: the transcript is a pure function
// of (seed, config).
inline std::pair<RunReport, std::vector<wire::Message>> run_handshake(
    std::uint64_t seed, const SimConfig& cfg) {
  Rng rng(seed);
  crypto::Key master_key = rng.key32();
  Server server(cfg.server_config(master_key));
  SimClock clock;

  auto provisioned = server.provision("alice", rng, clock.now());
  ClientSession session(
      Credentials{"alice", provisioned.value().psk, provisioned.value().token},
      cfg.client_difficulty_ceiling);

  RunReport report;
  detail::Tally tally{report};
  std::vector<wire::Message> transcript;
  bool ok = detail::drive_handshake(server, session, clock, rng, tally, report,
                                    "legitimate", &transcript);
  if (ok) {
    // The harness holds MK, so it can check both sides agreed on SK.
    auto contents = token::open(master_key, session.token_current());
    report.sk_agreement = contents.ok() && contents.value().session_key_info &&
                          session.session_key() &&
                          crypto::ct_equal(*contents.value().session_key_info,
                                           *session.session_key());
  } else {
    report.sk_agreement = false;
  }
  report.meter = server.meter();
  report.elapsed_ms = clock.now();
  return {std::move(report), std::move(transcript)};
}

// Injects an adversarial workload interleaved with one legitimate client
// handshake at the midpoint, and reports what it cost the server.
inline RunReport run_attack(std::uint64_t seed, const SimConfig& cfg,
                            const Workload& workload) {
  if (workload.count < 1) throw std::invalid_argument("workload count must be >= 1");
  Rng rng(seed);
  crypto::Key master_key = rng.key32();
  Server server(cfg.server_config(master_key));
  SimClock clock;

  auto alice = server.provision("alice", rng, clock.now());
  Credentials alice_creds{"alice", alice.value().psk, alice.value().token};
  // mallory holds valid credentials too: several workloads model insiders
  // or stolen registrations that still must not get past validation.
  auto mallory = server.provision("mallory", rng, clock.now());
  Credentials mallory_creds{"mallory", mallory.value().psk,
                            mallory.value().token};

  RunReport report;
  detail::Tally tally{report};

  // Backdated stamps need a past to point into.
  if (workload.kind == WorkloadKind::stale_stamp)
    clock.advance(workload.stamp_skew_ms);

  // A captured valid response for the replay workload.
  std::optional<wire::Response> captured;
  if (workload.kind == WorkloadKind::replay) {
    ClientSession victim(alice_creds, cfg.client_difficulty_ceiling);
    auto hello = victim.start();
    clock.advance(1);
    wire::Message reply = server.handle(hello.value(), clock.now(), rng);
    tally.record(reply, "capture");
    auto* ch = std::get_if<wire::Challenge>(&reply);
    if (!ch) throw std::logic_error("capture handshake refused");
    clock.advance(1);
    auto response = victim.on_challenge(*ch, clock.now(), rng);
    report.attacker_hash_ops += victim.solve_attempts();
    captured = response.value();
    clock.advance(1);
    auto before = server.meter();
    reply = server.handle(*captured, clock.now(), rng);
    report.server_response_ops +=
        (server.meter().cheap_ops - before.cheap_ops) +
        (server.meter().expensive_ops - before.expensive_ops);
    ++report.responses_handled;
    tally.record(reply, "capture");
    clock.advance(workload.replay_delay_ms);
  }

  auto inject_one = [&](int i) {
    const char* kind = to_string(workload.kind);
    switch (workload.kind) {
      case WorkloadKind::legitimate: {
        ClientSession session(alice_creds, cfg.client_difficulty_ceiling);
        detail::drive_handshake(server, session, clock, rng, tally, report,
                                kind);
        break;
      }
      case WorkloadKind::random_cid_flood: {
        auto before = server.meter();
        wire::Message reply = server.handle(
            wire::Hello{to_hex(rng.bytes(8))}, clock.now(), rng);
        report.flood_expensive_ops +=
            server.meter().expensive_ops - before.expensive_ops;
        tally.record(reply, kind);
        break;
      }
      case WorkloadKind::fixed_cid_flood: {
        const std::string& cid =
            workload.target_cid.empty() ? alice_creds.client_id
                                        : workload.target_cid;
        auto before = server.meter();
        wire::Message reply = server.handle(wire::Hello{cid}, clock.now(), rng);
        report.flood_expensive_ops +=
            server.meter().expensive_ops - before.expensive_ops;
        tally.record(reply, kind);
        break;
      }
      case WorkloadKind::replay: {
        auto before = server.meter();
        wire::Message reply = server.handle(*captured, clock.now(), rng);
        report.flood_expensive_ops +=
            server.meter().expensive_ops - before.expensive_ops;
        report.server_response_ops +=
            (server.meter().cheap_ops - before.cheap_ops) +
            (server.meter().expensive_ops - before.expensive_ops);
        ++report.responses_handled;
        ++report.attacker_responses;
        tally.record(reply, kind);
        break;
      }
      case WorkloadKind::stale_stamp: {
        // Full puzzle effort with honest credentials, but a stamp outside
        // the window: T = now - stamp_skew_ms.
        wire::Message reply =
            server.handle(wire::Hello{"mallory"}, clock.now(), rng);
        tally.record(reply, kind);
        auto* ch = std::get_if<wire::Challenge>(&reply);
        if (!ch) break;
        clock.advance(1);
        auto solution = puzzle::solve(ch->puzzle);
        report.attacker_hash_ops += solution.attempts;
        std::uint64_t skewed =
            clock.now() > workload.stamp_skew_ms
                ? clock.now() - workload.stamp_skew_ms
                : 0;
        Bytes stamp_plain;
        put_u64_be(stamp_plain, skewed);
        wire::Response resp;
        resp.token = mallory_creds.token;
        resp.solution = std::move(solution);
        resp.challenge = ch->puzzle;
        resp.client_id = "mallory";
        resp.stamp_ct =
            crypto::aead_seal(mallory_creds.psk, rng.nonce12(), stamp_plain);
        auto before = server.meter();
        reply = server.handle(resp, clock.now(), rng);
        report.server_response_ops +=
            (server.meter().cheap_ops - before.cheap_ops) +
            (server.meter().expensive_ops - before.expensive_ops);
        ++report.responses_handled;
        ++report.attacker_responses;
        tally.record(reply, kind);
        break;
      }
      case WorkloadKind::forged_token: {
        wire::Message reply =
            server.handle(wire::Hello{"mallory"}, clock.now(), rng);
        tally.record(reply, kind);
        auto* ch = std::get_if<wire::Challenge>(&reply);
        if (!ch) break;
        clock.advance(1);
        auto solution = puzzle::solve(ch->puzzle);
        report.attacker_hash_ops += solution.attempts;
        Bytes stamp_plain;
        put_u64_be(stamp_plain, clock.now());
        wire::Response resp;
        // Donor token (wrong CID inside) or random bytes.
        if (!workload.target_cid.empty())
          resp.token = alice_creds.token;
        else
          resp.token.ciphertext = rng.bytes(64);
        resp.solution = std::move(solution);
        resp.challenge = ch->puzzle;
        resp.client_id = "mallory";
        resp.stamp_ct =
            crypto::aead_seal(mallory_creds.psk, rng.nonce12(), stamp_plain);
        auto before = server.meter();
        reply = server.handle(resp, clock.now(), rng);
        report.server_response_ops +=
            (server.meter().cheap_ops - before.cheap_ops) +
            (server.meter().expensive_ops - before.expensive_ops);
        ++report.responses_handled;
        ++report.attacker_responses;
        tally.record(reply, kind);
        break;
      }
      case WorkloadKind::mixed: {
        // rotates through the three stateless attack kinds
        if (i % 3 == 0) {
          auto before = server.meter();
          wire::Message reply = server.handle(
              wire::Hello{to_hex(rng.bytes(8))}, clock.now(), rng);
          report.flood_expensive_ops +=
              server.meter().expensive_ops - before.expensive_ops;
          tally.record(reply, "mixed");
        } else if (i % 3 == 1) {
          auto before = server.meter();
          wire::Message reply =
              server.handle(wire::Hello{"alice"}, clock.now(), rng);
          report.flood_expensive_ops +=
              server.meter().expensive_ops - before.expensive_ops;
          tally.record(reply, "mixed");
        } else {
          wire::Message reply =
              server.handle(wire::Hello{"mallory"}, clock.now(), rng);
          tally.record(reply, "mixed");
          auto* ch = std::get_if<wire::Challenge>(&reply);
          if (!ch) break;
          auto solution = puzzle::solve(ch->puzzle);
          report.attacker_hash_ops += solution.attempts;
          Bytes stamp_plain;
          put_u64_be(stamp_plain, clock.now());
          wire::Response resp;
          resp.token.ciphertext = rng.bytes(64);
          resp.solution = std::move(solution);
          resp.challenge = ch->puzzle;
          resp.client_id = "mallory";
          resp.stamp_ct =
              crypto::aead_seal(mallory_creds.psk, rng.nonce12(), stamp_plain);
          auto before = server.meter();
          reply = server.handle(resp, clock.now(), rng);
          report.server_response_ops +=
              (server.meter().cheap_ops - before.cheap_ops) +
              (server.meter().expensive_ops - before.expensive_ops);
          ++report.responses_handled;
          ++report.attacker_responses;
          tally.record(reply, kind);
        }
        break;
      }
    }
  };

  int midpoint = workload.count / 2;
  for (int i = 0; i < workload.count; ++i) {
    if (i == midpoint && workload.kind != WorkloadKind::legitimate) {
      ClientSession session(alice_creds, cfg.client_difficulty_ceiling);
      detail::drive_handshake(server, session, clock, rng, tally, report,
                              "legitimate");
    }
    if (workload.drop_every_nth > 0 &&
        (i + 1) % workload.drop_every_nth == 0) {
      ++report.lost;  // delivery knob: the server never sees this one
    } else {
      inject_one(i);
    }
    clock.advance(workload.gap_ms);
  }

  report.meter = server.meter();
  report.elapsed_ms = clock.now();
  return report;
}

// Requester hash work per phase-3 request over server work per verification.
inline double cost_asymmetry(const RunReport& report, int difficulty) {
  (void)difficulty;
  if (report.attacker_responses == 0 || report.responses_handled == 0 ||
      report.server_response_ops == 0)
    throw std::invalid_argument("report contains no verifications");
  double attacker = static_cast<double>(report.attacker_hash_ops) /
                    static_cast<double>(report.attacker_responses);
  double server = static_cast<double>(report.server_response_ops) /
                  static_cast<double>(report.responses_handled);
  return attacker / server;
}

struct Scenario {
  SimConfig config;
  Workload workload;
  std::uint64_t seed = 1;
};

// Flat key=value scenario files; '#' starts a comment line.
inline Result<Scenario, std::string> parse_scenario(std::string_view text) {
  Scenario sc;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!line.empty() && is_space(line.front())) line.erase(line.begin());
    while (!line.empty() && is_space(line.back())) line.pop_back();
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      return "line " + std::to_string(line_no) + ": expected key=value";
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && is_space(key.back())) key.pop_back();
    while (!value.empty() && is_space(value.front())) value.erase(value.begin());

    auto as_u64 = [&](std::uint64_t& out) -> std::optional<std::string> {
      try {
        std::size_t idx = 0;
        out = std::stoull(value, &idx);
        if (idx != value.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        return "line " + std::to_string(line_no) + ": bad number '" + value + "'";
      }
      return std::nullopt;
    };
    auto as_int = [&](int& out) -> std::optional<std::string> {
      std::uint64_t v = 0;
      if (auto err = as_u64(v)) return err;
      out = static_cast<int>(v);
      return std::nullopt;
    };

    std::optional<std::string> err;
    if (key == "difficulty") err = as_int(sc.config.difficulty);
    else if (key == "rate_max") err = as_int(sc.config.rate_max);
    else if (key == "rate_window_ms") err = as_u64(sc.config.rate_window_ms);
    else if (key == "block_duration_ms") err = as_u64(sc.config.block_duration_ms);
    else if (key == "stamp_window_ms") err = as_u64(sc.config.stamp_window_ms);
    else if (key == "challenge_max_age_ms") err = as_u64(sc.config.challenge_max_age_ms);
    else if (key == "replay_ttl_ms") err = as_u64(sc.config.replay_ttl_ms);
    else if (key == "client_difficulty_ceiling") err = as_int(sc.config.client_difficulty_ceiling);
    else if (key == "seed") err = as_u64(sc.seed);
    else if (key == "workload.kind") {
      auto kind = workload_kind_from(value);
      if (!kind) return "line " + std::to_string(line_no) + ": unknown workload kind '" + value + "'";
      sc.workload.kind = *kind;
    } else if (key == "workload.count") err = as_int(sc.workload.count);
    else if (key == "workload.drop_every_nth") err = as_int(sc.workload.drop_every_nth);
    else if (key == "workload.gap_ms") err = as_u64(sc.workload.gap_ms);
    else if (key == "workload.stamp_skew_ms") err = as_u64(sc.workload.stamp_skew_ms);
    else if (key == "workload.replay_delay_ms") err = as_u64(sc.workload.replay_delay_ms);
    else if (key == "workload.target_cid") sc.workload.target_cid = value;
    else return "line " + std::to_string(line_no) + ": unknown key '" + key + "'";
    if (err) return *err;
  }
  if (sc.workload.count < 1)
    return std::string("workload.count must be >= 1");
  return sc;
}

}  // namespace cloudauth::simnet
