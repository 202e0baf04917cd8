#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cloudauth/bytes.hpp"
#include "cloudauth/crypto.hpp"
#include "cloudauth/result.hpp"
#include "cloudauth/rng.hpp"
#include "cloudauth/token.hpp"
#include "cloudauth/wire.hpp"

namespace cloudauth {

struct Credentials {
  std::string client_id;
  crypto::Key psk{};
  token::Token token;  // opaque: the client holds it, never reads it
};

inline std::string to_line(const Credentials& c) {
  std::ostringstream os;
  os << c.client_id << ':' << to_hex(c.psk) << ':' << to_hex(c.token.ciphertext);
  return os.str();
}

// Parses `cid:psk_hex:token_hex` lines as produced by provisioning export.
inline Result<std::vector<Credentials>, std::string> parse_credentials(
    std::string_view text) {
  std::vector<Credentials> out;
  std::size_t line_no = 0;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](const char* why) {
      return std::string("line ") + std::to_string(line_no) + ": " + why;
    };
    auto c1 = line.find(':');
    auto c2 = line.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      return fail("expected cid:psk_hex:token_hex");
    Credentials c;
    c.client_id = line.substr(0, c1);
    auto psk = from_hex(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
    auto tok = from_hex(std::string_view(line).substr(c2 + 1));
    if (c.client_id.empty()) return fail("empty cid");
    if (!psk || psk->size() != crypto::kKeyLen) return fail("bad psk hex");
    if (!tok || tok->empty()) return fail("bad token hex");
    std::copy(psk->begin(), psk->end(), c.psk.begin());
    c.token.ciphertext = std::move(*tok);
    out.push_back(std::move(c));
  }
  return out;
}

enum class ClientState { idle, await_challenge, await_key, confirming, established };

inline const char* to_string(ClientState s) {
  switch (s) {
    case ClientState::idle: return "idle";
    case ClientState::await_challenge: return "await_challenge";
    case ClientState::await_key: return "await_key";
    case ClientState::confirming: return "confirming";
    case ClientState::established: return "established";
  }
  return "?";
}

enum class ClientError {
  wrong_state,
  difficulty_too_high,
  bad_key_delivery,   // AEAD failure or malformed payload: abort
  stamp_echo_mismatch,
};

inline const char* to_string(ClientError e) {
  switch (e) {
    case ClientError::wrong_state: return "wrong_state";
    case ClientError::difficulty_too_high: return "difficulty_too_high";
    case ClientError::bad_key_delivery: return "bad_key_delivery";
    case ClientError::stamp_echo_mismatch: return "stamp_echo_mismatch";
  }
  return "?";
}

// Client half of the handshake. Refuses puzzles above its configured
// ceiling, so a spoofed server cannot turn the cost asymmetry around on us.
class ClientSession {
 public:
  explicit ClientSession(Credentials creds, int difficulty_ceiling = 24)
      : creds_(std::move(creds)),
        ceiling_(difficulty_ceiling),
        token_current_(creds_.token) {}

  ClientState state() const { return state_; }
  const token::Token& token_current() const { return token_current_; }
  const std::optional<crypto::Key>& session_key() const { return session_key_; }
  std::optional<std::uint64_t> sent_stamp() const { return sent_stamp_; }
  std::uint64_t solve_attempts() const { return solve_attempts_; }

  // Abandon any in-flight handshake. Keeps the newest token: extended
  // tokens remain valid credentials.
  void reset() {
    state_ = ClientState::idle;
    challenge_.reset();
    sent_stamp_.reset();
    session_key_.reset();
    renewing_ = false;
  }

  Result<wire::Hello, ClientError> start() {
    if (state_ != ClientState::idle) return ClientError::wrong_state;
    state_ = ClientState::await_challenge;
    return wire::Hello{creds_.client_id};
  }

  Result<wire::Response, ClientError> on_challenge(const wire::Challenge& msg,
                                                   std::uint64_t now,
                                                   Rng& rng) {
    if (state_ != ClientState::await_challenge) return ClientError::wrong_state;
    if (msg.puzzle.difficulty > ceiling_) {
      reset();
      return ClientError::difficulty_too_high;
    }
    auto solution = puzzle::solve(msg.puzzle);
    solve_attempts_ += solution.attempts;
    challenge_ = msg.puzzle;
    sent_stamp_ = now;
    Bytes stamp_plain;
    put_u64_be(stamp_plain, now);
    wire::Response r;
    r.token = token_current_;
    r.solution = std::move(solution);
    r.challenge = msg.puzzle;
    r.client_id = creds_.client_id;
    r.stamp_ct = crypto::aead_seal(creds_.psk, rng.nonce12(), stamp_plain);
    state_ = ClientState::await_key;
    return r;
  }

  Result<wire::Confirm, ClientError> on_key(const wire::KeyDelivery& msg,
                                            Rng& rng) {
    if (state_ != ClientState::await_key) return ClientError::wrong_state;
    const crypto::Key& unwrap_key = renewing_ ? *session_key_ : creds_.psk;
    auto payload = crypto::aead_open(unwrap_key, msg.sk_ct);
    if (!payload || payload->size() != crypto::kKeyLen + 8) {
      reset();
      return ClientError::bad_key_delivery;
    }
    crypto::Key sk{};
    std::copy(payload->begin(), payload->begin() + crypto::kKeyLen, sk.begin());
    std::uint64_t stamp =
        get_u64_be(std::span(*payload).subspan(crypto::kKeyLen));
    if (renewing_) {
      sent_stamp_ = stamp;  // server-stamped renewal
    } else if (stamp != *sent_stamp_) {
      reset();
      return ClientError::stamp_echo_mismatch;
    }
    session_key_ = sk;
    token_current_ = msg.token;
    Bytes stamp_plain;
    put_u64_be(stamp_plain, *sent_stamp_);
    wire::Confirm c;
    c.token = token_current_;
    c.stamp_ct = crypto::aead_seal(sk, rng.nonce12(), stamp_plain);
    state_ = ClientState::confirming;
    return c;
  }

  // Out-of-order Established messages are ignored; returns whether accepted.
  bool on_established(const wire::Established& msg) {
    (void)msg;
    if (state_ != ClientState::confirming) return false;
    state_ = ClientState::established;
    renewing_ = false;
    return true;
  }

  Result<wire::Renew, ClientError> renew(std::uint64_t now) {
    (void)now;
    if (state_ != ClientState::established) return ClientError::wrong_state;
    renewing_ = true;
    state_ = ClientState::await_key;
    return wire::Renew{token_current_};
  }

 private:
  Credentials creds_;
  int ceiling_;
  ClientState state_ = ClientState::idle;
  std::optional<puzzle::PuzzleChallenge> challenge_;
  std::optional<std::uint64_t> sent_stamp_;
  std::optional<crypto::Key> session_key_;
  token::Token token_current_;
  bool renewing_ = false;
  std::uint64_t solve_attempts_ = 0;
};

}  // namespace cloudauth
