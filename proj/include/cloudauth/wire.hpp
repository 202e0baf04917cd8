#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "cloudauth/bytes.hpp"
#include "cloudauth/puzzle.hpp"
#include "cloudauth/token.hpp"

namespace cloudauth::wire {

enum class DropReason : std::uint8_t {
  bad_puzzle = 1,
  replay,
  no_such_client,
  bad_stamp_crypto,
  stale_stamp,
  token_mismatch,
  bad_token,
  bad_confirm_crypto,
  stamp_mismatch,
  no_session,
  unexpected,
};

inline const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::bad_puzzle: return "bad_puzzle";
    case DropReason::replay: return "replay";
    case DropReason::no_such_client: return "no_such_client";
    case DropReason::bad_stamp_crypto: return "bad_stamp_crypto";
    case DropReason::stale_stamp: return "stale_stamp";
    case DropReason::token_mismatch: return "token_mismatch";
    case DropReason::bad_token: return "bad_token";
    case DropReason::bad_confirm_crypto: return "bad_confirm_crypto";
    case DropReason::stamp_mismatch: return "stamp_mismatch";
    case DropReason::no_session: return "no_session";
    case DropReason::unexpected: return "unexpected";
  }
  return "?";
}

struct Hello {
  std::string client_id;
};

struct Challenge {
  puzzle::PuzzleChallenge puzzle;
};

struct Response {
  token::Token token;
  puzzle::PuzzleSolution solution;
  puzzle::PuzzleChallenge challenge;  // echoed verbatim, cookie-protected
  std::string client_id;
  Bytes stamp_ct;  // {T}_PSK
};

struct KeyDelivery {
  Bytes sk_ct;  // {SK || T}_PSK on the first handshake, {SK' || T'}_SK on renewal
  token::Token token;
};

struct Confirm {
  token::Token token;
  Bytes stamp_ct;  // {T}_SK
};

struct Established {
  std::string client_id;
  std::uint32_t generation = 0;
};

struct Renew {
  token::Token token;
};

struct Blocked {};

struct Drop {
  DropReason reason = DropReason::unexpected;
};

// Wire type byte is the variant index + 1: 1 Hello, 2 Challenge, 3 Response,
// 4 KeyDelivery, 5 Confirm, 6 Established, 7 Renew, 8 Blocked, 9 Drop.
using Message = std::variant<Hello, Challenge, Response, KeyDelivery, Confirm,
                             Established, Renew, Blocked, Drop>;

inline const char* type_name(const Message& m) {
  static constexpr const char* names[] = {
      "Hello", "Challenge", "Response", "KeyDelivery", "Confirm",
      "Established", "Renew", "Blocked", "Drop"};
  return names[m.index()];
}

inline Bytes encode(const Message& m) {
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(m.index() + 1));
  TlvWriter w;
  std::visit(
      [&w](const auto& msg) {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, Hello>) {
          w.field_string(1, msg.client_id);
        } else if constexpr (std::is_same_v<T, Challenge>) {
          w.field(1, puzzle::encode(msg.puzzle));
        } else if constexpr (std::is_same_v<T, Response>) {
          w.field(1, msg.token.ciphertext);
          w.field(2, puzzle::encode(msg.solution));
          w.field(3, puzzle::encode(msg.challenge));
          w.field_string(4, msg.client_id);
          w.field(5, msg.stamp_ct);
        } else if constexpr (std::is_same_v<T, KeyDelivery>) {
          w.field(1, msg.sk_ct);
          w.field(2, msg.token.ciphertext);
        } else if constexpr (std::is_same_v<T, Confirm>) {
          w.field(1, msg.token.ciphertext);
          w.field(2, msg.stamp_ct);
        } else if constexpr (std::is_same_v<T, Established>) {
          w.field_string(1, msg.client_id);
          w.field_u32(2, msg.generation);
        } else if constexpr (std::is_same_v<T, Renew>) {
          w.field(1, msg.token.ciphertext);
        } else if constexpr (std::is_same_v<T, Blocked>) {
          // no fields
        } else if constexpr (std::is_same_v<T, Drop>) {
          w.field_u8(1, static_cast<std::uint8_t>(msg.reason));
        }
      },
      m);
  Bytes body = w.take();
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

inline std::optional<Message> decode(std::span<const std::uint8_t> data) {
  if (data.empty()) return std::nullopt;
  std::uint8_t type = data[0];
  TlvReader r(data.subspan(1));
  auto done = [&r](Message m) -> std::optional<Message> {
    if (!r.at_end()) return std::nullopt;
    return m;
  };
  switch (type) {
    case 1: {
      auto cid = r.field_string(1);
      if (!cid) return std::nullopt;
      return done(Hello{std::move(*cid)});
    }
    case 2: {
      auto pz = r.field(1);
      if (!pz) return std::nullopt;
      auto challenge = puzzle::decode_challenge(*pz);
      if (!challenge) return std::nullopt;
      return done(Challenge{std::move(*challenge)});
    }
    case 3: {
      auto tok = r.field(1);
      auto sol = r.field(2);
      auto ch = r.field(3);
      auto cid = r.field_string(4);
      auto stamp = r.field(5);
      if (!tok || !sol || !ch || !cid || !stamp) return std::nullopt;
      auto solution = puzzle::decode_solution(*sol);
      auto challenge = puzzle::decode_challenge(*ch);
      if (!solution || !challenge) return std::nullopt;
      Response msg;
      msg.token.ciphertext.assign(tok->begin(), tok->end());
      msg.solution = std::move(*solution);
      msg.challenge = std::move(*challenge);
      msg.client_id = std::move(*cid);
      msg.stamp_ct.assign(stamp->begin(), stamp->end());
      return done(std::move(msg));
    }
    case 4: {
      auto sk_ct = r.field(1);
      auto tok = r.field(2);
      if (!sk_ct || !tok) return std::nullopt;
      KeyDelivery msg;
      msg.sk_ct.assign(sk_ct->begin(), sk_ct->end());
      msg.token.ciphertext.assign(tok->begin(), tok->end());
      return done(std::move(msg));
    }
    case 5: {
      auto tok = r.field(1);
      auto stamp = r.field(2);
      if (!tok || !stamp) return std::nullopt;
      Confirm msg;
      msg.token.ciphertext.assign(tok->begin(), tok->end());
      msg.stamp_ct.assign(stamp->begin(), stamp->end());
      return done(std::move(msg));
    }
    case 6: {
      auto cid = r.field_string(1);
      auto gen = r.field_u32(2);
      if (!cid || !gen) return std::nullopt;
      return done(Established{std::move(*cid), *gen});
    }
    case 7: {
      auto tok = r.field(1);
      if (!tok) return std::nullopt;
      Renew msg;
      msg.token.ciphertext.assign(tok->begin(), tok->end());
      return done(std::move(msg));
    }
    case 8:
      return done(Blocked{});
    case 9: {
      auto reason = r.field_u8(1);
      if (!reason || *reason < 1 ||
          *reason > static_cast<std::uint8_t>(DropReason::unexpected))
        return std::nullopt;
      return done(Drop{static_cast<DropReason>(*reason)});
    }
    default:
      return std::nullopt;
  }
}

}  // namespace cloudauth::wire
