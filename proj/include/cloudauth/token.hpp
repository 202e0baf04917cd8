#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cloudauth/bytes.hpp"
#include "cloudauth/crypto.hpp"
#include "cloudauth/result.hpp"
#include "cloudauth/rng.hpp"

namespace cloudauth::token {

// What the server can read back out of a token. After extension the token
// carries the session key and stamp, which is the entire reason the server
// needs no per-session storage: everything it will need later travels with
// the client, sealed under MK.
struct TokenContents {
  std::string client_id;
  std::uint64_t issued_at = 0;
  std::optional<Bytes> session_key_info;
  std::optional<std::uint64_t> session_stamp;
  std::uint32_t generation = 0;
};

// Opaque to everyone but the holder of MK.
struct Token {
  Bytes ciphertext;  // nonce || ct || tag over the canonical contents encoding
};

enum class TokenError { auth_failure, malformed };

inline const char* to_string(TokenError e) {
  return e == TokenError::auth_failure ? "auth_failure" : "malformed";
}

namespace detail {

inline Bytes encode_contents(const TokenContents& c) {
  if (c.client_id.empty()) throw std::invalid_argument("empty client_id");
  if (c.session_key_info.has_value() != c.session_stamp.has_value())
    throw std::invalid_argument("session key info and stamp must travel together");
  TlvWriter w;
  w.field_string(1, c.client_id);
  w.field_u64(2, c.issued_at);
  if (c.session_key_info) {
    w.field(3, *c.session_key_info);
    w.field_u64(4, *c.session_stamp);
  }
  w.field_u32(5, c.generation);
  return w.take();
}

inline std::optional<TokenContents> decode_contents(
    std::span<const std::uint8_t> data) {
  TlvReader r(data);
  TokenContents c;
  auto cid = r.field_string(1);
  auto issued = r.field_u64(2);
  if (!cid || cid->empty() || !issued) return std::nullopt;
  c.client_id = std::move(*cid);
  c.issued_at = *issued;
  if (r.peek_tag() == std::uint8_t{3}) {
    auto sk = r.field(3);
    auto stamp = r.field_u64(4);
    if (!sk || !stamp) return std::nullopt;
    c.session_key_info = Bytes(sk->begin(), sk->end());
    c.session_stamp = *stamp;
  }
  auto gen = r.field_u32(5);
  if (!gen || !r.at_end()) return std::nullopt;
  c.generation = *gen;
  return c;
}

}  // namespace detail

inline Token mint(const crypto::Key& master_key, std::string_view client_id,
                  std::uint64_t now, Rng& rng) {
  if (client_id.empty()) throw std::invalid_argument("empty client_id");
  TokenContents c;
  c.client_id = std::string(client_id);
  c.issued_at = now;
  return Token{crypto::aead_seal(master_key, rng.nonce12(),
                                 detail::encode_contents(c))};
}

inline Result<TokenContents, TokenError> open(const crypto::Key& master_key,
                                              const Token& t) {
  auto plain = crypto::aead_open(master_key, t.ciphertext);
  if (!plain) return TokenError::auth_failure;
  auto contents = detail::decode_contents(*plain);
  if (!contents) return TokenError::malformed;  // mint-side bug, not an attack
  return *contents;
}

// Produces a new token; the input contents (and any token they came from)
// are untouched. Generation moves forward once per extension.
inline Token extend(const crypto::Key& master_key, const TokenContents& base,
                    std::span<const std::uint8_t> session_key,
                    std::uint64_t stamp, Rng& rng) {
  TokenContents c = base;
  c.session_key_info = Bytes(session_key.begin(), session_key.end());
  c.session_stamp = stamp;
  c.generation = base.generation + 1;
  return Token{crypto::aead_seal(master_key, rng.nonce12(),
                                 detail::encode_contents(c))};
}

}  // namespace cloudauth::token
