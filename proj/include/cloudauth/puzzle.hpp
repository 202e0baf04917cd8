#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cloudauth/bytes.hpp"
#include "cloudauth/crypto.hpp"
#include "cloudauth/rng.hpp"

namespace cloudauth::puzzle {

inline constexpr int kMaxDifficulty = 64;
inline constexpr std::size_t kServerNonceLen = 16;

// A stateless hash-preimage puzzle. The server binds nonce, client id,
// difficulty and issue time under a MAC cookie and forgets the challenge;
// the echoed cookie is the only thing that later proves the challenge is
// ours. The client searches for a suffix making
// SHA-256(nonce || client_id || suffix) start with `difficulty` zero bits,
// an expected 2^difficulty hash evaluations.
struct PuzzleChallenge {
  Bytes server_nonce;
  std::string client_id;
  int difficulty = 0;
  std::uint64_t issued_at = 0;
  Bytes cookie;
};

struct PuzzleSolution {
  Bytes preimage_suffix;
  std::uint64_t attempts = 0;  // client-side bookkeeping, not on the wire
};

enum class PuzzleCheck { accept, bad_cookie, bad_solution, expired };

inline const char* to_string(PuzzleCheck c) {
  switch (c) {
    case PuzzleCheck::accept: return "accept";
    case PuzzleCheck::bad_cookie: return "bad_cookie";
    case PuzzleCheck::bad_solution: return "bad_solution";
    case PuzzleCheck::expired: return "expired";
  }
  return "?";
}

namespace detail {

inline Bytes cookie_input(const PuzzleChallenge& c) {
  TlvWriter w;
  w.field(1, c.server_nonce);
  w.field_string(2, c.client_id);
  w.field_u8(3, static_cast<std::uint8_t>(c.difficulty));
  w.field_u64(4, c.issued_at);
  return w.take();
}

inline int leading_zero_bits(const crypto::Digest& d) {
  int bits = 0;
  for (std::uint8_t byte : d) {
    if (byte == 0) {
      bits += 8;
      continue;
    }
    for (int i = 7; i >= 0; --i) {
      if (byte & (1u << i)) return bits;
      ++bits;
    }
  }
  return bits;
}

inline crypto::Digest solution_digest(const PuzzleChallenge& c,
                                      std::span<const std::uint8_t> suffix) {
  Bytes preimage;
  preimage.reserve(c.server_nonce.size() + c.client_id.size() + suffix.size());
  preimage.insert(preimage.end(), c.server_nonce.begin(), c.server_nonce.end());
  preimage.insert(preimage.end(), c.client_id.begin(), c.client_id.end());
  preimage.insert(preimage.end(), suffix.begin(), suffix.end());
  return crypto::sha256(preimage);
}

}  // namespace detail

inline std::uint64_t expected_cost(int difficulty) {
  if (difficulty < 0 || difficulty > kMaxDifficulty)
    throw std::invalid_argument("puzzle difficulty out of range");
  if (difficulty == kMaxDifficulty) return ~0ull;  // saturates; 2^64 overflows
  return 1ull << difficulty;
}

inline PuzzleChallenge generate_challenge(std::span<const std::uint8_t> mac_key,
                                          std::string_view client_id,
                                          int difficulty, std::uint64_t now,
                                          Rng& rng) {
  if (difficulty < 0 || difficulty > kMaxDifficulty)
    throw std::invalid_argument("puzzle difficulty out of range");
  PuzzleChallenge c;
  c.server_nonce = rng.bytes(kServerNonceLen);
  c.client_id = std::string(client_id);
  c.difficulty = difficulty;
  c.issued_at = now;
  auto mac = crypto::hmac_sha256(mac_key, detail::cookie_input(c));
  c.cookie.assign(mac.begin(), mac.end());
  return c;
}

// Searches suffixes 0, 1, 2, ... (8-byte little-endian counters). The search
// is deterministic given the challenge; randomness enters through the nonce.
inline PuzzleSolution solve(const PuzzleChallenge& c) {
  Bytes suffix(8);
  for (std::uint64_t counter = 0;; ++counter) {
    for (int i = 0; i < 8; ++i)
      suffix[i] = static_cast<std::uint8_t>(counter >> (8 * i));
    auto digest = detail::solution_digest(c, suffix);
    if (detail::leading_zero_bits(digest) >= c.difficulty)
      return PuzzleSolution{suffix, counter + 1};
  }
}

// One MAC plus one hash, independent of difficulty.
inline PuzzleCheck verify(std::span<const std::uint8_t> mac_key,
                          const PuzzleChallenge& c, const PuzzleSolution& s,
                          std::uint64_t now, std::uint64_t max_age) {
  auto mac = crypto::hmac_sha256(mac_key, detail::cookie_input(c));
  if (!crypto::ct_equal(mac, c.cookie)) return PuzzleCheck::bad_cookie;
  auto digest = detail::solution_digest(c, s.preimage_suffix);
  if (detail::leading_zero_bits(digest) < c.difficulty)
    return PuzzleCheck::bad_solution;
  if (now < c.issued_at || now - c.issued_at > max_age)
    return PuzzleCheck::expired;
  return PuzzleCheck::accept;
}

inline Bytes encode(const PuzzleChallenge& c) {
  TlvWriter w;
  w.field(1, c.server_nonce);
  w.field_string(2, c.client_id);
  w.field_u8(3, static_cast<std::uint8_t>(c.difficulty));
  w.field_u64(4, c.issued_at);
  w.field(5, c.cookie);
  return w.take();
}

inline std::optional<PuzzleChallenge> decode_challenge(
    std::span<const std::uint8_t> data) {
  TlvReader r(data);
  PuzzleChallenge c;
  auto nonce = r.field(1);
  auto cid = r.field_string(2);
  auto diff = r.field_u8(3);
  auto issued = r.field_u64(4);
  auto cookie = r.field(5);
  if (!nonce || !cid || !diff || !issued || !cookie || !r.at_end())
    return std::nullopt;
  if (*diff > kMaxDifficulty) return std::nullopt;
  c.server_nonce.assign(nonce->begin(), nonce->end());
  c.client_id = std::move(*cid);
  c.difficulty = *diff;
  c.issued_at = *issued;
  c.cookie.assign(cookie->begin(), cookie->end());
  return c;
}

inline Bytes encode(const PuzzleSolution& s) {
  TlvWriter w;
  w.field(1, s.preimage_suffix);
  return w.take();
}

inline std::optional<PuzzleSolution> decode_solution(
    std::span<const std::uint8_t> data) {
  TlvReader r(data);
  auto suffix = r.field(1);
  if (!suffix || !r.at_end()) return std::nullopt;
  PuzzleSolution s;
  s.preimage_suffix.assign(suffix->begin(), suffix->end());
  return s;
}

}  // namespace cloudauth::puzzle
