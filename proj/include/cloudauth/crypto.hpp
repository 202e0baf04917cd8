#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "cloudauth/bytes.hpp"

namespace cloudauth::crypto {

inline constexpr std::size_t kKeyLen = 32;
inline constexpr std::size_t kNonceLen = 12;
inline constexpr std::size_t kTagLen = 16;
inline constexpr std::size_t kDigestLen = 32;

// The one AEAD used everywhere (tokens, stamp encryption, key delivery):
// 32-byte key, 12-byte nonce, 16-byte tag. Sealed blobs are laid out as
// nonce || ciphertext || tag.
inline constexpr std::string_view kAeadAlgorithm = "ChaCha20-Poly1305 (IETF)";

using Key = std::array<std::uint8_t, kKeyLen>;
using Nonce = std::array<std::uint8_t, kNonceLen>;
using Digest = std::array<std::uint8_t, kDigestLen>;

static_assert(kKeyLen == crypto_aead_chacha20poly1305_ietf_KEYBYTES);
static_assert(kNonceLen == crypto_aead_chacha20poly1305_ietf_NPUBBYTES);
static_assert(kTagLen == crypto_aead_chacha20poly1305_ietf_ABYTES);
static_assert(kDigestLen == crypto_hash_sha256_BYTES);

// Per-thread tally of primitive invocations. Tests snapshot this to pin the
// cost model (e.g. puzzle verification is exactly one MAC plus one hash).
struct OpCounts {
  std::uint64_t sha256 = 0;
  std::uint64_t hmac = 0;
  std::uint64_t aead_seal = 0;
  std::uint64_t aead_open = 0;
};

inline OpCounts& op_counts() {
  thread_local OpCounts counts;
  return counts;
}

inline void ensure_init() {
  static const bool ok = [] { return sodium_init() >= 0; }();
  if (!ok) throw std::runtime_error("libsodium initialization failed");
}

namespace detail {
inline const std::uint8_t* ptr(std::span<const std::uint8_t> s) {
  static const std::uint8_t empty = 0;
  return s.empty() ? &empty : s.data();
}
}  // namespace detail

inline Digest sha256(std::span<const std::uint8_t> msg) {
  ensure_init();
  ++op_counts().sha256;
  Digest d{};
  crypto_hash_sha256(d.data(), detail::ptr(msg), msg.size());
  return d;
}

inline Digest hmac_sha256(std::span<const std::uint8_t> key,
                          std::span<const std::uint8_t> msg) {
  ensure_init();
  ++op_counts().hmac;
  Digest d{};
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, detail::ptr(key), key.size());
  crypto_auth_hmacsha256_update(&st, detail::ptr(msg), msg.size());
  crypto_auth_hmacsha256_final(&st, d.data());
  return d;
}

// Domain-separated subkey derivation (e.g. the puzzle MAC key from MK).
inline Key derive_key(const Key& master, std::string_view label) {
  Digest d = hmac_sha256(master, {reinterpret_cast<const std::uint8_t*>(label.data()), label.size()});
  Key k{};
  std::copy(d.begin(), d.end(), k.begin());
  return k;
}

inline Bytes aead_seal(const Key& key, const Nonce& nonce,
                       std::span<const std::uint8_t> plaintext) {
  ensure_init();
  ++op_counts().aead_seal;
  Bytes out(kNonceLen + plaintext.size() + kTagLen);
  std::copy(nonce.begin(), nonce.end(), out.begin());
  unsigned long long clen = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(
      out.data() + kNonceLen, &clen, detail::ptr(plaintext), plaintext.size(),
      nullptr, 0, nullptr, nonce.data(), key.data());
  out.resize(kNonceLen + clen);
  return out;
}

inline std::optional<Bytes> aead_open(const Key& key,
                                      std::span<const std::uint8_t> blob) {
  ensure_init();
  ++op_counts().aead_open;
  if (blob.size() < kNonceLen + kTagLen) return std::nullopt;
  Bytes out(blob.size() - kNonceLen - kTagLen);
  unsigned long long mlen = 0;
  int rc = crypto_aead_chacha20poly1305_ietf_decrypt(
      out.empty() ? nullptr : out.data(), &mlen, nullptr,
      blob.data() + kNonceLen, blob.size() - kNonceLen, nullptr, 0,
      blob.data(), key.data());
  if (rc != 0) return std::nullopt;
  out.resize(mlen);
  return out;
}

inline bool ct_equal(std::span<const std::uint8_t> a,
                     std::span<const std::uint8_t> b) {
  ensure_init();
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

}  // namespace cloudauth::crypto
