#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "cloudauth/bytes.hpp"
#include "cloudauth/cost_meter.hpp"
#include "cloudauth/crypto.hpp"
#include "cloudauth/puzzle.hpp"
#include "cloudauth/rate_limiter.hpp"
#include "cloudauth/replay_cache.hpp"
#include "cloudauth/result.hpp"
#include "cloudauth/rng.hpp"
#include "cloudauth/token.hpp"
#include "cloudauth/wire.hpp"

namespace cloudauth {

struct ServerConfig {
  crypto::Key master_key{};
  int difficulty = 16;
  int rate_max = 3;
  std::uint64_t rate_window_ms = 10'000;
  std::uint64_t block_duration_ms = 60'000;
  std::uint64_t stamp_window_ms = 60'000;  // max |now - T|
  std::uint64_t min_stamp_age_ms = 0;      // optional anti-precomputation floor
  std::uint64_t challenge_max_age_ms = 60'000;
  std::uint64_t replay_ttl_ms = 60'000;
  std::size_t rate_capacity = 4096;
  std::size_t replay_capacity = 4096;
};

enum class ProvisionError { duplicate_cid };

struct Provisioned {
  crypto::Key psk{};
  token::Token token;
};

// The CServer engine. Phase 1 (hello -> challenge) touches nothing but the
// rate table and the puzzle MAC key: no directory lookup, no token open, no
// allocation that an unknown CID can inflate. All expensive work happens in
// phase 2, after the puzzle solution has been checked, and nothing about a
// session survives the handler that produced it: the extended token carries
// the session key and stamp back to the client, sealed under MK.
class Server {
 public:
  explicit Server(ServerConfig cfg)
      : cfg_(cfg),
        puzzle_mac_key_(crypto::derive_key(cfg.master_key, "puzzle-mac")),
        rate_(cfg.rate_capacity, cfg.rate_max, cfg.rate_window_ms,
              cfg.block_duration_ms),
        replay_(cfg.replay_capacity, cfg.replay_ttl_ms) {}

  const ServerConfig& config() const { return cfg_; }
  const CostMeter& meter() const { return meter_; }

  struct StateSnapshot {
    std::size_t psk_entries = 0;
    std::size_t rate_entries = 0;
    std::size_t replay_entries = 0;
  };

  StateSnapshot state() const {
    return {psk_directory_.size(), rate_.size(), replay_.size()};
  }

  Result<Provisioned, ProvisionError> provision(const std::string& client_id,
                                                Rng& rng,
                                                std::uint64_t now = 0) {
    if (psk_directory_.contains(client_id))
      return ProvisionError::duplicate_cid;
    Provisioned p;
    p.psk = rng.key32();
    p.token = token::mint(cfg_.master_key, client_id, now, rng);
    psk_directory_.emplace(client_id, p.psk);
    return p;
  }

  bool is_provisioned(const std::string& client_id) const {
    return psk_directory_.contains(client_id);
  }

  // One `cid:psk_hex:token_hex` line per registration, importable by clients.
  // Tokens are re-minted on export; any token for the right CID is equivalent.
  std::string export_credentials(std::uint64_t now, Rng& rng) const {
    std::ostringstream os;
    for (const auto& [cid, psk] : psk_directory_) {
      auto tok = token::mint(cfg_.master_key, cid, now, rng);
      os << cid << ':' << to_hex(psk) << ':' << to_hex(tok.ciphertext) << '\n';
    }
    return os.str();
  }

  wire::Message handle(const wire::Message& msg, std::uint64_t now, Rng& rng) {
    if (auto* hello = std::get_if<wire::Hello>(&msg))
      return handle_hello(*hello, now, rng);
    if (auto* response = std::get_if<wire::Response>(&msg))
      return handle_response(*response, now, rng);
    if (auto* confirm = std::get_if<wire::Confirm>(&msg))
      return handle_confirm(*confirm, now);
    if (auto* renew = std::get_if<wire::Renew>(&msg))
      return renew_subkey(*renew, now, rng);
    ++meter_.dropped;
    return wire::Drop{wire::DropReason::unexpected};
  }

  wire::Message handle_hello(const wire::Hello& msg, std::uint64_t now,
                             Rng& rng) {
    if (rate_.check(msg.client_id, now) == RateTable::Decision::blocked) {
      ++meter_.blocked;
      return wire::Blocked{};
    }
    ++meter_.cheap_ops;  // cookie MAC
    return wire::Challenge{puzzle::generate_challenge(
        puzzle_mac_key_, msg.client_id, cfg_.difficulty, now, rng)};
  }

  // Checks run strictly cheapest-first; a request that fails the puzzle
  // never causes a lookup, an AEAD open, or a key generation.
  wire::Message handle_response(const wire::Response& msg, std::uint64_t now,
                                Rng& rng) {
    // 1. puzzle: binding, cookie, predicate, age
    if (msg.challenge.client_id != msg.client_id)
      return drop(wire::DropReason::bad_puzzle);
    auto check = puzzle::verify(puzzle_mac_key_, msg.challenge, msg.solution,
                                now, cfg_.challenge_max_age_ms);
    meter_.cheap_ops += (check == puzzle::PuzzleCheck::bad_cookie) ? 1 : 2;
    if (check != puzzle::PuzzleCheck::accept)
      return drop(wire::DropReason::bad_puzzle);

    // 2. replay of an already-answered response
    auto cookie_digest = crypto::sha256(msg.challenge.cookie);
    ++meter_.cheap_ops;
    if (replay_.seen(cookie_digest, now))
      return drop(wire::DropReason::replay);

    // 3. PSK lookup and stamp decryption
    auto psk_it = psk_directory_.find(msg.client_id);
    ++meter_.expensive_ops;
    if (psk_it == psk_directory_.end())
      return drop(wire::DropReason::no_such_client);
    auto stamp_plain = crypto::aead_open(psk_it->second, msg.stamp_ct);
    ++meter_.expensive_ops;
    if (!stamp_plain || stamp_plain->size() != 8)
      return drop(wire::DropReason::bad_stamp_crypto);
    std::uint64_t stamp = get_u64_be(*stamp_plain);

    // 4. stamp recency
    std::uint64_t diff = now >= stamp ? now - stamp : stamp - now;
    if (diff > cfg_.stamp_window_ms)
      return drop(wire::DropReason::stale_stamp);
    if (now >= stamp && diff < cfg_.min_stamp_age_ms)
      return drop(wire::DropReason::stale_stamp);

    // 5. token
    auto opened = token::open(cfg_.master_key, msg.token);
    ++meter_.expensive_ops;
    if (!opened) return drop(wire::DropReason::bad_token);
    if (opened.value().client_id != msg.client_id)
      return drop(wire::DropReason::token_mismatch);

    // All checks passed: generate SK, extend the token, deliver, forget.
    auto sk = rng.key32();
    ++meter_.expensive_ops;  // SK generation
    token::Token extended =
        token::extend(cfg_.master_key, opened.value(), sk, stamp, rng);
    Bytes payload(sk.begin(), sk.end());
    put_u64_be(payload, stamp);
    Bytes sk_ct = crypto::aead_seal(psk_it->second, rng.nonce12(), payload);
    replay_.remember(cookie_digest, now);
    return wire::KeyDelivery{std::move(sk_ct), std::move(extended)};
  }

  wire::Message handle_confirm(const wire::Confirm& msg, std::uint64_t now) {
    (void)now;
    auto opened = token::open(cfg_.master_key, msg.token);
    ++meter_.expensive_ops;
    if (!opened) return drop(wire::DropReason::bad_token);
    const auto& contents = opened.value();
    if (!contents.session_key_info ||
        contents.session_key_info->size() != crypto::kKeyLen)
      return drop(wire::DropReason::bad_token);
    crypto::Key sk{};
    std::copy(contents.session_key_info->begin(),
              contents.session_key_info->end(), sk.begin());
    auto stamp_plain = crypto::aead_open(sk, msg.stamp_ct);
    ++meter_.expensive_ops;
    if (!stamp_plain || stamp_plain->size() != 8)
      return drop(wire::DropReason::bad_confirm_crypto);
    if (get_u64_be(*stamp_plain) != *contents.session_stamp)
      return drop(wire::DropReason::stamp_mismatch);
    ++meter_.established;
    return wire::Established{contents.client_id, contents.generation};
  }

  // Sub-session renewal: same key-delivery shape, but sealed under the
  // current SK rather than the PSK, and stamped by the server.
  wire::Message renew_subkey(const wire::Renew& msg, std::uint64_t now,
                             Rng& rng) {
    auto opened = token::open(cfg_.master_key, msg.token);
    ++meter_.expensive_ops;
    if (!opened) return drop(wire::DropReason::bad_token);
    const auto& contents = opened.value();
    if (!contents.session_key_info ||
        contents.session_key_info->size() != crypto::kKeyLen)
      return drop(wire::DropReason::no_session);
    crypto::Key current{};
    std::copy(contents.session_key_info->begin(),
              contents.session_key_info->end(), current.begin());
    auto sub_key = rng.key32();
    ++meter_.expensive_ops;  // SK generation
    token::Token extended =
        token::extend(cfg_.master_key, contents, sub_key, now, rng);
    Bytes payload(sub_key.begin(), sub_key.end());
    put_u64_be(payload, now);
    Bytes sk_ct = crypto::aead_seal(current, rng.nonce12(), payload);
    return wire::KeyDelivery{std::move(sk_ct), std::move(extended)};
  }

 private:
  wire::Message drop(wire::DropReason reason) {
    ++meter_.dropped;
    return wire::Drop{reason};
  }

  ServerConfig cfg_;
  crypto::Key puzzle_mac_key_;
  // The registration directory is the only long-lived state; it grows only
  // by provisioning, never by handshakes.
  std::map<std::string, crypto::Key> psk_directory_;
  RateTable rate_;
  ReplayCache replay_;
  CostMeter meter_;
};

}  // namespace cloudauth
