#pragma once

#include <cstdint>
#include <cstring>
#include <deque>
#include <unordered_map>
#include <utility>

#include "cloudauth/crypto.hpp"

namespace cloudauth {

// Remembers challenge-cookie digests of responses that already earned a key
// delivery, for replay_ttl. A deliberate, bounded concession of pure
// statelessness: without it one captured valid response could be replayed to
// trigger unlimited expensive verification work.
class ReplayCache {
 public:
  ReplayCache(std::size_t capacity, std::uint64_t ttl_ms)
      : capacity_(capacity), ttl_ms_(ttl_ms) {}

  bool seen(const crypto::Digest& digest, std::uint64_t now) {
    sweep(now);
    auto it = entries_.find(digest);
    return it != entries_.end() && it->second > now;
  }

  void remember(const crypto::Digest& digest, std::uint64_t now) {
    sweep(now);
    while (entries_.size() >= capacity_ && !fifo_.empty()) {
      entries_.erase(fifo_.front().second);
      fifo_.pop_front();
    }
    std::uint64_t expiry = now + ttl_ms_;
    entries_[digest] = expiry;
    fifo_.emplace_back(expiry, digest);
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  struct DigestHash {
    std::size_t operator()(const crypto::Digest& d) const {
      std::size_t h;
      std::memcpy(&h, d.data(), sizeof(h));
      return h;
    }
  };

  // All entries share one TTL, so FIFO order is expiry order.
  void sweep(std::uint64_t now) {
    while (!fifo_.empty() && fifo_.front().first <= now) {
      auto it = entries_.find(fifo_.front().second);
      if (it != entries_.end() && it->second == fifo_.front().first)
        entries_.erase(it);
      fifo_.pop_front();
    }
  }

  std::size_t capacity_;
  std::uint64_t ttl_ms_;
  std::unordered_map<crypto::Digest, std::uint64_t, DigestHash> entries_;
  std::deque<std::pair<std::uint64_t, crypto::Digest>> fifo_;
};

}  // namespace cloudauth
