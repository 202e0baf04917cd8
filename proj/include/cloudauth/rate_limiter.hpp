#pragma once

#include <cstdint>
#include <list>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cloudauth {

// Sliding-window per-CID rate limiter with a block list folded in.
// Capacity-bounded with least-recently-touched eviction so the limiter
// itself cannot be grown without bound by a flood of fresh CIDs.
class RateTable {
 public:
  enum class Decision { allow, blocked };

  RateTable(std::size_t capacity, int rate_max, std::uint64_t window_ms,
            std::uint64_t block_duration_ms)
      : capacity_(capacity),
        rate_max_(rate_max),
        window_ms_(window_ms),
        block_ms_(block_duration_ms) {}

  Decision check(const std::string& cid, std::uint64_t now) {
    Entry& e = touch(cid);
    if (e.blocked_until > now) return Decision::blocked;
    e.blocked_until = 0;
    // keep only timestamps still inside the window
    std::size_t keep = 0;
    for (std::uint64_t t : e.times)
      if (t + window_ms_ > now) e.times[keep++] = t;
    e.times.resize(keep);
    if (static_cast<int>(e.times.size()) >= rate_max_) {
      e.blocked_until = now + block_ms_;
      e.times.clear();
      return Decision::blocked;
    }
    e.times.push_back(now);
    return Decision::allow;
  }

  bool is_blocked(const std::string& cid, std::uint64_t now) const {
    auto it = index_.find(cid);
    return it != index_.end() && it->second->second.blocked_until > now;
  }

  std::size_t size() const { return lru_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  struct Entry {
    std::vector<std::uint64_t> times;  // length <= rate_max
    std::uint64_t blocked_until = 0;
  };

  using Node = std::pair<std::string, Entry>;

  Entry& touch(const std::string& cid) {
    auto it = index_.find(cid);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    lru_.emplace_front(cid, Entry{});
    index_[cid] = lru_.begin();
    if (lru_.size() > capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    return lru_.front().second;
  }

  std::size_t capacity_;
  int rate_max_;
  std::uint64_t window_ms_;
  std::uint64_t block_ms_;
  std::list<Node> lru_;
  std::unordered_map<std::string, std::list<Node>::iterator> index_;
};

}  // namespace cloudauth
