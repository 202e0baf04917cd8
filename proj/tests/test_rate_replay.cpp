#include <catch2/catch_amalgamated.hpp>

#include "cloudauth/rate_limiter.hpp"
#include "cloudauth/replay_cache.hpp"
#include "cloudauth/rng.hpp"

using namespace cloudauth;

TEST_CASE("rate table allows up to rate_max per window, then blocks") {
  RateTable table(64, 3, 10'000, 60'000);
  int allowed = 0, blocked = 0;
  for (int i = 0; i < 10; ++i) {
    if (table.check("alice", 1000 + i) == RateTable::Decision::allow)
      ++allowed;
    else
      ++blocked;
  }
  CHECK(allowed == 3);
  CHECK(blocked == 7);
  CHECK(table.is_blocked("alice", 2000));

  SECTION("block expires after block_duration") {
    CHECK(table.check("alice", 1000 + 60'000) == RateTable::Decision::blocked);
    CHECK(table.check("alice", 1010 + 60'000) == RateTable::Decision::allow);
  }
}

TEST_CASE("window slides: spaced requests never block") {
  RateTable table(64, 3, 10'000, 60'000);
  std::uint64_t t = 0;
  for (int i = 0; i < 20; ++i) {
    CHECK(table.check("alice", t) == RateTable::Decision::allow);
    t += 4000;  // 3 per 10s window at most
  }
}

TEST_CASE("distinct CIDs do not interfere") {
  RateTable table(64, 3, 10'000, 60'000);
  for (int i = 0; i < 3; ++i)
    CHECK(table.check("alice", 100 + i) == RateTable::Decision::allow);
  CHECK(table.check("alice", 104) == RateTable::Decision::blocked);
  CHECK(table.check("bob", 105) == RateTable::Decision::allow);
}

TEST_CASE("rate table is capacity-bounded with LRU eviction") {
  RateTable table(100, 3, 10'000, 60'000);
  Rng rng(1);
  for (int i = 0; i < 10'000; ++i)
    (void)table.check(to_hex(rng.bytes(6)), i);
  CHECK(table.size() <= 100);
}

TEST_CASE("replay cache remembers within ttl and forgets after") {
  ReplayCache cache(16, 1000);
  crypto::Digest d{};
  d[0] = 1;
  CHECK_FALSE(cache.seen(d, 100));
  cache.remember(d, 100);
  CHECK(cache.seen(d, 100));
  CHECK(cache.seen(d, 1099));
  CHECK_FALSE(cache.seen(d, 1100));  // expired
  CHECK(cache.size() == 0);          // swept
}

TEST_CASE("replay cache eviction keeps the newest entries") {
  ReplayCache cache(4, 1'000'000);
  auto digest = [](int i) {
    crypto::Digest d{};
    d[0] = static_cast<std::uint8_t>(i);
    d[1] = static_cast<std::uint8_t>(i >> 8);
    return d;
  };
  for (int i = 0; i < 10; ++i) cache.remember(digest(i), 100 + i);
  CHECK(cache.size() <= 4);
  CHECK(cache.seen(digest(9), 200));
  CHECK_FALSE(cache.seen(digest(0), 200));  // evicted
}
