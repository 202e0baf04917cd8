#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cloudauth/token.hpp"

using namespace cloudauth;

namespace {
crypto::Key mk() {
  Rng rng(555);
  return rng.key32();
}
}  // namespace

TEST_CASE("mint then open round-trips") {
  Rng rng(1);
  auto t = token::mint(mk(), "alice", 1000, rng);
  auto opened = token::open(mk(), t);
  REQUIRE(opened.ok());
  CHECK(opened.value().client_id == "alice");
  CHECK(opened.value().issued_at == 1000);
  CHECK(opened.value().generation == 0);
  CHECK_FALSE(opened.value().session_key_info);
  CHECK_FALSE(opened.value().session_stamp);
}

TEST_CASE("open with the wrong key fails") {
  Rng rng(1);
  auto t = token::mint(mk(), "alice", 0, rng);
  crypto::Key other = Rng(2).key32();
  auto opened = token::open(other, t);
  REQUIRE_FALSE(opened.ok());
  CHECK(opened.error() == token::TokenError::auth_failure);
}

TEST_CASE("distinct nonces give distinct ciphertexts for equal contents") {
  Rng rng(1);
  auto a = token::mint(mk(), "alice", 0, rng);
  auto b = token::mint(mk(), "alice", 0, rng);
  CHECK(a.ciphertext != b.ciphertext);
  CHECK(token::open(mk(), a).value().client_id ==
        token::open(mk(), b).value().client_id);
}

TEST_CASE("empty client id is refused") {
  Rng rng(1);
  CHECK_THROWS_AS(token::mint(mk(), "", 0, rng), std::invalid_argument);
}

TEST_CASE("extend embeds the session key and advances the generation") {
  Rng rng(9);
  auto t0 = token::mint(mk(), "alice", 10, rng);
  auto c0 = token::open(mk(), t0).value();

  Bytes sk = rng.bytes(32);
  auto t1 = token::extend(mk(), c0, sk, 777, rng);
  auto c1 = token::open(mk(), t1).value();
  CHECK(c1.client_id == "alice");
  CHECK(c1.issued_at == 10);
  CHECK(c1.session_key_info == sk);
  CHECK(c1.session_stamp == 777);
  CHECK(c1.generation == 1);

  SECTION("double extension reaches generation 2") {
    Bytes sk2 = rng.bytes(32);
    auto t2 = token::extend(mk(), c1, sk2, 888, rng);
    auto c2 = token::open(mk(), t2).value();
    CHECK(c2.generation == 2);
    CHECK(c2.session_key_info == sk2);
    CHECK(c2.session_stamp == 888);
  }
  SECTION("the original token is untouched") {
    auto again = token::open(mk(), t0).value();
    CHECK(again.generation == 0);
    CHECK_FALSE(again.session_key_info);
  }
}

TEST_CASE("open is the identity on minted contents (property)") {
  std::mt19937 gen(2024);
  std::uniform_int_distribution<int> len(1, 24);
  std::uniform_int_distribution<int> ch('a', 'z');
  std::uniform_int_distribution<std::uint64_t> stamp(0);
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    std::string cid;
    int n = len(gen);
    for (int j = 0; j < n; ++j) cid.push_back(static_cast<char>(ch(gen)));
    std::uint64_t t = stamp(gen);
    auto tok = token::mint(mk(), cid, t, rng);
    auto opened = token::open(mk(), tok);
    REQUIRE(opened.ok());
    CHECK(opened.value().client_id == cid);
    CHECK(opened.value().issued_at == t);
  }
}

TEST_CASE("every single-byte mutation is rejected") {
  Rng rng(3);
  auto t = token::mint(mk(), "alice", 42, rng);
  auto c = token::open(mk(), t).value();
  auto extended = token::extend(mk(), c, rng.bytes(32), 99, rng);

  std::mt19937 gen(99);
  std::uniform_int_distribution<std::size_t> pos(0, extended.ciphertext.size() - 1);
  std::uniform_int_distribution<int> bit(0, 7);
  int rejections = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    token::Token mutated = extended;
    mutated.ciphertext[pos(gen)] ^= static_cast<std::uint8_t>(1u << bit(gen));
    auto opened = token::open(mk(), mutated);
    if (!opened.ok() && opened.error() == token::TokenError::auth_failure)
      ++rejections;
  }
  CHECK(rejections == trials);
}

TEST_CASE("contents invariants are enforced at encode time") {
  token::TokenContents c;
  c.client_id = "alice";
  c.session_key_info = Bytes(32, 1);  // stamp missing
  CHECK_THROWS_AS(token::detail::encode_contents(c), std::invalid_argument);
}
