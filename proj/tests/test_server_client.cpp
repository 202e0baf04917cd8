#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "cloudauth/client.hpp"
#include "cloudauth/server.hpp"

using namespace cloudauth;

namespace {

struct Rig {
  ServerConfig cfg;
  Server server;
  Credentials creds;
  Rng rng{2000};

  explicit Rig(int difficulty = 6)
      : cfg(make_config(difficulty)), server(cfg), creds(provision()) {}

  static ServerConfig make_config(int difficulty) {
    ServerConfig c;
    c.master_key = Rng(1).key32();
    c.difficulty = difficulty;
    return c;
  }

  Credentials provision() {
    auto p = server.provision("alice", rng);
    REQUIRE(p.ok());
    return Credentials{"alice", p.value().psk, p.value().token};
  }
};

// Runs hello..confirm, returning the session for further play.
ClientSession establish(Rig& rig, std::uint64_t& now) {
  ClientSession session(rig.creds);
  auto hello = session.start();
  auto reply = rig.server.handle_hello(hello.value(), now, rig.rng);
  auto* ch = std::get_if<wire::Challenge>(&reply);
  REQUIRE(ch);
  now += 1;
  auto response = session.on_challenge(*ch, now, rig.rng);
  REQUIRE(response.ok());
  now += 1;
  auto delivery = rig.server.handle_response(response.value(), now, rig.rng);
  auto* kd = std::get_if<wire::KeyDelivery>(&delivery);
  REQUIRE(kd);
  auto confirm = session.on_key(*kd, rig.rng);
  REQUIRE(confirm.ok());
  now += 1;
  auto established = rig.server.handle_confirm(confirm.value(), now);
  auto* est = std::get_if<wire::Established>(&established);
  REQUIRE(est);
  REQUIRE(session.on_established(*est));
  return session;
}

}  // namespace

TEST_CASE("provisioning registers once per CID") {
  Rig rig;
  auto dup = rig.server.provision("alice", rig.rng);
  REQUIRE_FALSE(dup.ok());
  CHECK(dup.error() == ProvisionError::duplicate_cid);

  auto other = rig.server.provision("bob", rig.rng);
  REQUIRE(other.ok());
  CHECK(other.value().psk != rig.creds.psk);
  auto contents = token::open(rig.cfg.master_key, other.value().token);
  REQUIRE(contents.ok());
  CHECK(contents.value().client_id == "bob");
}

TEST_CASE("credentials export/import round-trips") {
  Rig rig;
  (void)rig.server.provision("bob", rig.rng);
  auto text = rig.server.export_credentials(0, rig.rng);
  auto parsed = parse_credentials(text);
  REQUIRE(parsed.ok());
  REQUIRE(parsed.value().size() == 2);
  const auto& alice = parsed.value()[0];
  CHECK(alice.client_id == "alice");
  CHECK(alice.psk == rig.creds.psk);
  // the exported token opens to the right CID under MK
  auto contents = token::open(rig.cfg.master_key, alice.token);
  REQUIRE(contents.ok());
  CHECK(contents.value().client_id == "alice");

  CHECK_FALSE(parse_credentials("garbage-without-colons\n").ok());
  CHECK_FALSE(parse_credentials("cid:zz:aa\n").ok());
}

TEST_CASE("full handshake establishes and agrees on SK") {
  Rig rig;
  std::uint64_t now = 1000;
  auto session = establish(rig, now);
  CHECK(session.state() == ClientState::established);

  auto contents = token::open(rig.cfg.master_key, session.token_current());
  REQUIRE(contents.ok());
  REQUIRE(contents.value().session_key_info);
  REQUIRE(session.session_key());
  CHECK(crypto::ct_equal(*contents.value().session_key_info,
                         *session.session_key()));
  CHECK(contents.value().generation == 1);
  CHECK(rig.server.meter().established == 1);
}

TEST_CASE("phase 1 performs no expensive work, provisioned or not") {
  Rig rig;
  auto before = rig.server.meter();
  (void)rig.server.handle_hello(wire::Hello{"alice"}, 0, rig.rng);
  (void)rig.server.handle_hello(wire::Hello{"zzz-unknown"}, 1, rig.rng);
  auto after = rig.server.meter();
  CHECK(after.expensive_ops == before.expensive_ops);
  CHECK(after.cheap_ops == before.cheap_ops + 2);
}

TEST_CASE("rate rule blocks the fourth hello and recovers after the block") {
  Rig rig;
  int challenges = 0, blocked = 0;
  for (int i = 0; i < 10; ++i) {
    auto reply = rig.server.handle_hello(wire::Hello{"alice"}, 1000 + i, rig.rng);
    if (std::holds_alternative<wire::Challenge>(reply)) ++challenges;
    if (std::holds_alternative<wire::Blocked>(reply)) ++blocked;
  }
  CHECK(challenges == 3);
  CHECK(blocked == 7);

  std::uint64_t later = 1000 + rig.cfg.block_duration_ms + 100;
  auto reply = rig.server.handle_hello(wire::Hello{"alice"}, later, rig.rng);
  CHECK(std::holds_alternative<wire::Challenge>(reply));
}

TEST_CASE("response validation: reasons and the cheap-first ordering") {
  Rig rig;
  std::uint64_t now = 5000;
  ClientSession session(rig.creds);
  (void)session.start();
  auto reply = rig.server.handle_hello(wire::Hello{"alice"}, now, rig.rng);
  auto* ch = std::get_if<wire::Challenge>(&reply);
  REQUIRE(ch);
  auto response = session.on_challenge(*ch, now + 1, rig.rng);
  REQUIRE(response.ok());
  auto valid = response.value();

  SECTION("wrong puzzle suffix drops with no expensive op") {
    auto bad = valid;
    bad.solution.preimage_suffix[0] ^= 1;
    auto before = rig.server.meter();
    auto out = rig.server.handle_response(bad, now + 2, rig.rng);
    auto* d = std::get_if<wire::Drop>(&out);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::bad_puzzle);
    CHECK(rig.server.meter().expensive_ops == before.expensive_ops);
  }
  SECTION("echoed challenge bound to the claimed CID") {
    auto bad = valid;
    bad.client_id = "mallory";
    auto out = rig.server.handle_response(bad, now + 2, rig.rng);
    auto* d = std::get_if<wire::Drop>(&out);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::bad_puzzle);
  }
  SECTION("unknown client after a paid puzzle") {
    // a solved puzzle for a CID that was never provisioned
    ClientSession ghost(Credentials{"ghost", rig.creds.psk, rig.creds.token});
    (void)ghost.start();
    auto r2 = rig.server.handle_hello(wire::Hello{"ghost"}, now, rig.rng);
    auto* ch2 = std::get_if<wire::Challenge>(&r2);
    REQUIRE(ch2);
    auto resp2 = ghost.on_challenge(*ch2, now + 1, rig.rng);
    auto out = rig.server.handle_response(resp2.value(), now + 2, rig.rng);
    auto* d = std::get_if<wire::Drop>(&out);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::no_such_client);
  }
  SECTION("stamp sealed under the wrong key") {
    auto bad = valid;
    Bytes stamp_plain;
    put_u64_be(stamp_plain, now + 1);
    bad.stamp_ct = crypto::aead_seal(Rng(4).key32(), rig.rng.nonce12(), stamp_plain);
    auto out = rig.server.handle_response(bad, now + 2, rig.rng);
    auto* d = std::get_if<wire::Drop>(&out);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::bad_stamp_crypto);
  }
  SECTION("stale stamp, with the boundary accepted") {
    // the challenge is fetched fresh; only the client's stamp is backdated
    auto make_response = [&](std::uint64_t stamp_time, std::uint64_t check_time) {
      ClientSession s2(rig.creds);
      (void)s2.start();
      auto rr = rig.server.handle_hello(wire::Hello{"alice"}, check_time - 1, rig.rng);
      auto* cc = std::get_if<wire::Challenge>(&rr);
      REQUIRE(cc);
      auto resp = s2.on_challenge(*cc, stamp_time, rig.rng);
      return rig.server.handle_response(resp.value(), check_time, rig.rng);
    };
    std::uint64_t base = 100'000;
    auto at_window = make_response(base, base + rig.cfg.stamp_window_ms);
    CHECK(std::holds_alternative<wire::KeyDelivery>(at_window));
    std::uint64_t base2 = base + 20'000;
    auto past_window = make_response(base2, base2 + rig.cfg.stamp_window_ms + 1);
    auto* d = std::get_if<wire::Drop>(&past_window);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::stale_stamp);
  }
  SECTION("forged token bytes") {
    auto bad = valid;
    bad.token.ciphertext = rig.rng.bytes(48);
    auto out = rig.server.handle_response(bad, now + 2, rig.rng);
    auto* d = std::get_if<wire::Drop>(&out);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::bad_token);
  }
  SECTION("token for a different CID") {
    auto bob = rig.server.provision("bob", rig.rng);
    ClientSession bobs(Credentials{"bob", bob.value().psk, rig.creds.token});
    (void)bobs.start();
    auto r2 = rig.server.handle_hello(wire::Hello{"bob"}, now, rig.rng);
    auto* ch2 = std::get_if<wire::Challenge>(&r2);
    REQUIRE(ch2);
    auto resp2 = bobs.on_challenge(*ch2, now + 1, rig.rng);
    auto out = rig.server.handle_response(resp2.value(), now + 2, rig.rng);
    auto* d = std::get_if<wire::Drop>(&out);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::token_mismatch);
  }
  SECTION("replayed valid response") {
    auto first = rig.server.handle_response(valid, now + 2, rig.rng);
    CHECK(std::holds_alternative<wire::KeyDelivery>(first));
    auto before = rig.server.meter();
    auto second = rig.server.handle_response(valid, now + 3, rig.rng);
    auto* d = std::get_if<wire::Drop>(&second);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::replay);
    CHECK(rig.server.meter().expensive_ops == before.expensive_ops);
  }
}

TEST_CASE("confirm validation reasons") {
  Rig rig;
  std::uint64_t now = 1000;
  ClientSession session(rig.creds);
  (void)session.start();
  auto reply = rig.server.handle_hello(wire::Hello{"alice"}, now, rig.rng);
  auto response =
      session.on_challenge(std::get<wire::Challenge>(reply), now + 1, rig.rng);
  auto delivery = rig.server.handle_response(response.value(), now + 2, rig.rng);
  auto* kd = std::get_if<wire::KeyDelivery>(&delivery);
  REQUIRE(kd);
  auto confirm = session.on_key(*kd, rig.rng);
  REQUIRE(confirm.ok());

  SECTION("generation-0 token was never keyed") {
    wire::Confirm bad = confirm.value();
    bad.token = rig.creds.token;
    auto out = rig.server.handle_confirm(bad, now + 3);
    auto* d = std::get_if<wire::Drop>(&out);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::bad_token);
  }
  SECTION("stamp sealed under the wrong SK") {
    wire::Confirm bad = confirm.value();
    Bytes stamp_plain;
    put_u64_be(stamp_plain, now + 1);
    bad.stamp_ct = crypto::aead_seal(Rng(123).key32(), rig.rng.nonce12(), stamp_plain);
    auto out = rig.server.handle_confirm(bad, now + 3);
    auto* d = std::get_if<wire::Drop>(&out);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::bad_confirm_crypto);
  }
  SECTION("stamp value differs from the token's stamp") {
    // white-box cross-wire: recover SK under MK, seal a different stamp
    auto contents = token::open(rig.cfg.master_key, kd->token).value();
    crypto::Key sk{};
    std::copy(contents.session_key_info->begin(),
              contents.session_key_info->end(), sk.begin());
    Bytes stamp_plain;
    put_u64_be(stamp_plain, *contents.session_stamp + 1);
    wire::Confirm bad = confirm.value();
    bad.stamp_ct = crypto::aead_seal(sk, rig.rng.nonce12(), stamp_plain);
    auto out = rig.server.handle_confirm(bad, now + 3);
    auto* d = std::get_if<wire::Drop>(&out);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::stamp_mismatch);
  }
  SECTION("valid confirm establishes") {
    auto out = rig.server.handle_confirm(confirm.value(), now + 3);
    auto* est = std::get_if<wire::Established>(&out);
    REQUIRE(est);
    CHECK(est->client_id == "alice");
    CHECK(est->generation == 1);
  }
}

TEST_CASE("a completed handshake leaves no per-session state behind") {
  Rig rig;
  std::uint64_t now = 1000;

  auto before = rig.server.state();
  auto session = establish(rig, now);
  auto after = rig.server.state();
  CHECK(after.psk_entries == before.psk_entries);

  // The real statelessness check: a brand-new server sharing only the
  // config (MK + PSK directory) completes the renewal exchange.
  Server fresh(rig.cfg);
  Rng rng2(777);
  auto renew = session.renew(now);
  REQUIRE(renew.ok());
  auto delivery = fresh.renew_subkey(renew.value(), now + 1, rng2);
  auto* kd = std::get_if<wire::KeyDelivery>(&delivery);
  REQUIRE(kd);
  auto confirm = session.on_key(*kd, rng2);
  REQUIRE(confirm.ok());
  auto established = fresh.handle_confirm(confirm.value(), now + 2);
  auto* est = std::get_if<wire::Established>(&established);
  REQUIRE(est);
  CHECK(est->generation == 2);
}

TEST_CASE("renewal issues fresh sub-session keys under the current SK") {
  Rig rig;
  std::uint64_t now = 1000;
  auto session = establish(rig, now);
  auto sk1 = *session.session_key();

  auto renew = session.renew(now + 10);
  REQUIRE(renew.ok());
  auto delivery = rig.server.renew_subkey(renew.value(), now + 11, rig.rng);
  auto* kd = std::get_if<wire::KeyDelivery>(&delivery);
  REQUIRE(kd);
  auto confirm = session.on_key(*kd, rig.rng);
  REQUIRE(confirm.ok());
  auto established = rig.server.handle_confirm(confirm.value(), now + 12);
  auto* est = std::get_if<wire::Established>(&established);
  REQUIRE(est);
  REQUIRE(session.on_established(*est));

  CHECK(*session.session_key() != sk1);
  CHECK(est->generation == 2);

  SECTION("second renewal keeps the generations and keys moving") {
    auto sk2 = *session.session_key();
    auto renew2 = session.renew(now + 20);
    auto delivery2 = rig.server.renew_subkey(renew2.value(), now + 21, rig.rng);
    auto* kd2 = std::get_if<wire::KeyDelivery>(&delivery2);
    REQUIRE(kd2);
    auto confirm2 = session.on_key(*kd2, rig.rng);
    auto established2 = rig.server.handle_confirm(confirm2.value(), now + 22);
    auto* est2 = std::get_if<wire::Established>(&established2);
    REQUIRE(est2);
    CHECK(est2->generation == 3);
    CHECK(*session.session_key() != sk2);
    CHECK(*session.session_key() != sk1);
  }
  SECTION("renewing with a never-keyed token is refused") {
    auto out = rig.server.renew_subkey(wire::Renew{rig.creds.token}, now, rig.rng);
    auto* d = std::get_if<wire::Drop>(&out);
    REQUIRE(d);
    CHECK(d->reason == wire::DropReason::no_session);
  }
}

TEST_CASE("client state machine accepts operations only in order") {
  Rig rig;
  std::uint64_t now = 1000;
  ClientSession session(rig.creds);

  // idle: only start() is legal
  CHECK_FALSE(session.on_challenge(wire::Challenge{}, now, rig.rng).ok());
  CHECK_FALSE(session.on_key(wire::KeyDelivery{}, rig.rng).ok());
  CHECK_FALSE(session.on_established(wire::Established{}));
  CHECK_FALSE(session.renew(now).ok());

  REQUIRE(session.start().ok());
  CHECK(session.state() == ClientState::await_challenge);
  CHECK_FALSE(session.start().ok());  // start twice
  CHECK_FALSE(session.on_key(wire::KeyDelivery{}, rig.rng).ok());
  CHECK_FALSE(session.renew(now).ok());

  auto reply = rig.server.handle_hello(wire::Hello{"alice"}, now, rig.rng);
  auto response =
      session.on_challenge(std::get<wire::Challenge>(reply), now, rig.rng);
  REQUIRE(response.ok());
  CHECK(session.state() == ClientState::await_key);
  CHECK_FALSE(session.start().ok());
  CHECK_FALSE(session.on_challenge(std::get<wire::Challenge>(reply), now, rig.rng).ok());

  auto delivery = rig.server.handle_response(response.value(), now + 1, rig.rng);
  auto confirm = session.on_key(std::get<wire::KeyDelivery>(delivery), rig.rng);
  REQUIRE(confirm.ok());
  CHECK(session.state() == ClientState::confirming);
  CHECK_FALSE(session.renew(now).ok());

  CHECK(session.on_established(wire::Established{"alice", 1}));
  CHECK(session.state() == ClientState::established);
  CHECK_FALSE(session.on_established(wire::Established{"alice", 1}));
}

TEST_CASE("transition matrix: each state admits exactly its one operation") {
  enum Op { kStart, kOnChallenge, kOnKey, kOnEstablished, kRenew };
  struct Parked {
    ClientSession session;
    std::optional<wire::Challenge> challenge;     // pending, for on_challenge
    std::optional<wire::KeyDelivery> delivery;    // pending, for on_key
  };

  auto park = [](Rig& rig, ClientState target) -> Parked {
    ClientSession session(rig.creds);
    std::uint64_t now = 1000;
    if (target == ClientState::idle) return {session, {}, {}};
    (void)session.start();
    auto reply = rig.server.handle_hello(wire::Hello{"alice"}, now, rig.rng);
    auto challenge = std::get<wire::Challenge>(reply);
    if (target == ClientState::await_challenge)
      return {session, challenge, {}};
    auto response = session.on_challenge(challenge, now, rig.rng);
    auto delivery = std::get<wire::KeyDelivery>(
        rig.server.handle_response(response.value(), now + 1, rig.rng));
    if (target == ClientState::await_key) return {session, {}, delivery};
    (void)session.on_key(delivery, rig.rng);
    if (target == ClientState::confirming) return {session, {}, {}};
    (void)session.on_established(wire::Established{"alice", 1});
    return {session, {}, {}};
  };

  auto probe = [](Parked& parked, Op op) -> bool {
    Rng rng(1);
    switch (op) {
      case kStart:
        return parked.session.start().ok();
      case kOnChallenge:
        return parked.session
            .on_challenge(parked.challenge.value_or(wire::Challenge{}), 1000, rng)
            .ok();
      case kOnKey:
        return parked.session
            .on_key(parked.delivery.value_or(wire::KeyDelivery{}), rng)
            .ok();
      case kOnEstablished:
        return parked.session.on_established(wire::Established{"alice", 1});
      case kRenew:
        return parked.session.renew(2000).ok();
    }
    return false;
  };

  const ClientState states[] = {ClientState::idle, ClientState::await_challenge,
                                ClientState::await_key, ClientState::confirming,
                                ClientState::established};
  const std::pair<ClientState, Op> legal[] = {
      {ClientState::idle, kStart},
      {ClientState::await_challenge, kOnChallenge},
      {ClientState::await_key, kOnKey},
      {ClientState::confirming, kOnEstablished},
      {ClientState::established, kRenew},
  };
  for (auto state : states) {
    for (Op op : {kStart, kOnChallenge, kOnKey, kOnEstablished, kRenew}) {
      Rig rig;
      auto parked = park(rig, state);
      REQUIRE(parked.session.state() == state);
      bool should_succeed = false;
      for (auto [s, o] : legal)
        if (s == state && o == op) should_succeed = true;
      INFO("state " << to_string(state) << " op " << op);
      CHECK(probe(parked, op) == should_succeed);
    }
  }
}

TEST_CASE("client refuses puzzles above its ceiling") {
  Rig rig;
  ClientSession session(rig.creds, /*difficulty_ceiling=*/8);
  (void)session.start();
  Rng rng(5);
  auto puzzle_key = crypto::derive_key(rig.cfg.master_key, "puzzle-mac");
  wire::Challenge hard{puzzle::generate_challenge(puzzle_key, "alice", 9, 0, rng)};
  auto out = session.on_challenge(hard, 0, rng);
  REQUIRE_FALSE(out.ok());
  CHECK(out.error() == ClientError::difficulty_too_high);
  CHECK(session.state() == ClientState::idle);
}

TEST_CASE("client aborts on a tampered key delivery") {
  Rig rig;
  std::uint64_t now = 1000;
  ClientSession session(rig.creds);
  (void)session.start();
  auto reply = rig.server.handle_hello(wire::Hello{"alice"}, now, rig.rng);
  auto response =
      session.on_challenge(std::get<wire::Challenge>(reply), now, rig.rng);
  auto delivery = rig.server.handle_response(response.value(), now + 1, rig.rng);
  auto kd = std::get<wire::KeyDelivery>(delivery);
  kd.sk_ct[crypto::kNonceLen + 1] ^= 0x10;
  auto out = session.on_key(kd, rig.rng);
  REQUIRE_FALSE(out.ok());
  CHECK(out.error() == ClientError::bad_key_delivery);
  CHECK(session.state() == ClientState::idle);
}

TEST_CASE("confirm echoes exactly the stamp sent in the response") {
  Rig rig;
  std::uint64_t now = 4242;
  ClientSession session(rig.creds);
  (void)session.start();
  auto reply = rig.server.handle_hello(wire::Hello{"alice"}, now, rig.rng);
  auto response =
      session.on_challenge(std::get<wire::Challenge>(reply), now + 1, rig.rng);
  REQUIRE(session.sent_stamp() == now + 1);
  auto delivery = rig.server.handle_response(response.value(), now + 2, rig.rng);
  auto confirm = session.on_key(std::get<wire::KeyDelivery>(delivery), rig.rng);
  REQUIRE(confirm.ok());
  auto plain = crypto::aead_open(*session.session_key(), confirm.value().stamp_ct);
  REQUIRE(plain);
  CHECK(get_u64_be(*plain) == now + 1);
}

TEST_CASE("no wire message ever carries PSK or SK bytes") {
  Rig rig;
  std::uint64_t now = 1000;
  std::vector<Bytes> wire_bytes;

  for (int run = 0; run < 100; ++run) {
    ClientSession session(rig.creds);
    auto hello = session.start();
    wire_bytes.push_back(wire::encode(wire::Message{hello.value()}));
    now += 4000;  // stay under the rate limit
    auto reply = rig.server.handle_hello(wire::Hello{"alice"}, now, rig.rng);
    wire_bytes.push_back(wire::encode(reply));
    auto response =
        session.on_challenge(std::get<wire::Challenge>(reply), now, rig.rng);
    wire_bytes.push_back(wire::encode(wire::Message{response.value()}));
    auto delivery = rig.server.handle_response(response.value(), now + 1, rig.rng);
    wire_bytes.push_back(wire::encode(delivery));
    auto confirm = session.on_key(std::get<wire::KeyDelivery>(delivery), rig.rng);
    wire_bytes.push_back(wire::encode(wire::Message{confirm.value()}));

    auto contains = [](const Bytes& haystack, std::span<const std::uint8_t> needle) {
      return std::search(haystack.begin(), haystack.end(), needle.begin(),
                         needle.end()) != haystack.end();
    };
    for (const auto& msg : wire_bytes) {
      CHECK_FALSE(contains(msg, rig.creds.psk));
      CHECK_FALSE(contains(msg, *session.session_key()));
    }
    wire_bytes.clear();
  }
}
