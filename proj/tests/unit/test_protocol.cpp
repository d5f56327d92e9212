#include <doctest.h>

#include <set>
#include <type_traits>

#include "known_exponent_oracle.hpp"
#include "spot/entities.hpp"
#include "spot/errors.hpp"
#include "spot/persist.hpp"

using namespace spot;

namespace {

const PairingContext& ctx() {
  static const PairingContext c = PairingContext::setup(SecurityLevel::k112, "protocol-tests");
  return c;
}

struct World {
  GroupManagerKey gm;
  std::vector<Proxy> proxies;
};

const World& world() {
  static const World w = [] {
    Rng rng("protocol-world");
    World out;
    out.gm = gsig_setup(ctx(), rng);
    out.proxies.emplace_back("P1", gsig_join(ctx(), out.gm, rng));
    out.proxies.emplace_back("P2", gsig_join(ctx(), out.gm, rng));
    return out;
  }();
  return w;
}

// One honest contact between a and b at time `now`, through both proxies.
// Returns the two entries (for a, for b).
std::pair<ContactEntry, ContactEntry> contact(Server& server, const User& a, const User& b, std::int64_t now,
                                              std::int64_t duration, Rng& rng) {
  const Scalar ccm = set_ccm(ctx(), a.ebid(), b.ebid());
  REQUIRE(server.ingest(ccm, "P1", now, rng).status == IngestStatus::kPending);
  auto res = server.ingest(ccm, "P2", now + 1, rng);
  REQUIRE(res.status == IngestStatus::kMatched);
  const auto& w = world();
  auto oa = w.proxies[0].sign_for(ctx(), w.gm.vk, a.id(), *res.ps, rng);
  auto ob = w.proxies[1].sign_for(ctx(), w.gm.vk, b.id(), *res.ps, rng);
  return {ContactEntry{ccm, oa.m, oa.pi, now, duration}, ContactEntry{ccm, ob.m, ob.pi, now, duration}};
}

template <class T>
concept HasPsPrime = requires(T r) { r.ps_prime; };
template <class T>
concept HasPs = requires(T r) { r.ps; };

}  // namespace

TEST_CASE("keygen shapes") {
  Rng rng("keys");
  auto ha = ha_keygen(ctx(), rng);
  CHECK(ha.pk == ctx().g2() * ha.x);
  auto s = s_keygen(ctx(), rng);
  CHECK(s.big_y1 == ctx().g2() * s.y1);
  CHECK(s.big_y2 == ctx().g2() * s.y2);
  CHECK(ServerPublicKey::elements() == ElementCount{0, 2, 0, 0});
  CHECK(public_key(s).to_bytes().size() == 2 * ctx().g2_size());
  CHECK(ServerPublicKey::from_bytes(public_key(s).to_bytes()) == public_key(s));
  Rng other("keys-2");
  CHECK_FALSE(s_keygen(ctx(), other).y1 == s.y1);
}

TEST_CASE("user ids and keys") {
  Rng rng("users");
  auto ha = HealthAuthority::keygen(ctx(), rng);
  const UserRecord a = ha.set_user_id(rng);
  const UserRecord b = ha.set_user_id(rng);
  CHECK(a.id == ctx().g2() * a.t_u);
  CHECK_FALSE(a.t_u == b.t_u);
  REQUIRE(ha.find(a.id) != nullptr);
  CHECK(ha.find(a.id)->status == HealthStatus::kHealthy);
  auto ua = User::keygen(ctx(), a.id, rng);
  auto ub = User::keygen(ctx(), b.id, rng);
  CHECK_FALSE(ua.pk().is_identity());
  CHECK_FALSE(ua.pk() == ub.pk());
  ha.register_user_key(a.id, ua.pk());
  CHECK(*ha.find(a.id)->pk_u == ua.pk());
  CHECK_THROWS_AS(ha.register_user_key(ctx().g2(), ua.pk()), ProtocolError);
}

TEST_CASE("set_ccm") {
  Rng rng("ccm");
  Ebid a = Ebid::random(rng), b = Ebid::random(rng);
  CHECK(set_ccm(ctx(), a, b) == set_ccm(ctx(), b, a));
  // Only the product matters.
  const Scalar x = rng.next_nonzero_scalar(), y = rng.next_nonzero_scalar();
  const Scalar c = x * y;
  const Scalar z = rng.next_nonzero_scalar();
  CHECK(set_ccm(ctx(), x, y) == set_ccm(ctx(), z, z.inverse() * c));
  CHECK(set_ccm(ctx(), a, b) == set_ccm(ctx(), a.value(), b.value()));
  CHECK(set_ccm(ctx(), a, b) == ctx().hash_to_scalar((a.value() * b.value()).to_bytes()));
  CHECK_THROWS_AS(set_ccm(ctx(), Ebid{}, b), ProtocolError);

  std::set<Scalar> seen;
  for (int e = 0; e < 100; ++e) seen.insert(set_ccm(ctx(), Ebid::random(rng), Ebid::random(rng)));
  CHECK(seen.size() == 100);
}

TEST_CASE("ebid ordering is big-endian") {
  Ebid lo, hi;
  lo.bytes[15] = 0xff;
  hi.bytes[0] = 0x01;
  CHECK(lo < hi);
  CHECK(lo.value() == Scalar::from_u64(255));
}

TEST_CASE("choose_proxies") {
  ProxyRoster roster{{"P1", "P3"}, {"P2"}};
  Ebid lo, hi;
  lo.bytes[15] = 1;
  hi.bytes[0] = 1;
  CHECK(choose_proxies(hi, lo, roster) == std::pair<std::string, std::string>{"P1", "P2"});
  CHECK(choose_proxies(lo, hi, roster) == std::pair<std::string, std::string>{"P2", "P1"});
  CHECK_THROWS_AS(choose_proxies(lo, lo, roster), ProtocolError);
  CHECK_THROWS_AS(choose_proxies(lo, hi, ProxyRoster{{"P1"}, {}}), ProtocolError);
}

TEST_CASE("s_psign algebra") {
  Rng rng("psign");
  auto k = s_keygen(ctx(), rng);
  const Scalar ccm = rng.next_scalar();
  auto a = s_psign(k, ccm, rng);
  CHECK(a.ps == a.ps_prime * k.y1 + k.y2);
  auto b = s_psign(k, ccm, rng);
  CHECK_FALSE(a.ps == b.ps);
  auto z = s_psign(k, Scalar::zero(), rng);
  CHECK(z.ps == k.y2);
  CHECK(z.ps_prime.is_zero());
}

TEST_CASE("p_sign, sig_verify and the element count") {
  const auto& w = world();
  Rng rng("p-sign");
  G2Point id = ctx().g2() * rng.next_nonzero_scalar();
  const Scalar ps = rng.next_scalar();
  auto out = p_sign(ctx(), w.gm.vk, w.proxies[0].credential(), id, ps, rng);
  CHECK(out.m == id * ps);
  CHECK(sig_verify(ctx(), w.gm.vk, out.m, out.pi));
  CHECK(out.table_elements() == ElementCount{6, 7, 0, 0});
  CHECK(out.commitment_elements() == ElementCount{15, 14, 0, 0});
  CHECK_FALSE(sig_verify(ctx(), w.gm.vk, out.m + ctx().g2(), out.pi));
  auto other = p_sign(ctx(), w.gm.vk, w.proxies[1].credential(), id, ps + Scalar::one(), rng);
  CHECK_FALSE(sig_verify(ctx(), w.gm.vk, out.m, other.pi));

  auto zero = p_sign(ctx(), w.gm.vk, w.proxies[0].credential(), id, Scalar::zero(), rng);
  CHECK(zero.m.is_identity());
  CHECK(sig_verify(ctx(), w.gm.vk, zero.m, zero.pi));
}

TEST_CASE("ccm_verify against the exponent") {
  Rng rng("ccm-verify");
  testing::KnownExponentOracle o(ctx(), Rng("ccm-verify-oracle"));
  auto k = s_keygen(ctx(), rng);
  const Scalar t_u = rng.next_nonzero_scalar();
  const G2Point id = ctx().g2() * t_u;
  const Scalar ccm = set_ccm(ctx(), Ebid::random(rng), Ebid::random(rng));
  auto sig = s_psign(k, ccm, rng);
  const G2Point m = id * sig.ps;
  CHECK(ccm_verify(ctx(), m, sig.ps_prime, public_key(k), t_u));
  // log M = t_u (ccm y1 r_s + y2) = t_u PS' y1 + t_u y2
  CHECK(t_u * sig.ps == t_u * sig.ps_prime * k.y1 + t_u * k.y2);
  CHECK(ccm_verify(ctx(), k.big_y2 * t_u, Scalar::zero(), public_key(k), t_u));
  const Scalar t_other = rng.next_nonzero_scalar();
  CHECK_FALSE(ccm_verify(ctx(), m, sig.ps_prime, public_key(k), t_other));
}

TEST_CASE("server ingest, duplicates and purge") {
  Rng rng("server");
  ProtocolConfig cfg;
  Server s = Server::keygen(ctx(), rng, cfg);
  const Scalar ccm = rng.next_scalar();
  auto r1 = s.ingest(ccm, "P1", 100, rng);
  CHECK(r1.status == IngestStatus::kPending);
  CHECK_FALSE(r1.ps.has_value());
  CHECK_FALSE(s.lookup(ccm).has_value());
  CHECK(s.ingest(ccm, "P1", 101, rng).status == IngestStatus::kRejected);
  auto r2 = s.ingest(ccm, "P2", 110, rng);
  REQUIRE(r2.status == IngestStatus::kMatched);
  REQUIRE(s.lookup(ccm).has_value());
  CHECK(s.lookup(ccm)->ps == *r2.ps);
  auto r3 = s.ingest(ccm, "P3", 120, rng);
  CHECK(r3.status == IngestStatus::kRejected);

  // Outside the matching window the first copy is forgotten.
  const Scalar late = rng.next_scalar();
  CHECK(s.ingest(late, "P1", 1000, rng).status == IngestStatus::kPending);
  CHECK(s.ingest(late, "P2", 1000 + cfg.match_window_seconds + 1, rng).status == IngestStatus::kPending);

  // Retention.
  const std::int64_t day = 86400;
  s.purge_expired(110 + (cfg.delta_days - 1) * day);
  CHECK(s.lookup(ccm).has_value());
  s.purge_expired(110 + (cfg.delta_days + 1) * day);
  CHECK_FALSE(s.lookup(ccm).has_value());
  s.purge_expired(110 + (cfg.delta_days + 1) * day);
  CHECK(s.stored_count() == 0);
}

TEST_CASE("PS' is reachable only through the authority") {
  using Rec = Server::PublicRecord;
  CHECK_FALSE(std::is_default_constructible_v<HaAccess>);
  CHECK_FALSE(HasPsPrime<Rec>);
  CHECK_FALSE(HasPsPrime<IngestResult>);
  CHECK(HasPs<Rec>);
}

TEST_CASE("end-to-end verification, publication and risk") {
  const auto& w = world();
  Rng rng("e2e");
  ProtocolConfig cfg;
  auto ha = HealthAuthority::keygen(ctx(), rng, cfg);
  Server server = Server::keygen(ctx(), rng, cfg);
  auto ra = ha.set_user_id(rng);
  auto rb = ha.set_user_id(rng);
  auto rc = ha.set_user_id(rng);
  User a = User::keygen(ctx(), ra.id, rng), b = User::keygen(ctx(), rb.id, rng), c = User::keygen(ctx(), rc.id, rng);
  a.rotate(0, rng);
  b.rotate(0, rng);
  c.rotate(0, rng);
  auto [ea, eb] = contact(server, a, b, 1000, 1200, rng);
  a.record(ea);
  b.record(eb);

  // Healthy: refused.
  auto healthy = ha.verify_contact_list(server, w.gm.vk, a.id(), a.contacts());
  CHECK(healthy.status == ListStatus::kUserHealthy);
  CHECK(healthy.entries.empty());
  CHECK_THROWS_AS(ha.verify_contact_list(server, w.gm.vk, ctx().g2(), a.contacts()), ProtocolError);

  ha.set_status(a.id(), HealthStatus::kInfected);
  auto v = ha.verify_contact_list(server, w.gm.vk, a.id(), a.contacts());
  REQUIRE(v.entries.size() == 1);
  CHECK(v.entries[0].accepted());

  // b's entry submitted under a's identity fails the CCM check.
  auto cross = ha.verify_contact_list(server, w.gm.vk, a.id(), b.contacts());
  CHECK(cross.entries[0].outcome == EntryOutcome::kCcmMismatch);
  // A tampered M fails the group signature.
  auto bad = a.contacts();
  bad[0].m += ctx().g2();
  CHECK(ha.verify_contact_list(server, w.gm.vk, a.id(), bad).entries[0].outcome ==
        EntryOutcome::kBadGroupSignature);

  VerifiedSet vs = ha.publish(2000);
  CHECK(vs.ccms.size() == 1);
  CHECK(verify_published(ctx(), ha.pk(), vs));
  auto rb_score = risk_score(ctx(), ha.pk(), b.contacts(), vs, cfg);
  CHECK(rb_score.score == 2);  // 1200 s -> two 15-minute units
  CHECK(rb_score.exposed);
  CHECK(risk_score(ctx(), ha.pk(), c.contacts(), vs, cfg).score == 0);

  auto forged = vs;
  forged.ccms.push_back(Scalar::from_u64(1));
  std::sort(forged.ccms.begin(), forged.ccms.end());
  CHECK_FALSE(verify_published(ctx(), ha.pk(), forged));
  CHECK_THROWS_AS(risk_score(ctx(), ha.pk(), b.contacts(), forged, cfg), ProtocolError);

  // Anti-replay: after the server purges, the same entry is rejected.
  server.purge_expired(1000 + (cfg.delta_days + 1) * 86400);
  auto replay = ha.verify_contact_list(server, w.gm.vk, a.id(), a.contacts());
  CHECK(replay.entries[0].outcome == EntryOutcome::kNoServerRecord);
}

TEST_CASE("empty publication and risk weights") {
  Rng rng("publish");
  auto ha = ha_keygen(ctx(), rng);
  auto vs = ha_publish(ctx(), ha, {});
  CHECK(vs.ccms.empty());
  CHECK(verify_published(ctx(), ha.pk, vs));
  auto dup = ha_publish(ctx(), ha, {Scalar::from_u64(3), Scalar::from_u64(1), Scalar::from_u64(3)});
  CHECK(dup.ccms.size() == 2);

  ProtocolConfig cfg;
  CHECK(cfg.duration_weight(0) == 0);
  CHECK(cfg.duration_weight(1) == 1);
  CHECK(cfg.duration_weight(900) == 1);
  CHECK(cfg.duration_weight(901) == 2);
  CHECK(cfg.duration_weight(100000) == 4);
  cfg.weight_unit_seconds = 1'000'000;
  std::vector<ContactEntry> list(3);
  std::vector<Scalar> ccms;
  for (int i = 0; i < 3; ++i) {
    list[i].ccm = Scalar::from_u64(10 + i);
    list[i].duration = 60;
    ccms.push_back(list[i].ccm);
  }
  auto vs3 = ha_publish(ctx(), ha, ccms);
  CHECK(risk_score(ctx(), ha.pk, list, vs3, cfg).score == 3);
}

TEST_CASE("user purge and epochs") {
  Rng rng("user-purge");
  User u = User::keygen(ctx(), ctx().g2() * Scalar::from_u64(5), rng);
  ProtocolConfig cfg;
  u.rotate(0, rng);
  Ebid first = u.ebid();
  u.rotate(1, rng);
  CHECK_FALSE(first == u.ebid());
  CHECK_THROWS_AS(u.rotate(1, rng), ProtocolError);
  ContactEntry old, fresh;
  old.time = 0;
  fresh.time = 2 * 86400;
  u.record(old);
  u.record(fresh);
  u.purge_expired((cfg.delta_days + 1) * 86400, cfg);
  REQUIRE(u.contacts().size() == 1);
  CHECK(u.contacts()[0].time == fresh.time);
  u.purge_expired((cfg.delta_days + 1) * 86400, cfg);
  CHECK(u.contacts().size() == 1);
}

TEST_CASE("state snapshots round-trip") {
  const auto& w = world();
  Rng rng("snapshots");
  ProtocolConfig cfg;
  cfg.delta_days = 7;
  auto ha = HealthAuthority::keygen(ctx(), rng, cfg);
  Server server = Server::keygen(ctx(), rng, cfg);
  auto ra = ha.set_user_id(rng);
  auto rb = ha.set_user_id(rng);
  User a = User::keygen(ctx(), ra.id, rng), b = User::keygen(ctx(), rb.id, rng);
  a.rotate(3, rng);
  b.rotate(3, rng);
  auto [ea, eb] = contact(server, a, b, 50, 60, rng);
  a.record(ea);
  server.ingest(Scalar::from_u64(77), "P1", 60, rng);
  ha.set_status(a.id(), HealthStatus::kInfected);
  ha.verify_contact_list(server, w.gm.vk, a.id(), a.contacts());
  ha.publish(100);

  auto env = envelope("server", ctx().security_level(), server.to_json());
  Server s2 = Server::from_json(ctx(), open_envelope(Json::parse(env.dump()), "server", SecurityLevel::k112));
  CHECK(s2.to_json() == server.to_json());
  CHECK(s2.config().delta_days == 7);
  CHECK(s2.pending_count() == 1);
  CHECK_THROWS_AS(open_envelope(env, "user", SecurityLevel::k112), MalformedInput);
  CHECK_THROWS_AS(open_envelope(env, "server", SecurityLevel::k128), MalformedInput);

  User a2 = User::from_json(Json::parse(a.to_json().dump()));
  CHECK(a2.to_json() == a.to_json());
  CHECK(a2.contacts() == a.contacts());
  HealthAuthority ha2 = HealthAuthority::from_json(ctx(), Json::parse(ha.to_json().dump()));
  CHECK(ha2.to_json() == ha.to_json());
  CHECK(ha2.pk() == ha.pk());
  CHECK(ha2.published().back() == ha.published().back());

  Json broken = a.to_json();
  broken["pk"] = b.to_json()["pk"];
  CHECK_THROWS_AS(User::from_json(broken), MalformedInput);
  broken = a.to_json();
  broken["id"] = "zz";
  CHECK_THROWS_AS(User::from_json(broken), MalformedInput);
}
