#include <doctest.h>

#include <set>

#include "known_exponent_oracle.hpp"
#include "spot/errors.hpp"
#include "spot/pairing.hpp"
#include "spot/rng.hpp"

using namespace spot;

namespace {

struct Frozen {
  SecurityLevel level;
  const char* order;
  const char* h_empty;
  const char* h_abc;
};

// H values computed independently with hashlib.shake_256 and Python integers.
constexpr Frozen kFrozen[] = {
    {SecurityLevel::k112,
     "21888242871839275222246405745257275088548364400416034343698204186575808495617",
     "658669859364627322999739925675087103842545932450872886346635542331504948331",
     "17579287279638769023415773465787432163397982400064415899324222297966504589756"},
    {SecurityLevel::k128,
     "52435875175126190479447740508185965837690552500527637822603658699938581184513",
     "46418794558644257953033887618970871562352124854672852623903034965156865350868",
     "11216671487936307955310759759927663701319477180840669562289835272583105246156"},
};

}  // namespace

TEST_CASE("setup is deterministic and rejects unknown levels") {
  for (auto level : {SecurityLevel::k112, SecurityLevel::k128}) {
    auto a = PairingContext::setup(level, "seed0");
    auto b = PairingContext::setup(level, "seed0");
    CHECK(a.serialize() == b.serialize());
    CHECK_FALSE(a.gt().is_one());
    auto c = PairingContext::setup(level, "seed1");
    CHECK(c.serialize() != a.serialize());
    auto back = PairingContext::deserialize(a.serialize());
    CHECK(back == a);
  }
  CHECK_THROWS_AS(security_level_from_bits(80), UnsupportedSecurityLevel);
  CHECK_THROWS_AS(PairingContext::setup(static_cast<SecurityLevel>(100), "x"), UnsupportedSecurityLevel);
}

TEST_CASE("group order and H match frozen values") {
  for (const auto& f : kFrozen) {
    auto ctx = PairingContext::setup(f.level, "frozen");
    CHECK(ctx.order_decimal() == f.order);
    CHECK(ctx.hash_to_scalar("").to_decimal() == f.h_empty);
    CHECK(ctx.hash_to_scalar("abc").to_decimal() == f.h_abc);
    CHECK(ctx.hash_to_scalar("") == ctx.hash_to_scalar(""));
  }
}

TEST_CASE("bilinearity and group laws over 100 samples") {
  for (auto level : {SecurityLevel::k112, SecurityLevel::k128}) {
    auto ctx = PairingContext::setup(level, "bilinear");
    Rng rng("bilinear-rng");
    for (int i = 0; i < 100; ++i) {
      Scalar a = rng.next_scalar(), b = rng.next_scalar();
      G1Point p = ctx.g1() * a;
      G2Point q = ctx.g2() * b;
      REQUIRE(ctx.pair(p, q) == ctx.gt().pow(a * b));
      CHECK(p + G1Point::identity() == p);
      CHECK(p - p == G1Point::identity());
      CHECK(ctx.g1() * (a + b) == p + ctx.g1() * b);
      CHECK(ctx.g2() * (a * b) == q * a);
      CHECK(p.in_prime_order_subgroup());
    }
  }
}

TEST_CASE("exponent oracle agrees with pairings") {
  auto ctx = PairingContext::setup(SecurityLevel::k112, "oracle");
  testing::KnownExponentOracle oracle(ctx, Rng("oracle"));
  int agree = 0;
  for (int i = 0; i < 100; ++i) {
    auto p1 = oracle.random_g1(), p2 = oracle.random_g1();
    auto q1 = oracle.random_g2(), q2 = oracle.random_g2();
    Scalar k = oracle.random_scalar();
    std::vector<testing::KnownExponentOracle::Term> terms = {{p1, q1, Scalar::one()}, {p2, q2, k}};
    // Half the instances carry the true target, half a perturbed one.
    Scalar target = oracle.product_log(terms);
    if (i % 2) target += Scalar::one();
    GtElement t = oracle.gt(target);
    bool by_pairing = oracle.holds_with_pairings(terms, t);
    bool by_scalar = oracle.holds_in_exponent(terms, t);
    CHECK(by_pairing == by_scalar);
    CHECK(by_pairing == (i % 2 == 0));
    agree += by_pairing == by_scalar;
  }
  CHECK(agree == 100);
}

TEST_CASE("hash_to_scalar and hash_to_g1 scans") {
  auto ctx = PairingContext::setup(SecurityLevel::k112, "scan");
  Rng rng("scan");
  std::set<Bytes> seen;
  for (int i = 0; i < 10000; ++i) {
    Bytes in(24);
    rng.fill(in);
    seen.insert(ctx.hash_to_scalar(in).to_bytes());
  }
  CHECK(seen.size() == 10000);

  std::set<Bytes> points;
  for (int i = 0; i < 200; ++i) {
    G1Point p = ctx.hash_to_g1("msg-" + std::to_string(i));
    CHECK(p.in_prime_order_subgroup());
    CHECK_FALSE(p.is_identity());
    points.insert(p.to_bytes());
  }
  CHECK(points.size() == 200);
  CHECK(ctx.hash_to_g1("x") == ctx.hash_to_g1("x"));
}

TEST_CASE("serialization round-trips and rejects corruption") {
  for (auto level : {SecurityLevel::k112, SecurityLevel::k128}) {
    auto ctx = PairingContext::setup(level, "ser");
    Rng rng("ser");
    for (int i = 0; i < 20; ++i) {
      Scalar k = rng.next_scalar();
      G1Point p = ctx.g1() * k;
      G2Point q = ctx.g2() * k;
      GtElement t = ctx.gt().pow(k);
      CHECK(Scalar::from_bytes(k.to_bytes()) == k);
      CHECK(G1Point::from_bytes(p.to_bytes()) == p);
      CHECK(G2Point::from_bytes(q.to_bytes()) == q);
      CHECK(GtElement::from_bytes(t.to_bytes()) == t);
      CHECK(p.to_bytes().size() == ctx.g1_size());
      CHECK(q.to_bytes().size() == ctx.g2_size());
      CHECK(t.to_bytes().size() == ctx.gt_size());
      CHECK(k.to_bytes().size() == ctx.scalar_size());
    }
    // Corrupted encodings.
    Bytes p = ctx.g1().to_bytes();
    p.back() ^= 0x5a;
    CHECK_THROWS_AS(G1Point::from_bytes(p), MalformedInput);
    Bytes truncated = ctx.g2().to_bytes();
    truncated.pop_back();
    CHECK_THROWS_AS(G2Point::from_bytes(truncated), MalformedInput);
    CHECK_THROWS_AS(Scalar::from_bytes(ctx.order_bytes()), MalformedInput);
    Bytes gt = ctx.gt().to_bytes();
    gt[3] ^= 1;
    CHECK_THROWS_AS(GtElement::from_bytes(gt), MalformedInput);
  }
}
