#include <doctest.h>

#include "csig_oracle.hpp"
#include "spot/errors.hpp"

using namespace spot;
using spot::testing::KnownExponentOracle;

namespace {

const PairingContext& ctx() {
  static const PairingContext c = PairingContext::setup(SecurityLevel::k112, "csig-tests");
  return c;
}

template <class Base, class Opp>
void completeness(std::size_t k, int runs, Rng& rng) {
  using S = Csig<Base, Opp>;
  auto sk = S::keygen(ctx(), k, rng);
  for (int i = 0; i < runs; ++i) {
    std::vector<Opp> m;
    for (std::size_t j = 0; j < k; ++j) m.push_back(ctx().generator<Opp>() * rng.next_scalar());
    auto sig = S::sign(ctx(), sk, m, rng);
    REQUIRE(S::verify(ctx(), sk.pk, m, sig));
  }
}

template <class Base, class Opp>
void suite(const char* label) {
  using S = Csig<Base, Opp>;
  Rng rng(label);
  CAPTURE(label);

  SUBCASE("keygen shape and fresh keys") {
    Rng a("a"), b("b");
    auto ka = S::keygen(ctx(), 3, a);
    auto kb = S::keygen(ctx(), 3, b);
    CHECK(ka.pk.k() == 3);
    CHECK(ka.pk.h.size() == 3);
    CHECK_FALSE(ka.pk == kb.pk);
    CHECK_THROWS_AS(S::keygen(ctx(), 0, a), MalformedInput);
  }

  SUBCASE("completeness for k = 1..8") {
    for (std::size_t k = 1; k <= 8; ++k) completeness<Base, Opp>(k, 100, rng);
  }

  SUBCASE("identity message and fresh signatures") {
    auto sk = S::keygen(ctx(), 2, rng);
    std::vector<Opp> m(2, Opp::identity());
    auto s1 = S::sign(ctx(), sk, m, rng);
    auto s2 = S::sign(ctx(), sk, m, rng);
    CHECK(S::verify(ctx(), sk.pk, m, s1));
    CHECK(S::verify(ctx(), sk.pk, m, s2));
    CHECK_FALSE(s1.z == s2.z);
  }

  SUBCASE("shape errors are distinct from rejection") {
    auto sk = S::keygen(ctx(), 2, rng);
    std::vector<Opp> m(2, ctx().generator<Opp>());
    auto sig = S::sign(ctx(), sk, m, rng);
    std::vector<Opp> short_m(1, ctx().generator<Opp>());
    CHECK_THROWS_AS(S::verify(ctx(), sk.pk, short_m, sig), MalformedInput);
    CHECK_THROWS_AS(S::sign(ctx(), sk, short_m, rng), MalformedInput);
  }

  SUBCASE("oracle: key and signature elements match their logs") {
    KnownExponentOracle o(ctx(), Rng(std::string(label) + "-oracle"));
    for (std::size_t k : {1u, 2u, 7u}) {
      auto in = testing::make_csig_instance<Base, Opp>(o, k);
      CHECK(in.points_match);
      CHECK(testing::csig_holds_in_exponent(o, in.sk.pk, in.msg, in.sig));
      CHECK(S::verify(ctx(), in.sk.pk, in.msg, in.sig));
    }
  }

  SUBCASE("oracle: z * g is rejected by both evaluations") {
    KnownExponentOracle o(ctx(), Rng(std::string(label) + "-z"));
    for (int i = 0; i < 10; ++i) {
      auto in = testing::make_csig_instance<Base, Opp>(o, 2);
      auto bad = in.sig;
      bad.z = in.sig.z + ctx().generator<Opp>();
      o.record(bad.z, o.log_or_throw(in.sig.z) + Scalar::one());
      const bool by_scalar = testing::csig_holds_in_exponent(o, in.sk.pk, in.msg, bad);
      const bool by_pairing = S::verify(ctx(), in.sk.pk, in.msg, bad);
      CHECK_FALSE(by_scalar);
      CHECK(by_scalar == by_pairing);
    }
  }

  SUBCASE("oracle: swapped messages are rejected") {
    KnownExponentOracle o(ctx(), Rng(std::string(label) + "-swap"));
    auto e = CsigKeyExponents::random(2, o.rng());
    auto sk = S::derive(ctx(), e);
    std::vector<Opp> m1 = {o.random<Opp>(), o.random<Opp>()};
    std::vector<Opp> m2 = {o.random<Opp>(), o.random<Opp>()};
    auto s1 = S::sign(ctx(), sk, m1, o.rng());
    auto s2 = S::sign(ctx(), sk, m2, o.rng());
    CHECK(S::verify(ctx(), sk.pk, m1, s1));
    CHECK_FALSE(S::verify(ctx(), sk.pk, m1, s2));
    CHECK_FALSE(S::verify(ctx(), sk.pk, m2, s1));
  }

  SUBCASE("tamper any component or message element") {
    auto sk = S::keygen(ctx(), 2, rng);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Opp> m = {ctx().generator<Opp>() * rng.next_scalar(), ctx().generator<Opp>() * rng.next_scalar()};
      auto sig = S::sign(ctx(), sk, m, rng);
      const Scalar d = rng.next_nonzero_scalar();
      const Opp dopp = ctx().generator<Opp>() * d;
      const Base dbase = ctx().generator<Base>() * d;
      for (int c = 0; c < 7; ++c) {
        auto bad = sig;
        switch (c) {
          case 0: bad.z += dopp; break;
          case 1: bad.r += dopp; break;
          case 2: bad.s += dbase; break;
          case 3: bad.t += dopp; break;
          case 4: bad.u += dopp; break;
          case 5: bad.v += dbase; break;
          case 6: bad.w += dopp; break;
        }
        CHECK_FALSE(S::verify(ctx(), sk.pk, m, bad));
      }
      for (std::size_t j = 0; j < m.size(); ++j) {
        auto bad_m = m;
        bad_m[j] += dopp;
        CHECK_FALSE(S::verify(ctx(), sk.pk, bad_m, sig));
      }
    }
  }

  SUBCASE("serialization") {
    using Sig = CsigSignature<Base, Opp>;
    auto sk = S::keygen(ctx(), 7, rng);
    CHECK(S::PublicKey::from_bytes(sk.pk.to_bytes()) == sk.pk);
    std::vector<Opp> m(7, ctx().generator<Opp>());
    auto sig = S::sign(ctx(), sk, m, rng);
    auto bytes = sig.to_bytes();
    CHECK(bytes.size() == Sig::encoded_size());
    CHECK(Sig::from_bytes(bytes) == sig);
    bytes.pop_back();
    CHECK_THROWS_AS(Sig::from_bytes(bytes), MalformedInput);
    CHECK(sk.pk.elements() == count_of<Base>(18) + count_of<Opp>(2));
  }
}

}  // namespace

TEST_CASE("csig signing G2 vectors") { suite<G1Point, G2Point>("signs-g2"); }
TEST_CASE("csig signing G1 vectors") { suite<G2Point, G1Point>("signs-g1"); }
