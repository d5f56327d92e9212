#include <doctest.h>

#include "csig_oracle.hpp"
#include "spot/errors.hpp"
#include "spot/xsig.hpp"

using namespace spot;
using spot::testing::KnownExponentOracle;

namespace {

const PairingContext& ctx() {
  static const PairingContext c = PairingContext::setup(SecurityLevel::k112, "xsig-tests");
  return c;
}

struct Msg {
  std::vector<G1Point> m1;
  std::vector<G2Point> m2;
};

Msg random_msg(std::size_t k1, std::size_t k2, Rng& rng) {
  Msg m;
  for (std::size_t i = 0; i < k1; ++i) m.m1.push_back(ctx().g1() * rng.next_scalar());
  for (std::size_t i = 0; i < k2; ++i) m.m2.push_back(ctx().g2() * rng.next_scalar());
  return m;
}

}  // namespace

TEST_CASE("xsig key shapes") {
  Rng rng("xsig-shape");
  auto sk = xsig_keygen(ctx(), 6, 2, rng);
  CHECK(sk.sk1.pk.k() == 7);
  CHECK(sk.sk2.pk.k() == 2);
  CHECK(sk.pk().k1() == 6);
  CHECK(sk.pk().k2() == 2);
  auto tiny = xsig_keygen(ctx(), 0, 1, rng);
  CHECK(tiny.sk1.pk.k() == 1);
  CHECK_THROWS_AS(xsig_keygen(ctx(), 0, 0, rng), MalformedInput);
  CHECK(XsigPublicKey::from_bytes(sk.pk().to_bytes()) == sk.pk());
}

TEST_CASE("xsig completeness and tamper sensitivity over mixed shapes") {
  Rng rng("xsig-complete");
  const std::pair<std::size_t, std::size_t> shapes[] = {{6, 2}, {0, 1}, {1, 0}, {2, 2}};
  for (auto [k1, k2] : shapes) {
    CAPTURE(k1);
    CAPTURE(k2);
    auto sk = xsig_keygen(ctx(), k1, k2, rng);
    auto pk = sk.pk();
    for (int trial = 0; trial < 20; ++trial) {
      Msg m = random_msg(k1, k2, rng);
      auto sig = xsig_sign(ctx(), sk, m.m1, m.m2, rng);
      REQUIRE(xsig_verify(ctx(), pk, m.m1, m.m2, sig));
      const Scalar d = rng.next_nonzero_scalar();
      for (std::size_t i = 0; i < k1; ++i) {
        Msg bad = m;
        bad.m1[i] += ctx().g1() * d;
        CHECK_FALSE(xsig_verify(ctx(), pk, bad.m1, bad.m2, sig));
      }
      for (std::size_t i = 0; i < k2; ++i) {
        Msg bad = m;
        bad.m2[i] += ctx().g2() * d;
        CHECK_FALSE(xsig_verify(ctx(), pk, bad.m1, bad.m2, sig));
      }
      auto bad = sig;
      bad.sigma2.s += ctx().g1() * d;
      CHECK_FALSE(xsig_verify(ctx(), pk, m.m1, m.m2, bad));
      bad = sig;
      bad.sigma1.z += ctx().g1() * d;
      CHECK_FALSE(xsig_verify(ctx(), pk, m.m1, m.m2, bad));
    }
  }
}

TEST_CASE("xsig signs twice with fresh chained element") {
  Rng rng("xsig-fresh");
  auto sk = xsig_keygen(ctx(), 6, 2, rng);
  Msg m = random_msg(6, 2, rng);
  auto a = xsig_sign(ctx(), sk, m.m1, m.m2, rng);
  auto b = xsig_sign(ctx(), sk, m.m1, m.m2, rng);
  CHECK(xsig_verify(ctx(), sk.pk(), m.m1, m.m2, a));
  CHECK(xsig_verify(ctx(), sk.pk(), m.m1, m.m2, b));
  CHECK_FALSE(a.chained() == b.chained());
  CHECK(XsigSignature::from_bytes(a.to_bytes()) == a);
  CHECK(XsigSignature::elements() == ElementCount{7, 7, 0, 0});
  CHECK_THROWS_AS(xsig_verify(ctx(), sk.pk(), std::vector<G1Point>(5), m.m2, a), MalformedInput);
}

TEST_CASE("xsig chaining checked in the exponent") {
  KnownExponentOracle o(ctx(), Rng("xsig-oracle"));
  for (int trial = 0; trial < 20; ++trial) {
    // Inner G2 instance over a known message, then the G1 instance over m1 || s.
    auto inner = testing::make_csig_instance<G1Point, G2Point>(o, 2);
    REQUIRE(inner.points_match);
    auto e1 = CsigKeyExponents::random(3, o.rng());
    auto sk1 = CsigSignsG1::derive(ctx(), e1);
    std::vector<G1Point> m1 = {o.random_g1(), o.random_g1(), inner.sig.s};
    auto rnd = CsigSignRandomness::random(o.rng());
    auto sigma1 = CsigSignsG1::sign_with(ctx(), sk1, m1, rnd);

    // Logs of the outer key and signature, from the scalars alone.
    auto learn = [&](const G2Point& p, const Scalar& k) { CHECK(p == o.g2(k)); };
    auto learn1 = [&](const G1Point& p, const Scalar& k) { CHECK(p == o.g1(k)); };
    learn(sk1.pk.gr, e1.gr_log);
    learn(sk1.pk.hu, e1.hu_log);
    learn(sk1.pk.gz, e1.gr_log * e1.gamma_z);
    learn(sk1.pk.hz, e1.hu_log * e1.delta_z);
    learn1(sk1.pk.a_pub, e1.alpha);
    learn1(sk1.pk.b_pub, e1.beta);
    Scalar r_log = e1.alpha - rnd.rho * rnd.tau - e1.gamma_z * rnd.zeta;
    Scalar u_log = e1.beta - rnd.phi * rnd.omega - e1.delta_z * rnd.zeta;
    for (std::size_t i = 0; i < 3; ++i) {
      learn(sk1.pk.g[i], e1.gr_log * e1.gammas[i]);
      learn(sk1.pk.h[i], e1.hu_log * e1.deltas[i]);
      r_log = r_log - o.log_or_throw(m1[i]) * e1.gammas[i];
      u_log = u_log - o.log_or_throw(m1[i]) * e1.deltas[i];
    }
    learn1(sigma1.z, rnd.zeta);
    learn1(sigma1.r, r_log);
    learn(sigma1.s, e1.gr_log * rnd.rho);
    learn1(sigma1.t, rnd.tau);
    learn1(sigma1.u, u_log);
    learn(sigma1.v, e1.hu_log * rnd.phi);
    learn1(sigma1.w, rnd.omega);

    XsigPublicKey pk{sk1.pk, inner.sk.pk};
    XsigSignature sig{sigma1, inner.sig};
    std::vector<G1Point> m1_only(m1.begin(), m1.end() - 1);
    CHECK(testing::csig_holds_in_exponent(o, sk1.pk, m1, sigma1));
    CHECK(xsig_verify(ctx(), pk, m1_only, inner.msg, sig));

    // Substitute another G1 element into the chained slot.
    G1Point other = o.random_g1();
    auto m1_bad = m1;
    m1_bad.back() = other;
    auto bad = sig;
    bad.sigma2.s = other;
    const bool by_scalar = testing::csig_holds_in_exponent(o, sk1.pk, m1_bad, sigma1) &&
                           testing::csig_holds_in_exponent(o, inner.sk.pk, inner.msg, bad.sigma2);
    CHECK_FALSE(by_scalar);
    CHECK(by_scalar == xsig_verify(ctx(), pk, m1_only, inner.msg, bad));
  }
}
