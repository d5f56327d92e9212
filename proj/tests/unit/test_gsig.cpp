#include <doctest.h>

#include "known_exponent_oracle.hpp"
#include "niwi_oracle.hpp"
#include "spot/errors.hpp"
#include "spot/gsig.hpp"

using namespace spot;

namespace {

const PairingContext& ctx() {
  static const PairingContext c = PairingContext::setup(SecurityLevel::k112, "gsig-tests");
  return c;
}

struct Group {
  GroupManagerKey gm;
  std::vector<ProxyCredential> proxies;
};

const Group& group() {
  static const Group g = [] {
    Rng rng("gsig-group");
    Group out;
    out.gm = gsig_setup(ctx(), rng);
    out.proxies.push_back(gsig_join(ctx(), out.gm, rng));
    out.proxies.push_back(gsig_join(ctx(), out.gm, rng));
    return out;
  }();
  return g;
}

}  // namespace

TEST_CASE("setup and join shapes") {
  const auto& g = group();
  CHECK(g.gm.vk.pk_g.pk1.k() == 7);
  CHECK(g.gm.vk.pk_g.pk2.k() == 2);
  CHECK(GroupVerifKey::from_bytes(g.gm.vk.to_bytes()) == g.gm.vk);
  CHECK(g.gm.vk.elements() == ElementCount{11, 21, 0, 0});
  const auto& cred = g.proxies[0];
  CHECK(credential_valid(ctx(), g.gm.vk, cred));
  CHECK(proxy_key_g1_part(cred.pk()).size() == 6);
  CHECK(proxy_key_g2_part(cred.pk()).size() == 2);
  CHECK(XsigSignature::elements() == ElementCount{7, 7, 0, 0});

  Rng rng("other-group");
  auto other = gsig_setup(ctx(), rng);
  auto foreign = gsig_join(ctx(), other, rng);
  CHECK(credential_valid(ctx(), other.vk, foreign));
  CHECK_FALSE(credential_valid(ctx(), g.gm.vk, foreign));
}

TEST_CASE("completeness over 50 credential/message pairs") {
  const auto& g = group();
  Rng rng("gsig-complete");
  int ok = 0;
  PreparedGroupKey prepared(ctx(), g.gm.vk);
  for (int i = 0; i < 50; ++i) {
    const auto& cred = g.proxies[i % 2];
    G2Point m = ctx().g2() * rng.next_scalar();
    auto out = gsig_sign(ctx(), g.gm.vk, cred, m, rng);
    const bool v = gsig_verify(ctx(), g.gm.vk, m, out.pi);
    ok += v;
    CHECK(gsig_verify(ctx(), g.gm.vk, m, out.pi, {Execution::kParallel, &prepared}) == v);
    CHECK(out.pi.proof.c.size() == kGsigG1Variables);
    CHECK(out.pi.proof.d.size() == kGsigG2Variables);
    CHECK(out.pi.proof.eq.size() == kGsigEquations);
  }
  CHECK(ok == 50);
}

TEST_CASE("message and group binding") {
  const auto& g = group();
  Rng rng("gsig-binding");
  G2Point m = ctx().g2() * rng.next_scalar();
  auto out = gsig_sign(ctx(), g.gm.vk, g.proxies[0], m, rng);
  CHECK(gsig_verify(ctx(), g.gm.vk, m, out.pi));
  CHECK_FALSE(gsig_verify(ctx(), g.gm.vk, m + ctx().g2(), out.pi));
  auto other = gsig_setup(ctx(), rng);
  CHECK_FALSE(gsig_verify(ctx(), other.vk, m, out.pi));

  // Uncertified key: the prover's witness check refuses.
  ProxyCredential rogue = g.proxies[0];
  rogue.sk_p = proxy_keygen(ctx(), rng);
  CHECK_THROWS_AS(gsig_sign(ctx(), g.gm.vk, rogue, m, rng), UnsatisfiedWitness);
}

TEST_CASE("fresh proofs and structural indistinguishability") {
  const auto& g = group();
  Rng rng("gsig-fresh");
  G2Point m = ctx().g2() * rng.next_scalar();
  auto a = gsig_sign(ctx(), g.gm.vk, g.proxies[0], m, rng);
  auto b = gsig_sign(ctx(), g.gm.vk, g.proxies[0], m, rng);
  auto c = gsig_sign(ctx(), g.gm.vk, g.proxies[1], m, rng);
  for (std::size_t i = 0; i < a.pi.proof.c.size(); ++i) CHECK_FALSE(a.pi.proof.c[i] == b.pi.proof.c[i]);
  for (std::size_t i = 0; i < a.pi.proof.eq.size(); ++i) CHECK_FALSE(a.pi.proof.eq[i] == b.pi.proof.eq[i]);
  CHECK(gsig_verify(ctx(), g.gm.vk, m, b.pi));
  CHECK(gsig_verify(ctx(), g.gm.vk, m, c.pi));
  CHECK(a.pi.proof.elements() == c.pi.proof.elements());
  CHECK(a.pi.to_bytes().size() == c.pi.to_bytes().size());
  CHECK(GroupSignature::from_bytes(c.pi.to_bytes()) == c.pi);
}

TEST_CASE("sequential and parallel proving agree under one seed") {
  const auto& g = group();
  G2Point m = ctx().g2() * Scalar::from_u64(99);
  Rng r1("same-seed"), r2("same-seed");
  auto a = gsig_sign(ctx(), g.gm.vk, g.proxies[1], m, r1, Execution::kSequential);
  auto b = gsig_sign(ctx(), g.gm.vk, g.proxies[1], m, r2, Execution::kParallel);
  CHECK(a.pi == b.pi);
  CHECK(a.sigma_m == b.sigma_m);
}

TEST_CASE("every statement equation holds for the honest witness") {
  const auto& g = group();
  Rng rng("gsig-witness");
  G2Point m = ctx().g2() * rng.next_scalar();
  const std::array<G2Point, 1> msg = {m};
  auto sm = CsigSignsG2::sign(ctx(), g.proxies[0].sk_p, msg, rng);
  auto st = gsig_statement(ctx(), g.gm.vk, m);
  auto w = gsig_witness(g.proxies[0], sm);
  REQUIRE(st.equations.size() == 6);
  for (const auto& eq : st.equations) CHECK(equation_holds(ctx(), eq, w));
  // A signature on a different message breaks exactly the two message equations.
  auto sm2 = CsigSignsG2::sign(ctx(), g.proxies[0].sk_p, std::array<G2Point, 1>{m + ctx().g2()}, rng);
  auto w2 = gsig_witness(g.proxies[0], sm2);
  for (std::size_t i = 0; i < 6; ++i) CHECK(equation_holds(ctx(), st.equations[i], w2) == (i >= 2));
}

TEST_CASE("tampering any proof component is rejected") {
  const auto& g = group();
  Rng rng("gsig-tamper");
  G2Point m = ctx().g2() * rng.next_scalar();
  auto out = gsig_sign(ctx(), g.gm.vk, g.proxies[0], m, rng);
  PreparedGroupKey prepared(ctx(), g.gm.vk);
  const Scalar d = rng.next_nonzero_scalar();
  for (std::size_t i = 0; i < kGsigG1Variables; ++i) {
    auto bad = out.pi;
    bad.proof.c[i] += ctx().g1() * d;
    CHECK_FALSE(gsig_verify(ctx(), g.gm.vk, m, bad, {Execution::kSequential, &prepared}));
  }
  for (std::size_t j = 0; j < kGsigG2Variables; ++j) {
    auto bad = out.pi;
    bad.proof.d[j] += ctx().g2() * d;
    CHECK_FALSE(gsig_verify(ctx(), g.gm.vk, m, bad, {Execution::kSequential, &prepared}));
  }
  for (std::size_t e = 0; e < kGsigEquations; ++e) {
    auto bad = out.pi;
    bad.proof.eq[e].pi += ctx().g2() * d;
    CHECK_FALSE(gsig_verify(ctx(), g.gm.vk, m, bad));
    bad = out.pi;
    bad.proof.eq[e].theta += ctx().g1() * d;
    CHECK_FALSE(gsig_verify(ctx(), g.gm.vk, m, bad));
  }
}

TEST_CASE("all-ones coefficient matrix does not encode the message equation") {
  Rng rng("gsig-ones");
  auto sk = CsigSignsG2::keygen(ctx(), 1, rng);
  G2Point m = ctx().g2() * rng.next_scalar();
  auto sig = CsigSignsG2::sign(ctx(), sk, std::array<G2Point, 1>{m}, rng);
  // r with the message factor removed: g2^(alpha - rho tau - gamma_z zeta)
  const G2Point r_full = sig.r + m * sk.gammas[0];
  NiwiWitness w{{sk.pk.gz, sk.pk.gr, sig.s}, {sig.z, r_full, sig.t}};

  const std::vector<G1Point> no_a(3);
  const std::vector<G2Point> no_b(3);
  const std::vector<std::vector<Scalar>> ones(3, std::vector<Scalar>(3, Scalar::one()));
  auto literal = PairingProductEquation::from_dense(no_a, no_b, ones, GtElement::one());
  CHECK_FALSE(equation_holds(ctx(), literal, w));

  std::vector<std::vector<Scalar>> diag(3, std::vector<Scalar>(3, Scalar::zero()));
  for (std::size_t i = 0; i < 3; ++i) diag[i][i] = Scalar::one();
  auto used = PairingProductEquation::from_dense(no_a, no_b, diag, ctx().pair(sk.pk.gr, sk.pk.a_pub));
  CHECK(equation_holds(ctx(), used, w));
}
