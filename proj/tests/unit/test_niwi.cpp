#include <doctest.h>

#include "niwi_oracle.hpp"
#include "spot/errors.hpp"

using namespace spot;
using spot::testing::KnownExponentOracle;

namespace {

const PairingContext& ctx() {
  static const PairingContext c = PairingContext::setup(SecurityLevel::k112, "niwi-tests");
  return c;
}

}  // namespace

TEST_CASE("crs generation") {
  Rng a("crs-a"), b("crs-b");
  auto ca = niwi_crs_gen(ctx(), a);
  auto cb = niwi_crs_gen(ctx(), b);
  CHECK_FALSE(ca.u.is_identity());
  CHECK_FALSE(ca.v.is_identity());
  CHECK_FALSE(ca == cb);
  CHECK(NiwiCrs::from_bytes(ca.to_bytes()) == ca);
  const Scalar r = Scalar::from_u64(7), s = Scalar::from_u64(11);
  auto known = niwi_crs_from_exponents(ctx(), r, s);
  CHECK(known.u == ctx().g1() * r);
  CHECK(known.v == ctx().g2() * s);
}

TEST_CASE("empty statement and linear equation") {
  Rng rng("niwi-small");
  auto crs = niwi_crs_gen(ctx(), rng);
  NiwiStatement empty;
  empty.equations.push_back(PairingProductEquation{});
  auto p0 = niwi_prove(ctx(), crs, empty, {}, rng);
  CHECK(niwi_verify(ctx(), crs, empty, p0));

  // e(X, B) = t
  NiwiStatement lin;
  lin.add_x("X");
  const Scalar x = rng.next_scalar(), b = rng.next_scalar();
  PairingProductEquation eq;
  eq.b.push_back({0, ctx().g2() * b});
  eq.target = ctx().gt().pow(x * b);
  lin.equations.push_back(eq);
  NiwiWitness w{{ctx().g1() * x}, {}};
  auto p1 = niwi_prove(ctx(), crs, lin, w, rng);
  auto p2 = niwi_prove(ctx(), crs, lin, w, rng);
  CHECK(niwi_verify(ctx(), crs, lin, p1));
  CHECK(niwi_verify(ctx(), crs, lin, p2));
  CHECK_FALSE(p1.c[0] == p2.c[0]);
  CHECK_FALSE(p1.eq[0] == p2.eq[0]);

  NiwiWitness wrong{{ctx().g1() * (x + Scalar::one())}, {}};
  CHECK_THROWS_AS(niwi_prove(ctx(), crs, lin, wrong, rng), UnsatisfiedWitness);
  CHECK_THROWS_AS(niwi_prove(ctx(), crs, lin, NiwiWitness{}, rng), MalformedInput);
}

TEST_CASE("dense construction matches sparse") {
  Rng rng("niwi-dense");
  auto crs = niwi_crs_gen(ctx(), rng);
  const Scalar x0 = rng.next_scalar(), x1 = rng.next_scalar(), y0 = rng.next_scalar();
  const Scalar a0 = rng.next_scalar(), b1 = rng.next_scalar(), g = rng.next_scalar();
  // e(A0, Y0) e(X1, B1) e(X0, Y0)^g
  Scalar t = a0 * y0 + x1 * b1 + g * x0 * y0;
  auto eq = PairingProductEquation::from_dense({ctx().g1() * a0}, {G2Point::identity(), ctx().g2() * b1},
                                               {{g}, {Scalar::zero()}}, ctx().gt().pow(t));
  CHECK(eq.a.size() == 1);
  CHECK(eq.b.size() == 1);
  CHECK(eq.gamma.size() == 1);
  NiwiStatement st;
  st.add_x("X0");
  st.add_x("X1");
  st.add_y("Y0");
  st.equations.push_back(eq);
  NiwiWitness w{{ctx().g1() * x0, ctx().g1() * x1}, {ctx().g2() * y0}};
  auto p = niwi_prove(ctx(), crs, st, w, rng);
  CHECK(niwi_verify(ctx(), crs, st, p));
  CHECK(NiwiProof::from_bytes(p.to_bytes()) == p);
  CHECK(p.elements() == ElementCount{3, 2, 0, 0});
}

TEST_CASE("random systems: completeness, verification identity in the exponent, tampering") {
  KnownExponentOracle o(ctx(), Rng("niwi-random"));
  int accepted = 0, identity_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto in = testing::random_niwi_instance(o);
    auto rnd = NiwiRandomness::random(in.w.x.size(), in.w.y.size(), o.rng());
    auto proof = niwi_prove_with(ctx(), in.crs, in.st, in.w, rnd);
    REQUIRE(testing::proof_points_match(o, in, rnd, proof));
    accepted += niwi_verify(ctx(), in.crs, in.st, proof);
    bool all = true;
    for (std::size_t e = 0; e < proof.eq.size(); ++e) {
      all = all && o.holds_in_exponent(testing::niwi_verify_terms(in.crs, in.st.equations[e], proof, e),
                                       in.st.equations[e].target);
    }
    identity_ok += all;

    // Parallel execution gives the same proof and verdicts.
    auto par = niwi_prove_with(ctx(), in.crs, in.st, in.w, rnd, Execution::kParallel);
    CHECK(par == proof);
    CHECK(niwi_verify(ctx(), in.crs, in.st, proof, {Execution::kParallel, nullptr}));
    PreparedCrs prepared(in.crs);
    CHECK(niwi_verify(ctx(), in.crs, in.st, proof, {Execution::kSequential, &prepared}));

    // Perturb one commitment; compare verdicts from both evaluations.
    const Scalar d = o.random_scalar();
    auto bad = proof;
    bool touched_is_used = false;
    if (!bad.c.empty()) {
      const std::size_t i = o.rng().uniform(bad.c.size());
      o.record(bad.c[i] + ctx().g1() * d, o.log_or_throw(bad.c[i]) + d);
      bad.c[i] += ctx().g1() * d;
      for (const auto& eq : in.st.equations) {
        for (const auto& t : eq.b) touched_is_used |= t.x == i;
        for (const auto& t : eq.gamma) touched_is_used |= t.x == i;
      }
    }
    auto verdicts = niwi_verify_each(ctx(), in.crs, in.st, bad);
    for (std::size_t e = 0; e < verdicts.size(); ++e) {
      const bool by_scalar = o.holds_in_exponent(testing::niwi_verify_terms(in.crs, in.st.equations[e], bad, e),
                                                 in.st.equations[e].target);
      CHECK(by_scalar == verdicts[e]);
    }
    if (touched_is_used) CHECK_FALSE(niwi_verify(ctx(), in.crs, in.st, bad));

    // Perturb pi of one equation: that one fails, the others still pass.
    auto bad_pi = proof;
    const std::size_t e = o.rng().uniform(bad_pi.eq.size());
    bad_pi.eq[e].pi += ctx().g2() * d;
    auto v = niwi_verify_each(ctx(), in.crs, in.st, bad_pi);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] == (k != e));
  }
  CHECK(accepted == 100);
  CHECK(identity_ok == 100);
}

TEST_CASE("two witnesses give proofs of identical shape") {
  Rng rng("niwi-wi");
  auto crs = niwi_crs_gen(ctx(), rng);
  // e(X, g2) e(g1, Y)^-1 = 1 holds for every X = g1^k, Y = g2^k.
  NiwiStatement st;
  st.add_x("X");
  st.add_y("Y");
  PairingProductEquation eq;
  eq.b.push_back({0, ctx().g2()});
  eq.a.push_back({-ctx().g1(), 0});
  eq.target = GtElement::one();
  st.equations.push_back(eq);
  const Scalar k0 = rng.next_scalar(), k1 = rng.next_scalar();
  auto p0 = niwi_prove(ctx(), crs, st, {{ctx().g1() * k0}, {ctx().g2() * k0}}, rng);
  auto p1 = niwi_prove(ctx(), crs, st, {{ctx().g1() * k1}, {ctx().g2() * k1}}, rng);
  CHECK(niwi_verify(ctx(), crs, st, p0));
  CHECK(niwi_verify(ctx(), crs, st, p1));
  CHECK(p0.elements() == p1.elements());
  CHECK(p0.to_bytes().size() == p1.to_bytes().size());
}

TEST_CASE("shape errors") {
  Rng rng("niwi-shape");
  auto crs = niwi_crs_gen(ctx(), rng);
  NiwiStatement st;
  st.add_x("X");
  PairingProductEquation eq;
  eq.b.push_back({3, ctx().g2()});
  st.equations.push_back(eq);
  CHECK_THROWS_AS(st.validate(), MalformedInput);
  NiwiStatement ok;
  ok.equations.push_back({});
  NiwiProof p;
  CHECK_THROWS_AS(niwi_verify(ctx(), crs, ok, p), MalformedInput);
  CHECK_THROWS_AS(NiwiProof::from_bytes(Bytes{1, 2, 3}), MalformedInput);
}
