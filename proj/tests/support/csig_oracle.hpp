#pragma once

#include <array>
#include <vector>

#include "known_exponent_oracle.hpp"
#include "spot/csig.hpp"

namespace spot::testing {

// A CSIG key, message and signature whose every discrete log is known.
template <class Base, class Opp>
struct CsigInstance {
  CsigKeyExponents e;
  CsigSecretKey<Base, Opp> sk;
  std::vector<Scalar> msg_logs;
  std::vector<Opp> msg;
  CsigSignRandomness rnd;
  CsigSignature<Base, Opp> sig;
  // Every key and signature element equals the generator raised to the log
  // the oracle computed from the scalars alone.
  bool points_match = true;
};

template <class Base, class Opp>
CsigInstance<Base, Opp> make_csig_instance(KnownExponentOracle& o, std::size_t k) {
  const PairingContext& ctx = o.context();
  CsigInstance<Base, Opp> in;
  in.e = CsigKeyExponents::random(k, o.rng());
  in.sk = Csig<Base, Opp>::derive(ctx, in.e);
  for (std::size_t i = 0; i < k; ++i) {
    in.msg_logs.push_back(o.rng().next_scalar());
    in.msg.push_back(o.make<Opp>(in.msg_logs.back()));
  }
  in.rnd = CsigSignRandomness::random(o.rng());
  in.sig = Csig<Base, Opp>::sign_with(ctx, in.sk, in.msg, in.rnd);

  const auto& e = in.e;
  const auto& x = in.rnd;
  const auto& pk = in.sk.pk;
  bool ok = true;
  auto expect_base = [&](const Base& p, const Scalar& log) { ok = ok && p == o.make<Base>(log); };
  auto expect_opp = [&](const Opp& p, const Scalar& log) { ok = ok && p == o.make<Opp>(log); };
  expect_base(pk.gr, e.gr_log);
  expect_base(pk.hu, e.hu_log);
  expect_base(pk.gz, e.gr_log * e.gamma_z);
  expect_base(pk.hz, e.hu_log * e.delta_z);
  expect_opp(pk.a_pub, e.alpha);
  expect_opp(pk.b_pub, e.beta);
  for (std::size_t i = 0; i < k; ++i) {
    expect_base(pk.g[i], e.gr_log * e.gammas[i]);
    expect_base(pk.h[i], e.hu_log * e.deltas[i]);
  }
  Scalar r_log = e.alpha - x.rho * x.tau - e.gamma_z * x.zeta;
  Scalar u_log = e.beta - x.phi * x.omega - e.delta_z * x.zeta;
  for (std::size_t i = 0; i < k; ++i) {
    r_log = r_log - in.msg_logs[i] * e.gammas[i];
    u_log = u_log - in.msg_logs[i] * e.deltas[i];
  }
  expect_opp(in.sig.z, x.zeta);
  expect_opp(in.sig.r, r_log);
  expect_base(in.sig.s, e.gr_log * x.rho);
  expect_opp(in.sig.t, x.tau);
  expect_opp(in.sig.u, u_log);
  expect_base(in.sig.v, e.hu_log * x.phi);
  expect_opp(in.sig.w, x.omega);
  in.points_match = ok;
  return in;
}

// Both verification equations as pairing products with target 1.
template <class Base, class Opp>
std::array<std::vector<KnownExponentOracle::Term>, 2> csig_terms(const CsigPublicKey<Base, Opp>& pk,
                                                                  const std::vector<Opp>& msg,
                                                                  const CsigSignature<Base, Opp>& sig) {
  using O = KnownExponentOracle;
  const Scalar minus_one = -Scalar::one();
  std::vector<O::Term> first = {O::term(pk.gz, sig.z), O::term(pk.gr, sig.r), O::term(sig.s, sig.t),
                                O::term(pk.gr, pk.a_pub, minus_one)};
  std::vector<O::Term> second = {O::term(pk.hz, sig.z), O::term(pk.hu, sig.u), O::term(sig.v, sig.w),
                                 O::term(pk.hu, pk.b_pub, minus_one)};
  for (std::size_t i = 0; i < msg.size(); ++i) {
    first.push_back(O::term(pk.g[i], msg[i]));
    second.push_back(O::term(pk.h[i], msg[i]));
  }
  return {first, second};
}

// Verdict of both equations computed from discrete logs only.
template <class Base, class Opp>
bool csig_holds_in_exponent(const KnownExponentOracle& o, const CsigPublicKey<Base, Opp>& pk,
                            const std::vector<Opp>& msg, const CsigSignature<Base, Opp>& sig) {
  auto eqs = csig_terms(pk, msg, sig);
  return o.holds_in_exponent(eqs[0], GtElement::one()) && o.holds_in_exponent(eqs[1], GtElement::one());
}

}  // namespace spot::testing
