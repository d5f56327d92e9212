#include "spot/csig.hpp"

#include "spot/errors.hpp"

namespace spot {

namespace {
constexpr std::string_view kPkMagic = "CSPK";
}

CsigKeyExponents CsigKeyExponents::random(std::size_t k, Rng& rng) {
  CsigKeyExponents e;
  e.gr_log = rng.next_nonzero_scalar();
  e.hu_log = rng.next_nonzero_scalar();
  e.alpha = rng.next_nonzero_scalar();
  e.beta = rng.next_nonzero_scalar();
  e.gamma_z = rng.next_nonzero_scalar();
  e.delta_z = rng.next_nonzero_scalar();
  for (std::size_t i = 0; i < k; ++i) {
    e.gammas.push_back(rng.next_nonzero_scalar());
    e.deltas.push_back(rng.next_nonzero_scalar());
  }
  return e;
}

CsigSignRandomness CsigSignRandomness::random(Rng& rng) {
  return {rng.next_nonzero_scalar(), rng.next_nonzero_scalar(), rng.next_nonzero_scalar(),
          rng.next_nonzero_scalar(), rng.next_nonzero_scalar()};
}

template <class Base, class Opp>
Bytes CsigPublicKey<Base, Opp>::to_bytes() const {
  Writer w;
  w.raw(as_bytes(kPkMagic));
  w.u8(kOrientation == Orientation::kSignsG2 ? 2 : 1);
  w.u32(static_cast<std::uint32_t>(k()));
  w.put(gz).put(hz).put(gr).put(hu).put(a_pub).put(b_pub);
  for (std::size_t i = 0; i < k(); ++i) w.put(g[i]).put(h[i]);
  return w.take();
}

template <class Base, class Opp>
CsigPublicKey<Base, Opp> CsigPublicKey<Base, Opp>::from_bytes(ByteView bytes) {
  Reader r(bytes);
  r.expect(kPkMagic);
  const std::uint8_t tag = r.u8();
  if (tag != (kOrientation == Orientation::kSignsG2 ? 2 : 1)) throw MalformedInput("CSIG key has the wrong orientation");
  const std::uint32_t k = r.u32();
  if (k > 64) throw MalformedInput("CSIG key too long");
  CsigPublicKey pk;
  pk.gz = r.get<Base>();
  pk.hz = r.get<Base>();
  pk.gr = r.get<Base>();
  pk.hu = r.get<Base>();
  pk.a_pub = r.get<Opp>();
  pk.b_pub = r.get<Opp>();
  for (std::uint32_t i = 0; i < k; ++i) {
    pk.g.push_back(r.get<Base>());
    pk.h.push_back(r.get<Base>());
  }
  r.finish();
  return pk;
}

template <class Base, class Opp>
Bytes CsigSignature<Base, Opp>::to_bytes() const {
  Writer out;
  out.put(z).put(r).put(s).put(t).put(u).put(v).put(w);
  return out.take();
}

template <class Base, class Opp>
CsigSignature<Base, Opp> CsigSignature<Base, Opp>::from_bytes(ByteView bytes) {
  Reader rd(bytes);
  CsigSignature sig;
  sig.z = rd.get<Opp>();
  sig.r = rd.get<Opp>();
  sig.s = rd.get<Base>();
  sig.t = rd.get<Opp>();
  sig.u = rd.get<Opp>();
  sig.v = rd.get<Base>();
  sig.w = rd.get<Opp>();
  rd.finish();
  return sig;
}

template <class Base, class Opp>
typename Csig<Base, Opp>::SecretKey Csig<Base, Opp>::keygen(const PairingContext& ctx, std::size_t k, Rng& rng) {
  if (k == 0) throw MalformedInput("CSIG message length must be at least 1");
  return derive(ctx, CsigKeyExponents::random(k, rng));
}

template <class Base, class Opp>
typename Csig<Base, Opp>::SecretKey Csig<Base, Opp>::derive(const PairingContext& ctx, const CsigKeyExponents& e) {
  if (e.gammas.size() != e.deltas.size()) throw MalformedInput("CSIG exponent vectors differ in length");
  ctx.activate();
  const Base& base = ctx.generator<Base>();
  const Opp& opp = ctx.generator<Opp>();
  SecretKey sk;
  PublicKey& pk = sk.pk;
  pk.gr = base * e.gr_log;
  pk.hu = base * e.hu_log;
  pk.gz = pk.gr * e.gamma_z;
  pk.hz = pk.hu * e.delta_z;
  pk.a_pub = opp * e.alpha;
  pk.b_pub = opp * e.beta;
  for (std::size_t i = 0; i < e.gammas.size(); ++i) {
    pk.g.push_back(pk.gr * e.gammas[i]);
    pk.h.push_back(pk.hu * e.deltas[i]);
  }
  sk.alpha = e.alpha;
  sk.beta = e.beta;
  sk.gamma_z = e.gamma_z;
  sk.delta_z = e.delta_z;
  sk.gammas = e.gammas;
  sk.deltas = e.deltas;
  return sk;
}

template <class Base, class Opp>
typename Csig<Base, Opp>::Signature Csig<Base, Opp>::sign(const PairingContext& ctx, const SecretKey& sk,
                                                          std::span<const Opp> msg, Rng& rng) {
  return sign_with(ctx, sk, msg, CsigSignRandomness::random(rng));
}

template <class Base, class Opp>
typename Csig<Base, Opp>::Signature Csig<Base, Opp>::sign_with(const PairingContext& ctx, const SecretKey& sk,
                                                               std::span<const Opp> msg,
                                                               const CsigSignRandomness& x) {
  if (msg.size() != sk.gammas.size()) {
    throw MalformedInput("CSIG message has " + std::to_string(msg.size()) + " elements, key expects " +
                         std::to_string(sk.gammas.size()));
  }
  ctx.activate();
  const Opp& g = ctx.generator<Opp>();
  Signature sig;
  sig.z = g * x.zeta;
  sig.r = g * (sk.alpha - x.rho * x.tau - sk.gamma_z * x.zeta);
  sig.u = g * (sk.beta - x.phi * x.omega - sk.delta_z * x.zeta);
  for (std::size_t i = 0; i < msg.size(); ++i) {
    sig.r = sig.r - msg[i] * sk.gammas[i];
    sig.u = sig.u - msg[i] * sk.deltas[i];
  }
  sig.s = sk.pk.gr * x.rho;
  sig.t = g * x.tau;
  sig.v = sk.pk.hu * x.phi;
  sig.w = g * x.omega;
  return sig;
}

template <class Base, class Opp>
bool Csig<Base, Opp>::verify(const PairingContext& ctx, const PublicKey& pk, std::span<const Opp> msg,
                             const Signature& sig) {
  if (pk.g.size() != pk.h.size()) throw MalformedInput("CSIG key has mismatched base vectors");
  if (msg.size() != pk.k()) {
    throw MalformedInput("CSIG message has " + std::to_string(msg.size()) + " elements, key expects " +
                         std::to_string(pk.k()));
  }
  ctx.activate();
  // e(gz,z) e(gr,r) e(s,t) prod e(g_i,m_i) = e(gr, g^alpha)
  PairingProduct first;
  first.add(pk.gz, sig.z).add(pk.gr, sig.r).add(sig.s, sig.t).add(-pk.gr, pk.a_pub);
  // e(hz,z) e(hu,u) e(v,w) prod e(h_i,m_i) = e(hu, g^beta)
  PairingProduct second;
  second.add(pk.hz, sig.z).add(pk.hu, sig.u).add(sig.v, sig.w).add(-pk.hu, pk.b_pub);
  for (std::size_t i = 0; i < msg.size(); ++i) {
    first.add(pk.g[i], msg[i]);
    second.add(pk.h[i], msg[i]);
  }
  return first.evaluate().is_one() && second.evaluate().is_one();
}

template struct CsigPublicKey<G1Point, G2Point>;
template struct CsigPublicKey<G2Point, G1Point>;
template struct CsigSignature<G1Point, G2Point>;
template struct CsigSignature<G2Point, G1Point>;
template class Csig<G1Point, G2Point>;
template class Csig<G2Point, G1Point>;

}  // namespace spot
