#include "spot/gsig.hpp"

#include "spot/errors.hpp"

namespace spot {

namespace {

constexpr std::string_view kVkMagic = "GSVK";

// Variable names of the shared commitment table. "p." is the proxy key,
// "m." its signature on the message, "c1."/"c2." the two certificate halves.
constexpr std::array<std::string_view, kGsigG1Variables> kXNames = {
    "p.gz", "p.hz", "p.gr", "p.hu", "p.gg", "p.hd", "m.s", "m.v",
    "c1.z", "c1.r", "c1.t", "c1.u", "c1.w", "c2.s", "c2.v"};
constexpr std::array<std::string_view, kGsigG2Variables> kYNames = {
    "p.a", "p.b", "m.z", "m.r", "m.t", "m.u", "m.w", "c1.s", "c1.v", "c2.z", "c2.r", "c2.t", "c2.u", "c2.w"};

enum X : std::size_t { P_GZ, P_HZ, P_GR, P_HU, P_GG, P_HD, M_S, M_V, C1_Z, C1_R, C1_T, C1_U, C1_W, C2_S, C2_V };
enum Y : std::size_t { P_A, P_B, M_Z, M_R, M_T, M_U, M_W, C1_S, C1_V, C2_Z, C2_R, C2_T, C2_U, C2_W };

// Certificate message slots in signing order, then the chained element.
constexpr std::array<std::size_t, kCertG1Slots + 1> kCertSlots = {P_GZ, P_HZ, P_GR, P_HU, P_GG, P_HD, C2_S};

void check_group_key_shape(const GroupVerifKey& vk) {
  if (vk.pk_g.pk1.k() != kCertG1Slots + 1 || vk.pk_g.pk2.k() != kCertG2Slots) {
    throw MalformedInput("group key does not have the (6, 2) certificate shape");
  }
}

}  // namespace

Bytes GroupVerifKey::to_bytes() const {
  Writer w;
  const Bytes a = pk_g.to_bytes(), b = crs.to_bytes();
  w.raw(as_bytes(kVkMagic)).u32(static_cast<std::uint32_t>(a.size())).raw(a).raw(b);
  return w.take();
}

GroupVerifKey GroupVerifKey::from_bytes(ByteView bytes) {
  Reader r(bytes);
  r.expect(kVkMagic);
  GroupVerifKey vk;
  vk.pk_g = XsigPublicKey::from_bytes(r.raw(r.u32()));
  vk.crs = NiwiCrs::from_bytes(r.raw(4 + G1Point::encoded_size() + G2Point::encoded_size()));
  r.finish();
  check_group_key_shape(vk);
  return vk;
}

GroupManagerKey gsig_setup(const PairingContext& ctx, Rng& rng) {
  GroupManagerKey gm;
  gm.sk_g = xsig_keygen(ctx, kCertG1Slots, kCertG2Slots, rng);
  gm.vk.pk_g = gm.sk_g.pk();
  gm.vk.crs = niwi_crs_gen(ctx, rng);
  return gm;
}

std::vector<G1Point> proxy_key_g1_part(const ProxyPublicKey& pk) {
  if (pk.k() != 1) throw MalformedInput("proxy key must sign one element");
  return {pk.gz, pk.hz, pk.gr, pk.hu, pk.g[0], pk.h[0]};
}

std::vector<G2Point> proxy_key_g2_part(const ProxyPublicKey& pk) { return {pk.a_pub, pk.b_pub}; }

ProxySecretKey proxy_keygen(const PairingContext& ctx, Rng& rng) { return CsigSignsG2::keygen(ctx, 1, rng); }

XsigSignature gm_certify(const PairingContext& ctx, const XsigSecretKey& sk_g, const ProxyPublicKey& pk_p,
                         Rng& rng) {
  return xsig_sign(ctx, sk_g, proxy_key_g1_part(pk_p), proxy_key_g2_part(pk_p), rng);
}

ProxyCredential gsig_join(const PairingContext& ctx, const GroupManagerKey& gm, Rng& rng) {
  ProxyCredential cred;
  cred.sk_p = proxy_keygen(ctx, rng);
  cred.sigma_p = gm_certify(ctx, gm.sk_g, cred.pk(), rng);
  return cred;
}

bool credential_valid(const PairingContext& ctx, const GroupVerifKey& vk, const ProxyCredential& cred) {
  return xsig_verify(ctx, vk.pk_g, proxy_key_g1_part(cred.pk()), proxy_key_g2_part(cred.pk()), cred.sigma_p);
}

GroupSignature GroupSignature::from_bytes(ByteView bytes) {
  GroupSignature g{NiwiProof::from_bytes(bytes)};
  if (g.proof.c.size() != kGsigG1Variables || g.proof.d.size() != kGsigG2Variables ||
      g.proof.eq.size() != kGsigEquations) {
    throw MalformedInput("group signature has the wrong shape");
  }
  return g;
}

PreparedGroupKey::PreparedGroupKey(const PairingContext& ctx, const GroupVerifKey& vk)
    : vk_(vk), crs_((ctx.activate(), vk.crs)) {
  check_group_key_shape(vk);
  const auto& pk1 = vk.pk_g.pk1;
  const auto& pk2 = vk.pk_g.pk2;
  gz_ = PreparedG2(pk1.gz);
  hz_ = PreparedG2(pk1.hz);
  gr_ = PreparedG2(pk1.gr);
  hu_ = PreparedG2(pk1.hu);
  for (std::size_t j = 0; j < pk1.k(); ++j) {
    g_.emplace_back(pk1.g[j]);
    h_.emplace_back(pk1.h[j]);
  }
  targets_ = {ctx.pair(pk1.a_pub, pk1.gr), ctx.pair(pk1.b_pub, pk1.hu), ctx.pair(pk2.gr, pk2.a_pub),
              ctx.pair(pk2.hu, pk2.b_pub)};
}

NiwiStatement gsig_statement(const PairingContext& ctx, const GroupVerifKey& vk, const G2Point& m,
                             const PreparedGroupKey* prepared) {
  check_group_key_shape(vk);
  if (prepared && !(prepared->vk() == vk)) throw MalformedInput("prepared key does not match the group key");
  ctx.activate();
  NiwiStatement st;
  for (auto n : kXNames) st.add_x(std::string(n));
  for (auto n : kYNames) st.add_y(std::string(n));
  const Scalar one = Scalar::one();
  const Scalar minus_one = -one;
  const auto& pk1 = vk.pk_g.pk1;
  const auto& pk2 = vk.pk_g.pk2;

  // Proxy signature on m, both equations rearranged to a unit target:
  // e(gz,z) e(gr,r) e(s,t) e(g_gamma,m) e(gr,g2^alpha)^-1 = 1
  PairingProductEquation m1;
  m1.gamma = {{P_GZ, M_Z, one}, {P_GR, M_R, one}, {M_S, M_T, one}, {P_GR, P_A, minus_one}};
  m1.b = {{P_GG, m}};
  PairingProductEquation m2;
  m2.gamma = {{P_HZ, M_Z, one}, {P_HU, M_U, one}, {M_V, M_W, one}, {P_HU, P_B, minus_one}};
  m2.b = {{P_HD, m}};

  // Certificate, G1 half: e(z1,g2z) e(r1,g2r) e(t1,s1) prod e(m_j,g2j) = e(g1^alpha2, g2r)
  PairingProductEquation p1;
  p1.b = {{C1_Z, pk1.gz, prepared ? &prepared->pk1_gz() : nullptr},
          {C1_R, pk1.gr, prepared ? &prepared->pk1_gr() : nullptr}};
  p1.gamma = {{C1_T, C1_S, one}};
  PairingProductEquation p2;
  p2.b = {{C1_Z, pk1.hz, prepared ? &prepared->pk1_hz() : nullptr},
          {C1_U, pk1.hu, prepared ? &prepared->pk1_hu() : nullptr}};
  p2.gamma = {{C1_W, C1_V, one}};
  for (std::size_t j = 0; j < kCertSlots.size(); ++j) {
    p1.b.push_back({kCertSlots[j], pk1.g[j], prepared ? &prepared->pk1_g(j) : nullptr});
    p2.b.push_back({kCertSlots[j], pk1.h[j], prepared ? &prepared->pk1_h(j) : nullptr});
  }

  // Certificate, G2 half: e(g1z,z2) e(g1r,r2) e(s2,t2) e(g11,a) e(g12,b) = e(g1r, g2^alpha1)
  PairingProductEquation p3;
  p3.a = {{pk2.gz, C2_Z}, {pk2.gr, C2_R}, {pk2.g[0], P_A}, {pk2.g[1], P_B}};
  p3.gamma = {{C2_S, C2_T, one}};
  PairingProductEquation p4;
  p4.a = {{pk2.hz, C2_Z}, {pk2.hu, C2_U}, {pk2.h[0], P_A}, {pk2.h[1], P_B}};
  p4.gamma = {{C2_V, C2_W, one}};

  if (prepared) {
    const auto& t = prepared->targets();
    p1.target = t[0];
    p2.target = t[1];
    p3.target = t[2];
    p4.target = t[3];
  } else {
    p1.target = ctx.pair(pk1.a_pub, pk1.gr);
    p2.target = ctx.pair(pk1.b_pub, pk1.hu);
    p3.target = ctx.pair(pk2.gr, pk2.a_pub);
    p4.target = ctx.pair(pk2.hu, pk2.b_pub);
  }
  st.equations = {m1, m2, p1, p2, p3, p4};
  return st;
}

NiwiWitness gsig_witness(const ProxyCredential& cred, const MessageSignature& sm) {
  const auto& pk = cred.pk();
  const auto& s1 = cred.sigma_p.sigma1;
  const auto& s2 = cred.sigma_p.sigma2;
  NiwiWitness w;
  w.x = {pk.gz, pk.hz, pk.gr, pk.hu, pk.g.at(0), pk.h.at(0), sm.s, sm.v, s1.z, s1.r, s1.t, s1.u, s1.w, s2.s, s2.v};
  w.y = {pk.a_pub, pk.b_pub, sm.z, sm.r, sm.t, sm.u, sm.w, s1.s, s1.v, s2.z, s2.r, s2.t, s2.u, s2.w};
  return w;
}

GsigSignature gsig_sign(const PairingContext& ctx, const GroupVerifKey& vk, const ProxyCredential& cred,
                        const G2Point& m, Rng& rng, Execution mode) {
  GsigSignature out;
  const std::array<G2Point, 1> msg = {m};
  out.sigma_m = CsigSignsG2::sign(ctx, cred.sk_p, msg, rng);
  const NiwiStatement st = gsig_statement(ctx, vk, m);
  out.pi.proof = niwi_prove(ctx, vk.crs, st, gsig_witness(cred, out.sigma_m), rng, mode);
  return out;
}

bool gsig_verify(const PairingContext& ctx, const GroupVerifKey& vk, const G2Point& m, const GroupSignature& pi,
                 GsigVerifyOptions opt) {
  const NiwiStatement st = gsig_statement(ctx, vk, m, opt.prepared);
  return niwi_verify(ctx, vk.crs, st, pi.proof, {opt.mode, opt.prepared ? &opt.prepared->crs() : nullptr});
}

}  // namespace spot
