#include "spot/protocol.hpp"

#include <algorithm>

#include "spot/errors.hpp"

namespace spot {

std::int64_t ProtocolConfig::duration_weight(std::int64_t d) const {
  if (d <= 0) return 0;
  const std::int64_t w = (d + weight_unit_seconds - 1) / weight_unit_seconds;
  return std::min(w, weight_cap);
}

Ebid Ebid::random(Rng& rng) {
  Ebid e;
  do {
    rng.fill(e.bytes);
  } while (e.is_zero());
  return e;
}

Ebid Ebid::from_bytes(ByteView b) {
  if (b.size() != 16) throw MalformedInput("EBID must be 16 bytes");
  Ebid e;
  std::copy(b.begin(), b.end(), e.bytes.begin());
  return e;
}

bool Ebid::is_zero() const {
  return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

// 128 bits is below every supported n, so the value is never reduced.
Scalar Ebid::value() const { return Scalar::reduce(bytes); }

std::string Ebid::hex() const { return to_hex(bytes); }

Bytes ServerPublicKey::to_bytes() const {
  Writer w;
  w.put(y1).put(y2);
  return w.take();
}

ServerPublicKey ServerPublicKey::from_bytes(ByteView b) {
  Reader r(b);
  ServerPublicKey pk{r.get<G2Point>(), r.get<G2Point>()};
  r.finish();
  return pk;
}

HaKeys ha_keygen(const PairingContext& ctx, Rng& rng) {
  ctx.activate();
  HaKeys k;
  k.x = rng.next_nonzero_scalar();
  k.pk = ctx.g2() * k.x;
  return k;
}

ServerKeys s_keygen(const PairingContext& ctx, Rng& rng) {
  ctx.activate();
  ServerKeys k;
  k.y1 = rng.next_nonzero_scalar();
  k.y2 = rng.next_nonzero_scalar();
  k.big_y1 = ctx.g2() * k.y1;
  k.big_y2 = ctx.g2() * k.y2;
  return k;
}

Scalar set_ccm(const PairingContext& ctx, const Scalar& d_a, const Scalar& d_b) {
  if (d_a.is_zero() || d_b.is_zero()) throw ProtocolError("EBID must be nonzero");
  ctx.activate();
  return ctx.hash_to_scalar((d_a * d_b).to_bytes());
}

Scalar set_ccm(const PairingContext& ctx, const Ebid& d_a, const Ebid& d_b) {
  if (d_a.is_zero() || d_b.is_zero()) throw ProtocolError("EBID must be nonzero");
  ctx.activate();
  return set_ccm(ctx, d_a.value(), d_b.value());
}

std::pair<std::string, std::string> choose_proxies(const Ebid& d_a, const Ebid& d_b, const ProxyRoster& roster) {
  if (roster.primary.empty() || roster.secondary.empty()) {
    throw ProtocolError("proxy roster needs a primary and a secondary proxy");
  }
  if (roster.primary.front() == roster.secondary.front()) throw ProtocolError("proxy subsets must be distinct");
  if (d_a == d_b) throw ProtocolError("EBID tie; contact dropped for this epoch");
  if (d_a > d_b) return {roster.primary.front(), roster.secondary.front()};
  return {roster.secondary.front(), roster.primary.front()};
}

PartialSignature s_psign(const ServerKeys& keys, const Scalar& ccm, Rng& rng) {
  const Scalar r_s = rng.next_nonzero_scalar();
  return {ccm * keys.y1 * r_s + keys.y2, ccm * r_s};
}

PSignOutput p_sign(const PairingContext& ctx, const GroupVerifKey& vk, const ProxyCredential& cred,
                   const G2Point& id_u, const Scalar& ps, Rng& rng, Execution mode) {
  ctx.activate();
  PSignOutput out;
  out.m = id_u * ps;
  GsigSignature g = gsig_sign(ctx, vk, cred, out.m, rng, mode);
  out.sigma_m = g.sigma_m;
  out.pi = std::move(g.pi);
  return out;
}

ElementCount PSignOutput::table_elements() const { return count_of<G2Point>(1) + pi.proof.proof_elements(); }

bool sig_verify(const PairingContext& ctx, const GroupVerifKey& vk, const G2Point& m, const GroupSignature& pi,
                GsigVerifyOptions opt) {
  return gsig_verify(ctx, vk, m, pi, opt);
}

bool ccm_verify(const PairingContext& ctx, const G2Point& m, const Scalar& ps_prime, const ServerPublicKey& pk_s,
                const Scalar& t_u) {
  ctx.activate();
  return m == pk_s.y1 * (t_u * ps_prime) + pk_s.y2 * t_u;
}

Bytes VerifiedSet::signed_bytes() const {
  Writer w;
  w.raw(as_bytes("SPOT-SCCM/v1")).u32(static_cast<std::uint32_t>(ccms.size())).put_all(ccms);
  return w.take();
}

bool VerifiedSet::contains(const Scalar& ccm) const { return std::binary_search(ccms.begin(), ccms.end(), ccm); }

VerifiedSet ha_publish(const PairingContext& ctx, const HaKeys& ha, std::vector<Scalar> ccms) {
  ctx.activate();
  std::sort(ccms.begin(), ccms.end());
  ccms.erase(std::unique(ccms.begin(), ccms.end()), ccms.end());
  VerifiedSet vs;
  vs.ccms = std::move(ccms);
  vs.signature = ctx.hash_to_g1(vs.signed_bytes()) * ha.x;
  return vs;
}

bool verify_published(const PairingContext& ctx, const G2Point& pk_ha, const VerifiedSet& vs) {
  ctx.activate();
  if (!std::is_sorted(vs.ccms.begin(), vs.ccms.end()) ||
      std::adjacent_find(vs.ccms.begin(), vs.ccms.end()) != vs.ccms.end()) {
    return false;
  }
  PairingProduct pp;
  pp.add(vs.signature, ctx.g2()).add(-ctx.hash_to_g1(vs.signed_bytes()), pk_ha);
  return pp.evaluate().is_one();
}

RiskResult risk_score(const PairingContext& ctx, const G2Point& pk_ha, const std::vector<ContactEntry>& contacts,
                      const VerifiedSet& vs, const ProtocolConfig& cfg) {
  if (!verify_published(ctx, pk_ha, vs)) throw ProtocolError("published set signature is invalid");
  RiskResult r;
  for (const auto& c : contacts) {
    if (vs.contains(c.ccm)) {
      ++r.matches;
      r.score += cfg.duration_weight(c.duration);
    }
  }
  r.exposed = static_cast<double>(r.score) >= cfg.risk_threshold;
  return r;
}

}  // namespace spot
