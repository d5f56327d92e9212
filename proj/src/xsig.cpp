#include "spot/xsig.hpp"

#include "spot/errors.hpp"

namespace spot {

namespace {

constexpr std::string_view kPkMagic = "XSPK";
constexpr std::string_view kSigMagic = "XSSG";

std::vector<G1Point> with_chained(std::span<const G1Point> m1, const G1Point& s) {
  std::vector<G1Point> out(m1.begin(), m1.end());
  out.push_back(s);
  return out;
}

}  // namespace

Bytes XsigPublicKey::to_bytes() const {
  Writer w;
  w.raw(as_bytes(kPkMagic));
  const Bytes a = pk1.to_bytes(), b = pk2.to_bytes();
  w.u32(static_cast<std::uint32_t>(a.size())).raw(a);
  w.u32(static_cast<std::uint32_t>(b.size())).raw(b);
  return w.take();
}

XsigPublicKey XsigPublicKey::from_bytes(ByteView bytes) {
  Reader r(bytes);
  r.expect(kPkMagic);
  XsigPublicKey pk;
  pk.pk1 = CsigPublicKey<G2Point, G1Point>::from_bytes(r.raw(r.u32()));
  pk.pk2 = CsigPublicKey<G1Point, G2Point>::from_bytes(r.raw(r.u32()));
  r.finish();
  if (pk.pk1.k() == 0) throw MalformedInput("XSIG key has no chained slot");
  return pk;
}

Bytes XsigSignature::to_bytes() const {
  Writer w;
  w.raw(as_bytes(kSigMagic)).u8(1).raw(sigma1.to_bytes()).u8(2).raw(sigma2.to_bytes());
  return w.take();
}

XsigSignature XsigSignature::from_bytes(ByteView bytes) {
  Reader r(bytes);
  r.expect(kSigMagic);
  XsigSignature sig;
  if (r.u8() != 1) throw MalformedInput("XSIG signature: bad orientation tag");
  sig.sigma1 = CsigSignature<G2Point, G1Point>::from_bytes(r.raw(CsigSignature<G2Point, G1Point>::encoded_size()));
  if (r.u8() != 2) throw MalformedInput("XSIG signature: bad orientation tag");
  sig.sigma2 = CsigSignature<G1Point, G2Point>::from_bytes(r.raw(CsigSignature<G1Point, G2Point>::encoded_size()));
  r.finish();
  return sig;
}

XsigSecretKey xsig_keygen(const PairingContext& ctx, std::size_t k1, std::size_t k2, Rng& rng) {
  if (k1 + k2 == 0) throw MalformedInput("XSIG needs at least one message element");
  XsigSecretKey sk;
  sk.sk1 = CsigSignsG1::derive(ctx, CsigKeyExponents::random(k1 + 1, rng));
  sk.sk2 = CsigSignsG2::derive(ctx, CsigKeyExponents::random(k2, rng));
  return sk;
}

XsigSignature xsig_sign(const PairingContext& ctx, const XsigSecretKey& sk, std::span<const G1Point> m1,
                        std::span<const G2Point> m2, Rng& rng) {
  if (m1.size() + 1 != sk.sk1.pk.k() || m2.size() != sk.sk2.pk.k()) {
    throw MalformedInput("XSIG message shape does not match the key");
  }
  XsigSignature sig;
  sig.sigma2 = CsigSignsG2::sign(ctx, sk.sk2, m2, rng);
  sig.sigma1 = CsigSignsG1::sign(ctx, sk.sk1, with_chained(m1, sig.sigma2.s), rng);
  return sig;
}

bool xsig_verify(const PairingContext& ctx, const XsigPublicKey& pk, std::span<const G1Point> m1,
                 std::span<const G2Point> m2, const XsigSignature& sig) {
  if (pk.pk1.k() == 0 || m1.size() != pk.k1() || m2.size() != pk.k2()) {
    throw MalformedInput("XSIG message shape does not match the key");
  }
  return CsigSignsG2::verify(ctx, pk.pk2, m2, sig.sigma2) &&
         CsigSignsG1::verify(ctx, pk.pk1, with_chained(m1, sig.sigma2.s), sig.sigma1);
}

}  // namespace spot
