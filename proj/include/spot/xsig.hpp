#pragma once

// Signatures on mixed messages (G1^k1, G2^k2): a G2-signing instance signs the
// G2 part, and its s component is appended to the G1 part, which the
// G1-signing instance signs.

#include "spot/csig.hpp"

namespace spot {

struct XsigPublicKey {
  CsigPublicKey<G2Point, G1Point> pk1;  // signs G1^(k1+1)
  CsigPublicKey<G1Point, G2Point> pk2;  // signs G2^k2

  std::size_t k1() const { return pk1.k() - 1; }
  std::size_t k2() const { return pk2.k(); }
  Bytes to_bytes() const;
  static XsigPublicKey from_bytes(ByteView bytes);
  ElementCount elements() const { return pk1.elements() + pk2.elements(); }
  friend bool operator==(const XsigPublicKey&, const XsigPublicKey&) = default;
};

struct XsigSecretKey {
  CsigSecretKey<G2Point, G1Point> sk1;
  CsigSecretKey<G1Point, G2Point> sk2;
  XsigPublicKey pk() const { return {sk1.pk, sk2.pk}; }
};

struct XsigSignature {
  CsigSignature<G2Point, G1Point> sigma1;
  CsigSignature<G1Point, G2Point> sigma2;

  // The element chained into the G1 message.
  const G1Point& chained() const { return sigma2.s; }
  Bytes to_bytes() const;
  static XsigSignature from_bytes(ByteView bytes);
  static ElementCount elements() {
    return CsigSignature<G2Point, G1Point>::elements() + CsigSignature<G1Point, G2Point>::elements();
  }
  friend bool operator==(const XsigSignature&, const XsigSignature&) = default;
};

// k1 + k2 >= 1.
XsigSecretKey xsig_keygen(const PairingContext& ctx, std::size_t k1, std::size_t k2, Rng& rng);
XsigSignature xsig_sign(const PairingContext& ctx, const XsigSecretKey& sk, std::span<const G1Point> m1,
                        std::span<const G2Point> m2, Rng& rng);
bool xsig_verify(const PairingContext& ctx, const XsigPublicKey& pk, std::span<const G1Point> m1,
                 std::span<const G2Point> m2, const XsigSignature& sig);

}  // namespace spot
