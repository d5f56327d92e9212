#pragma once

// Structure-preserving constant-size signatures on vectors of group elements.
// Csig<G1Point, G2Point> signs vectors in G2 with keys in G1; the dual
// Csig<G2Point, G1Point> signs vectors in G1.

#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "spot/codec.hpp"
#include "spot/pairing.hpp"
#include "spot/rng.hpp"

namespace spot {

enum class Orientation { kSignsG2, kSignsG1 };

template <class Base, class Opp>
struct CsigPublicKey {
  Base gz, hz, gr, hu;
  Opp a_pub, b_pub;  // g^alpha, g^beta
  std::vector<Base> g, h;

  static constexpr Orientation kOrientation =
      std::is_same_v<Opp, G2Point> ? Orientation::kSignsG2 : Orientation::kSignsG1;

  std::size_t k() const { return g.size(); }
  Bytes to_bytes() const;
  static CsigPublicKey from_bytes(ByteView bytes);
  ElementCount elements() const { return count_of<Base>(4 + 2 * k()) + count_of<Opp>(2); }
  friend bool operator==(const CsigPublicKey&, const CsigPublicKey&) = default;
};

// Discrete logs that determine a key: g_r = base^gr_log, h_u = base^hu_log,
// g_z = g_r^gamma_z, g_i = g_r^gammas[i], and so on.
struct CsigKeyExponents {
  Scalar gr_log, hu_log;
  Scalar alpha, beta, gamma_z, delta_z;
  std::vector<Scalar> gammas, deltas;

  static CsigKeyExponents random(std::size_t k, Rng& rng);
};

template <class Base, class Opp>
struct CsigSecretKey {
  CsigPublicKey<Base, Opp> pk;
  Scalar alpha, beta, gamma_z, delta_z;
  std::vector<Scalar> gammas, deltas;
};

template <class Base, class Opp>
struct CsigSignature {
  Opp z, r, t, u, w;
  Base s, v;

  Bytes to_bytes() const;
  static CsigSignature from_bytes(ByteView bytes);
  static std::size_t encoded_size() { return 5 * Opp::encoded_size() + 2 * Base::encoded_size(); }
  static ElementCount elements() { return count_of<Opp>(5) + count_of<Base>(2); }
  friend bool operator==(const CsigSignature&, const CsigSignature&) = default;
};

// zeta, rho, tau, phi, omega
struct CsigSignRandomness {
  Scalar zeta, rho, tau, phi, omega;
  static CsigSignRandomness random(Rng& rng);
};

template <class Base, class Opp>
class Csig {
 public:
  using PublicKey = CsigPublicKey<Base, Opp>;
  using SecretKey = CsigSecretKey<Base, Opp>;
  using Signature = CsigSignature<Base, Opp>;

  // k >= 1.
  static SecretKey keygen(const PairingContext& ctx, std::size_t k, Rng& rng);
  // Also accepts k = 0 (used by the mixed-group scheme).
  static SecretKey derive(const PairingContext& ctx, const CsigKeyExponents& e);

  static Signature sign(const PairingContext& ctx, const SecretKey& sk, std::span<const Opp> msg, Rng& rng);
  static Signature sign_with(const PairingContext& ctx, const SecretKey& sk, std::span<const Opp> msg,
                             const CsigSignRandomness& rnd);

  // Throws MalformedInput on a length mismatch; false on a bad signature.
  static bool verify(const PairingContext& ctx, const PublicKey& pk, std::span<const Opp> msg,
                     const Signature& sig);
};

using CsigSignsG2 = Csig<G1Point, G2Point>;
using CsigSignsG1 = Csig<G2Point, G1Point>;

}  // namespace spot
