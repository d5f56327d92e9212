#pragma once

// Group signatures for proxies. The manager certifies each proxy key with a
// mixed-group signature; a proxy signs a G2 message with its own key and
// proves in zero knowledge of which key that both its signature and its
// certificate verify.

#include <array>
#include <memory>

#include "spot/csig.hpp"
#include "spot/niwi.hpp"
#include "spot/xsig.hpp"

namespace spot {

using ProxySecretKey = CsigSecretKey<G1Point, G2Point>;
using ProxyPublicKey = CsigPublicKey<G1Point, G2Point>;
using MessageSignature = CsigSignature<G1Point, G2Point>;

inline constexpr std::size_t kCertG1Slots = 6;  // gz, hz, gr, hu, g_gamma, h_delta
inline constexpr std::size_t kCertG2Slots = 2;  // g2^alpha, g2^beta

struct GroupVerifKey {
  XsigPublicKey pk_g;
  NiwiCrs crs;

  Bytes to_bytes() const;
  static GroupVerifKey from_bytes(ByteView bytes);
  ElementCount elements() const { return pk_g.elements() + ElementCount{1, 1, 0, 0}; }
  friend bool operator==(const GroupVerifKey&, const GroupVerifKey&) = default;
};

struct GroupManagerKey {
  XsigSecretKey sk_g;
  GroupVerifKey vk;
};

GroupManagerKey gsig_setup(const PairingContext& ctx, Rng& rng);

// pk_p as the certified mixed message: (gz, hz, gr, hu, g_gamma, h_delta) and
// (g2^alpha, g2^beta).
std::vector<G1Point> proxy_key_g1_part(const ProxyPublicKey& pk);
std::vector<G2Point> proxy_key_g2_part(const ProxyPublicKey& pk);

struct ProxyCredential {
  ProxySecretKey sk_p;
  XsigSignature sigma_p;

  const ProxyPublicKey& pk() const { return sk_p.pk; }
};

// Proxy side of the join: a one-element key.
ProxySecretKey proxy_keygen(const PairingContext& ctx, Rng& rng);
// Manager side of the join.
XsigSignature gm_certify(const PairingContext& ctx, const XsigSecretKey& sk_g, const ProxyPublicKey& pk_p, Rng& rng);
ProxyCredential gsig_join(const PairingContext& ctx, const GroupManagerKey& gm, Rng& rng);
bool credential_valid(const PairingContext& ctx, const GroupVerifKey& vk, const ProxyCredential& cred);

// Six equations over shared commitments, in this order: the two equations of
// the proxy's signature on m, then the two of the certificate's G1 half and
// the two of its G2 half.
struct GroupSignature {
  NiwiProof proof;

  Bytes to_bytes() const { return proof.to_bytes(); }
  static GroupSignature from_bytes(ByteView bytes);
  friend bool operator==(const GroupSignature&, const GroupSignature&) = default;
};

inline constexpr std::size_t kGsigEquations = 6;
inline constexpr std::size_t kGsigG1Variables = 15;
inline constexpr std::size_t kGsigG2Variables = 14;

// Verifier-side precomputation for one group key: Miller-loop lines of V and
// of every G2 constant of the key, plus the four public targets.
class PreparedGroupKey {
 public:
  PreparedGroupKey(const PairingContext& ctx, const GroupVerifKey& vk);
  const GroupVerifKey& vk() const { return vk_; }
  const PreparedCrs& crs() const { return crs_; }
  const PreparedG2& pk1_g(std::size_t j) const { return g_[j]; }
  const PreparedG2& pk1_h(std::size_t j) const { return h_[j]; }
  const PreparedG2& pk1_gz() const { return gz_; }
  const PreparedG2& pk1_hz() const { return hz_; }
  const PreparedG2& pk1_gr() const { return gr_; }
  const PreparedG2& pk1_hu() const { return hu_; }
  const std::array<GtElement, 4>& targets() const { return targets_; }

 private:
  GroupVerifKey vk_;
  PreparedCrs crs_;
  PreparedG2 gz_, hz_, gr_, hu_;
  std::vector<PreparedG2> g_, h_;
  std::array<GtElement, 4> targets_;
};

// The public statement for message m. With `prepared`, constants and targets
// come from the cache.
NiwiStatement gsig_statement(const PairingContext& ctx, const GroupVerifKey& vk, const G2Point& m,
                             const PreparedGroupKey* prepared = nullptr);
NiwiWitness gsig_witness(const ProxyCredential& cred, const MessageSignature& sigma_m);

struct GsigSignature {
  MessageSignature sigma_m;
  GroupSignature pi;
};

// Throws UnsatisfiedWitness when the credential is not certified under vk.
GsigSignature gsig_sign(const PairingContext& ctx, const GroupVerifKey& vk, const ProxyCredential& cred,
                        const G2Point& m, Rng& rng, Execution mode = Execution::kSequential);

struct GsigVerifyOptions {
  Execution mode = Execution::kSequential;
  const PreparedGroupKey* prepared = nullptr;
};

bool gsig_verify(const PairingContext& ctx, const GroupVerifKey& vk, const G2Point& m, const GroupSignature& pi,
                 GsigVerifyOptions opt = {});

}  // namespace spot
