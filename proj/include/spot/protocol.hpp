#pragma once

// Stateless SPOT algorithms and the values exchanged between entities.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spot/gsig.hpp"

namespace spot {

struct ProtocolConfig {
  std::int64_t delta_days = 14;
  std::int64_t match_window_seconds = 60;
  // duration_weight(d) = min(ceil(d / weight_unit_seconds), weight_cap)
  std::int64_t weight_unit_seconds = 15 * 60;
  std::int64_t weight_cap = 4;
  double risk_threshold = 1.0;

  std::int64_t delta_seconds() const { return delta_days * 86400; }
  std::int64_t duration_weight(std::int64_t duration_seconds) const;
};

// 128-bit ephemeral identifier, compared as a big-endian integer.
struct Ebid {
  std::array<std::uint8_t, 16> bytes{};

  static Ebid random(Rng& rng);  // never zero
  static Ebid from_bytes(ByteView b);
  bool is_zero() const;
  Scalar value() const;
  std::string hex() const;
  friend auto operator<=>(const Ebid&, const Ebid&) = default;
};

struct ServerKeys {
  Scalar y1, y2;
  G2Point big_y1, big_y2;
};

struct ServerPublicKey {
  G2Point y1, y2;
  Bytes to_bytes() const;
  static ServerPublicKey from_bytes(ByteView b);
  static ElementCount elements() { return {0, 2, 0, 0}; }
  friend bool operator==(const ServerPublicKey&, const ServerPublicKey&) = default;
};

struct HaKeys {
  Scalar x;
  G2Point pk;  // g2^x
};

HaKeys ha_keygen(const PairingContext& ctx, Rng& rng);
ServerKeys s_keygen(const PairingContext& ctx, Rng& rng);
inline ServerPublicKey public_key(const ServerKeys& k) { return {k.big_y1, k.big_y2}; }

// CCM = H(canonical bytes of d_a * d_b mod n). Throws ProtocolError on a zero
// EBID.
Scalar set_ccm(const PairingContext& ctx, const Ebid& d_a, const Ebid& d_b);
// Same map on arbitrary nonzero factors.
Scalar set_ccm(const PairingContext& ctx, const Scalar& d_a, const Scalar& d_b);

struct ProxyRoster {
  std::vector<std::string> primary;
  std::vector<std::string> secondary;
};

// The user with the larger EBID takes the head of the primary subset, the
// other the head of the secondary subset. Ties and short rosters throw.
std::pair<std::string, std::string> choose_proxies(const Ebid& d_a, const Ebid& d_b, const ProxyRoster& roster);

struct PartialSignature {
  Scalar ps;        // ccm * y1 * r_s + y2
  Scalar ps_prime;  // ccm * r_s
};

PartialSignature s_psign(const ServerKeys& keys, const Scalar& ccm, Rng& rng);

struct PSignOutput {
  G2Point m;  // ID_U^PS
  MessageSignature sigma_m;  // stays with the proxy; only a witness
  GroupSignature pi;

  // What reaches the user: M and the proof. `table` counts M with the
  // per-equation proof pairs; `commitments` the shared commitments.
  ElementCount table_elements() const;
  ElementCount commitment_elements() const { return pi.proof.commitment_elements(); }
};

PSignOutput p_sign(const PairingContext& ctx, const GroupVerifKey& vk, const ProxyCredential& cred,
                   const G2Point& id_u, const Scalar& ps, Rng& rng, Execution mode = Execution::kSequential);

bool sig_verify(const PairingContext& ctx, const GroupVerifKey& vk, const G2Point& m, const GroupSignature& pi,
                GsigVerifyOptions opt = {});

// M == Y1^(t_u * PS') * Y2^(t_u)
bool ccm_verify(const PairingContext& ctx, const G2Point& m, const Scalar& ps_prime, const ServerPublicKey& pk_s,
                const Scalar& t_u);

struct ContactEntry {
  Scalar ccm;
  G2Point m;
  GroupSignature pi;
  std::int64_t time = 0;  // simulated seconds; the date is time / 86400
  std::int64_t duration = 0;

  std::int64_t day() const { return time / 86400; }
  friend bool operator==(const ContactEntry&, const ContactEntry&) = default;
};

struct VerifiedSet {
  std::vector<Scalar> ccms;  // sorted, unique
  G1Point signature;

  // Canonical message that is signed.
  Bytes signed_bytes() const;
  bool contains(const Scalar& ccm) const;
  friend bool operator==(const VerifiedSet&, const VerifiedSet&) = default;
};

VerifiedSet ha_publish(const PairingContext& ctx, const HaKeys& ha, std::vector<Scalar> ccms);
// e(sig, g2) == e(H1(enc), pk_HA)
bool verify_published(const PairingContext& ctx, const G2Point& pk_ha, const VerifiedSet& vs);

struct RiskResult {
  std::int64_t score = 0;
  std::size_t matches = 0;
  bool exposed = false;
};

// Throws ProtocolError if the set's signature is invalid.
RiskResult risk_score(const PairingContext& ctx, const G2Point& pk_ha, const std::vector<ContactEntry>& contacts,
                      const VerifiedSet& vs, const ProtocolConfig& cfg);

}  // namespace spot
