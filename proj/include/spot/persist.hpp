#pragma once

// JSON forms of protocol values. Group elements and scalars are hex strings
// of their canonical encodings. Entity snapshots travel inside a versioned
// envelope.

#include <string_view>

#include "spot/entities.hpp"

namespace spot {

inline constexpr int kStateVersion = 1;

Json to_json(const ProtocolConfig& c);
ProtocolConfig config_from_json(const Json& j);  // missing keys keep defaults

Json to_json(const ContactEntry& e);
ContactEntry contact_from_json(const Json& j);

Json to_json(const VerifiedSet& vs);
VerifiedSet verified_set_from_json(const Json& j);

// {"format": "spot-state", "version": 1, "kind": ..., "security_level": ..., "body": ...}
Json envelope(std::string_view kind, SecurityLevel level, Json body);
// Checks format, version, kind and level; returns the body.
Json open_envelope(const Json& env, std::string_view kind, SecurityLevel level);
SecurityLevel envelope_level(const Json& env);

}  // namespace spot

namespace spot {

// Secret material. Decoding rebuilds nothing; it checks that every public
// component matches the stored exponents.
Json to_json(const XsigSecretKey& sk);
XsigSecretKey xsig_secret_from_json(const PairingContext& ctx, const Json& j);

Json to_json(const GroupManagerKey& gm);
GroupManagerKey group_manager_from_json(const PairingContext& ctx, const Json& j);

Json to_json(const ProxyCredential& cred);
ProxyCredential credential_from_json(const PairingContext& ctx, const Json& j);

}  // namespace spot
