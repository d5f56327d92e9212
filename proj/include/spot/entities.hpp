#pragma once

// The four protocol parties as single-writer state machines.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spot/protocol.hpp"

namespace spot {

using Json = nlohmann::json;

class HealthAuthority;

// Passkey for the server's PS' lookup. Only the health authority can mint one.
class HaAccess {
  friend class HealthAuthority;
  HaAccess() = default;
};

enum class HealthStatus { kHealthy, kInfected };
std::string_view to_string(HealthStatus s);

struct UserRecord {
  G2Point id;  // g2^t_u
  Scalar t_u;
  std::optional<G2Point> pk_u;
  HealthStatus status = HealthStatus::kHealthy;
};

enum class IngestStatus { kPending, kMatched, kRejected };
std::string_view to_string(IngestStatus s);

struct IngestResult {
  IngestStatus status = IngestStatus::kPending;
  std::optional<Scalar> ps;  // set when matched
  std::string reason;        // set when rejected
  std::pair<std::string, std::string> proxies;
};

class Server {
 public:
  Server(const PairingContext& ctx, ServerKeys keys, ProtocolConfig cfg = {});
  static Server keygen(const PairingContext& ctx, Rng& rng, ProtocolConfig cfg = {});

  ServerPublicKey pk() const { return public_key(keys_); }
  const ProtocolConfig& config() const { return cfg_; }

  // First copy waits; a copy of the same CCM from another proxy within the
  // matching window is signed and stored; anything already stored is dropped.
  IngestResult ingest(const Scalar& ccm, const std::string& proxy_id, std::int64_t now, Rng& rng);

  // What the server may reveal to anyone: no PS'.
  struct PublicRecord {
    Scalar ps;
    std::int64_t received_at = 0;
    std::pair<std::string, std::string> proxies;
  };
  std::optional<PublicRecord> lookup(const Scalar& ccm) const;
  std::optional<Scalar> fetch_ps_prime(const HaAccess&, const Scalar& ccm) const;

  void purge_expired(std::int64_t now);
  std::size_t stored_count() const { return store_.size(); }
  std::size_t pending_count() const { return pending_.size(); }

  Json to_json() const;
  static Server from_json(const PairingContext& ctx, const Json& j);

 private:
  struct Stored {
    PartialSignature sig;
    std::int64_t received_at = 0;
    std::pair<std::string, std::string> proxies;
  };
  struct Pending {
    std::string proxy;
    std::int64_t received_at = 0;
  };
  void expire_pending(std::int64_t now);

  const PairingContext* ctx_;
  ServerKeys keys_;
  ProtocolConfig cfg_;
  std::map<Scalar, Stored> store_;
  std::map<Scalar, Pending> pending_;
};

class User {
 public:
  // user_keygen: q_u fresh, pk_u = id^q_u.
  static User keygen(const PairingContext& ctx, const G2Point& id, Rng& rng);

  const G2Point& id() const { return id_; }
  const G2Point& pk() const { return pk_; }
  const Ebid& ebid() const { return ebid_; }
  std::int64_t epoch() const { return epoch_; }
  const Ebid& rotate(std::int64_t epoch, Rng& rng);

  void record(ContactEntry e) { contacts_.push_back(std::move(e)); }
  const std::vector<ContactEntry>& contacts() const { return contacts_; }
  // Drops entries older than delta.
  void purge_expired(std::int64_t now, const ProtocolConfig& cfg);

  Json to_json() const;
  static User from_json(const Json& j);

 private:
  G2Point id_, pk_;
  Scalar q_;
  Ebid ebid_;
  std::int64_t epoch_ = -1;
  std::vector<ContactEntry> contacts_;
};

class Proxy {
 public:
  Proxy(std::string name, ProxyCredential cred) : name_(std::move(name)), cred_(std::move(cred)) {}
  const std::string& name() const { return name_; }
  const ProxyCredential& credential() const { return cred_; }
  // Session data is not kept.
  PSignOutput sign_for(const PairingContext& ctx, const GroupVerifKey& vk, const G2Point& id_u, const Scalar& ps,
                       Rng& rng, Execution mode = Execution::kSequential) const {
    return p_sign(ctx, vk, cred_, id_u, ps, rng, mode);
  }

 private:
  std::string name_;
  ProxyCredential cred_;
};

// Per-entry outcome. The protocol leaves the user-facing reply undefined;
// this is what the authority reports back.
enum class EntryOutcome { kAccepted, kBadGroupSignature, kNoServerRecord, kCcmMismatch };
std::string_view to_string(EntryOutcome o);

struct EntryVerdict {
  std::size_t index = 0;
  EntryOutcome outcome = EntryOutcome::kAccepted;
  bool accepted() const { return outcome == EntryOutcome::kAccepted; }
};

enum class ListStatus { kVerified, kUserHealthy };

struct ContactListVerdict {
  ListStatus status = ListStatus::kVerified;
  std::vector<EntryVerdict> entries;
  std::size_t accepted_count() const;
};

class HealthAuthority {
 public:
  explicit HealthAuthority(const PairingContext& ctx, HaKeys keys, ProtocolConfig cfg = {});
  static HealthAuthority keygen(const PairingContext& ctx, Rng& rng, ProtocolConfig cfg = {});

  const G2Point& pk() const { return keys_.pk; }

  const UserRecord& set_user_id(Rng& rng);
  void register_user_key(const G2Point& id, const G2Point& pk_u);
  const UserRecord* find(const G2Point& id) const;
  void set_status(const G2Point& id, HealthStatus status);

  // Refuses healthy users outright; throws ProtocolError on unknown ones.
  // Accepted CCMs are queued for the next publication; the list itself is
  // not kept.
  ContactListVerdict verify_contact_list(const Server& server, const GroupVerifKey& vk, const G2Point& id,
                                         const std::vector<ContactEntry>& list, GsigVerifyOptions opt = {});

  // Signs every queued CCM still inside the retention window.
  VerifiedSet publish(std::int64_t now);
  const std::vector<VerifiedSet>& published() const { return log_; }
  std::size_t queued_count() const { return accepted_.size(); }

  Json to_json() const;
  static HealthAuthority from_json(const PairingContext& ctx, const Json& j);

 private:
  UserRecord* find_mut(const G2Point& id);

  const PairingContext* ctx_;
  HaKeys keys_;
  ProtocolConfig cfg_;
  std::vector<UserRecord> db_;
  std::map<Scalar, std::int64_t> accepted_;  // CCM -> contact time
  std::vector<VerifiedSet> log_;
};

}  // namespace spot
