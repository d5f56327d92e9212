#include "spot/entities.hpp"

#include <algorithm>

#include "json_util.hpp"
#include "spot/errors.hpp"

namespace spot {

std::string_view to_string(HealthStatus s) { return s == HealthStatus::kHealthy ? "healthy" : "infected"; }

std::string_view to_string(IngestStatus s) {
  switch (s) {
    case IngestStatus::kPending:
      return "pending";
    case IngestStatus::kMatched:
      return "matched";
    case IngestStatus::kRejected:
      return "rejected";
  }
  return "?";
}

std::string_view to_string(EntryOutcome o) {
  switch (o) {
    case EntryOutcome::kAccepted:
      return "accepted";
    case EntryOutcome::kBadGroupSignature:
      return "bad-group-signature";
    case EntryOutcome::kNoServerRecord:
      return "no-server-record";
    case EntryOutcome::kCcmMismatch:
      return "ccm-mismatch";
  }
  return "?";
}

// ---- server

Server::Server(const PairingContext& ctx, ServerKeys keys, ProtocolConfig cfg)
    : ctx_(&ctx), keys_(std::move(keys)), cfg_(cfg) {}

Server Server::keygen(const PairingContext& ctx, Rng& rng, ProtocolConfig cfg) {
  return Server(ctx, s_keygen(ctx, rng), cfg);
}

void Server::expire_pending(std::int64_t now) {
  std::erase_if(pending_, [&](const auto& kv) { return now - kv.second.received_at > cfg_.match_window_seconds; });
}

IngestResult Server::ingest(const Scalar& ccm, const std::string& proxy_id, std::int64_t now, Rng& rng) {
  expire_pending(now);
  IngestResult res;
  if (auto it = store_.find(ccm); it != store_.end()) {
    if (now - it->second.received_at <= cfg_.delta_seconds()) {
      res.status = IngestStatus::kRejected;
      res.reason = "duplicate of a stored CCM";
      res.proxies = it->second.proxies;
      return res;
    }
    store_.erase(it);
  }
  auto pend = pending_.find(ccm);
  if (pend == pending_.end()) {
    pending_.emplace(ccm, Pending{proxy_id, now});
    res.status = IngestStatus::kPending;
    res.proxies = {proxy_id, {}};
    return res;
  }
  if (pend->second.proxy == proxy_id) {
    res.status = IngestStatus::kRejected;
    res.reason = "second copy from the same proxy";
    res.proxies = {proxy_id, proxy_id};
    return res;
  }
  ctx_->activate();
  Stored st{s_psign(keys_, ccm, rng), now, {pend->second.proxy, proxy_id}};
  pending_.erase(pend);
  res.status = IngestStatus::kMatched;
  res.ps = st.sig.ps;
  res.proxies = st.proxies;
  store_.emplace(ccm, std::move(st));
  return res;
}

std::optional<Server::PublicRecord> Server::lookup(const Scalar& ccm) const {
  auto it = store_.find(ccm);
  if (it == store_.end()) return std::nullopt;
  return PublicRecord{it->second.sig.ps, it->second.received_at, it->second.proxies};
}

std::optional<Scalar> Server::fetch_ps_prime(const HaAccess&, const Scalar& ccm) const {
  auto it = store_.find(ccm);
  if (it == store_.end()) return std::nullopt;
  return it->second.sig.ps_prime;
}

void Server::purge_expired(std::int64_t now) {
  std::erase_if(store_, [&](const auto& kv) { return now - kv.second.received_at > cfg_.delta_seconds(); });
  expire_pending(now);
}

// ---- user

User User::keygen(const PairingContext& ctx, const G2Point& id, Rng& rng) {
  if (id.is_identity()) throw ProtocolError("user id must not be the identity");
  ctx.activate();
  User u;
  u.id_ = id;
  u.q_ = rng.next_nonzero_scalar();
  u.pk_ = id * u.q_;
  return u;
}

const Ebid& User::rotate(std::int64_t epoch, Rng& rng) {
  if (epoch <= epoch_) throw ProtocolError("epochs must increase");
  epoch_ = epoch;
  ebid_ = Ebid::random(rng);
  return ebid_;
}

void User::purge_expired(std::int64_t now, const ProtocolConfig& cfg) {
  std::erase_if(contacts_, [&](const ContactEntry& e) { return now - e.time > cfg.delta_seconds(); });
}

// ---- health authority

std::size_t ContactListVerdict::accepted_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const EntryVerdict& v) { return v.accepted(); }));
}

HealthAuthority::HealthAuthority(const PairingContext& ctx, HaKeys keys, ProtocolConfig cfg)
    : ctx_(&ctx), keys_(std::move(keys)), cfg_(cfg) {}

HealthAuthority HealthAuthority::keygen(const PairingContext& ctx, Rng& rng, ProtocolConfig cfg) {
  return HealthAuthority(ctx, ha_keygen(ctx, rng), cfg);
}

const UserRecord& HealthAuthority::set_user_id(Rng& rng) {
  ctx_->activate();
  UserRecord rec;
  do {
    rec.t_u = rng.next_nonzero_scalar();
    rec.id = ctx_->g2() * rec.t_u;
  } while (find(rec.id) != nullptr);
  db_.push_back(std::move(rec));
  return db_.back();
}

const UserRecord* HealthAuthority::find(const G2Point& id) const {
  auto it = std::find_if(db_.begin(), db_.end(), [&](const UserRecord& r) { return r.id == id; });
  return it == db_.end() ? nullptr : &*it;
}

UserRecord* HealthAuthority::find_mut(const G2Point& id) {
  auto it = std::find_if(db_.begin(), db_.end(), [&](const UserRecord& r) { return r.id == id; });
  return it == db_.end() ? nullptr : &*it;
}

void HealthAuthority::register_user_key(const G2Point& id, const G2Point& pk_u) {
  UserRecord* rec = find_mut(id);
  if (rec == nullptr) throw ProtocolError("unknown user");
  rec->pk_u = pk_u;
}

void HealthAuthority::set_status(const G2Point& id, HealthStatus status) {
  UserRecord* rec = find_mut(id);
  if (rec == nullptr) throw ProtocolError("unknown user");
  rec->status = status;
}

ContactListVerdict HealthAuthority::verify_contact_list(const Server& server, const GroupVerifKey& vk,
                                                        const G2Point& id, const std::vector<ContactEntry>& list,
                                                        GsigVerifyOptions opt) {
  const UserRecord* rec = find(id);
  if (rec == nullptr) throw ProtocolError("unknown user");
  ContactListVerdict out;
  if (rec->status != HealthStatus::kInfected) {
    out.status = ListStatus::kUserHealthy;
    return out;
  }
  const ServerPublicKey pk_s = server.pk();
  for (std::size_t i = 0; i < list.size(); ++i) {
    const ContactEntry& e = list[i];
    EntryVerdict v{i, EntryOutcome::kAccepted};
    if (!sig_verify(*ctx_, vk, e.m, e.pi, opt)) {
      v.outcome = EntryOutcome::kBadGroupSignature;
    } else if (auto ps_prime = server.fetch_ps_prime(HaAccess{}, e.ccm); !ps_prime) {
      v.outcome = EntryOutcome::kNoServerRecord;
    } else if (!ccm_verify(*ctx_, e.m, *ps_prime, pk_s, rec->t_u)) {
      v.outcome = EntryOutcome::kCcmMismatch;
    } else {
      auto [it, fresh] = accepted_.emplace(e.ccm, e.time);
      if (!fresh) it->second = std::max(it->second, e.time);
    }
    out.entries.push_back(v);
  }
  return out;
}

VerifiedSet HealthAuthority::publish(std::int64_t now) {
  std::erase_if(accepted_, [&](const auto& kv) { return now - kv.second > cfg_.delta_seconds(); });
  std::vector<Scalar> ccms;
  ccms.reserve(accepted_.size());
  for (const auto& kv : accepted_) ccms.push_back(kv.first);
  log_.push_back(ha_publish(*ctx_, keys_, std::move(ccms)));
  return log_.back();
}

}  // namespace spot
