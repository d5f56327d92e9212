#include "spot/persist.hpp"

#include "json_util.hpp"

namespace spot {

using jsonx::at;
using jsonx::field;
using jsonx::hex;
using jsonx::unhex;
using jsonx::unhex_field;

Json to_json(const ProtocolConfig& c) {
  return {{"delta_days", c.delta_days},
          {"match_window_seconds", c.match_window_seconds},
          {"weight_unit_seconds", c.weight_unit_seconds},
          {"weight_cap", c.weight_cap},
          {"risk_threshold", c.risk_threshold}};
}

ProtocolConfig config_from_json(const Json& j) {
  ProtocolConfig c;
  if (!j.is_object()) throw MalformedInput("config must be an object");
  if (j.contains("delta_days")) c.delta_days = field<std::int64_t>(j, "delta_days");
  if (j.contains("match_window_seconds")) c.match_window_seconds = field<std::int64_t>(j, "match_window_seconds");
  if (j.contains("weight_unit_seconds")) c.weight_unit_seconds = field<std::int64_t>(j, "weight_unit_seconds");
  if (j.contains("weight_cap")) c.weight_cap = field<std::int64_t>(j, "weight_cap");
  if (j.contains("risk_threshold")) c.risk_threshold = field<double>(j, "risk_threshold");
  if (c.delta_days <= 0 || c.match_window_seconds < 0 || c.weight_unit_seconds <= 0 || c.weight_cap < 0) {
    throw MalformedInput("config values out of range");
  }
  return c;
}

Json to_json(const ContactEntry& e) {
  return {{"ccm", hex(e.ccm)}, {"m", hex(e.m)}, {"pi", hex(e.pi)}, {"time", e.time}, {"duration", e.duration}};
}

ContactEntry contact_from_json(const Json& j) {
  ContactEntry e;
  e.ccm = unhex_field<Scalar>(j, "ccm");
  e.m = unhex_field<G2Point>(j, "m");
  e.pi = unhex_field<GroupSignature>(j, "pi");
  e.time = field<std::int64_t>(j, "time");
  e.duration = field<std::int64_t>(j, "duration");
  return e;
}

Json to_json(const VerifiedSet& vs) {
  Json ccms = Json::array();
  for (const auto& c : vs.ccms) ccms.push_back(hex(c));
  return {{"ccms", ccms}, {"signature", hex(vs.signature)}};
}

VerifiedSet verified_set_from_json(const Json& j) {
  VerifiedSet vs;
  const Json& ccms = at(j, "ccms");
  if (!ccms.is_array()) throw MalformedInput("ccms must be an array");
  for (const auto& c : ccms) vs.ccms.push_back(unhex<Scalar>(c));
  vs.signature = unhex_field<G1Point>(j, "signature");
  return vs;
}

Json envelope(std::string_view kind, SecurityLevel level, Json body) {
  return {{"format", "spot-state"},
          {"version", kStateVersion},
          {"kind", std::string(kind)},
          {"security_level", bits(level)},
          {"body", std::move(body)}};
}

SecurityLevel envelope_level(const Json& env) {
  try {
    return security_level_from_bits(field<int>(env, "security_level"));
  } catch (const UnsupportedSecurityLevel& e) {
    throw MalformedInput(e.what());
  }
}

Json open_envelope(const Json& env, std::string_view kind, SecurityLevel level) {
  if (field<std::string>(env, "format") != "spot-state") throw MalformedInput("not a spot state file");
  if (field<int>(env, "version") != kStateVersion) throw MalformedInput("unsupported state version");
  if (field<std::string>(env, "kind") != kind) {
    throw MalformedInput("expected " + std::string(kind) + " state, got " + field<std::string>(env, "kind"));
  }
  if (envelope_level(env) != level) throw MalformedInput("state belongs to another security level");
  return at(env, "body");
}

// ---- entity snapshots

namespace {
Json proxies_json(const std::pair<std::string, std::string>& p) { return Json::array({p.first, p.second}); }
std::pair<std::string, std::string> proxies_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw MalformedInput("proxy pair must have two names");
  return {j[0].get<std::string>(), j[1].get<std::string>()};
}
}  // namespace

Json Server::to_json() const {
  Json store = Json::array();
  for (const auto& [ccm, st] : store_) {
    store.push_back({{"ccm", hex(ccm)},
                     {"ps", hex(st.sig.ps)},
                     {"ps_prime", hex(st.sig.ps_prime)},
                     {"received_at", st.received_at},
                     {"proxies", proxies_json(st.proxies)}});
  }
  Json pending = Json::array();
  for (const auto& [ccm, p] : pending_) {
    pending.push_back({{"ccm", hex(ccm)}, {"proxy", p.proxy}, {"received_at", p.received_at}});
  }
  return {{"y1", hex(keys_.y1)}, {"y2", hex(keys_.y2)}, {"config", spot::to_json(cfg_)},
          {"store", store},      {"pending", pending}};
}

Server Server::from_json(const PairingContext& ctx, const Json& j) {
  ctx.activate();
  ServerKeys k;
  k.y1 = unhex_field<Scalar>(j, "y1");
  k.y2 = unhex_field<Scalar>(j, "y2");
  k.big_y1 = ctx.g2() * k.y1;
  k.big_y2 = ctx.g2() * k.y2;
  Server s(ctx, k, config_from_json(at(j, "config")));
  for (const auto& e : at(j, "store")) {
    Stored st{{unhex_field<Scalar>(e, "ps"), unhex_field<Scalar>(e, "ps_prime")},
              field<std::int64_t>(e, "received_at"),
              proxies_from(at(e, "proxies"))};
    s.store_.emplace(unhex_field<Scalar>(e, "ccm"), std::move(st));
  }
  for (const auto& e : at(j, "pending")) {
    s.pending_.emplace(unhex_field<Scalar>(e, "ccm"),
                       Pending{field<std::string>(e, "proxy"), field<std::int64_t>(e, "received_at")});
  }
  return s;
}

Json User::to_json() const {
  Json contacts = Json::array();
  for (const auto& c : contacts_) contacts.push_back(spot::to_json(c));
  return {{"id", hex(id_)},       {"q", hex(q_)},         {"pk", hex(pk_)},
          {"ebid", ebid_.hex()}, {"epoch", epoch_}, {"contacts", contacts}};
}

User User::from_json(const Json& j) {
  User u;
  u.id_ = unhex_field<G2Point>(j, "id");
  u.q_ = unhex_field<Scalar>(j, "q");
  u.pk_ = unhex_field<G2Point>(j, "pk");
  if (u.pk_ != u.id_ * u.q_) throw MalformedInput("user key does not match its id");
  u.ebid_ = Ebid::from_bytes(from_hex(field<std::string>(j, "ebid")));
  u.epoch_ = field<std::int64_t>(j, "epoch");
  for (const auto& c : at(j, "contacts")) u.contacts_.push_back(contact_from_json(c));
  return u;
}

Json HealthAuthority::to_json() const {
  Json db = Json::array();
  for (const auto& r : db_) {
    Json row = {{"id", hex(r.id)}, {"t_u", hex(r.t_u)}, {"status", std::string(spot::to_string(r.status))}};
    row["pk_u"] = r.pk_u ? Json(hex(*r.pk_u)) : Json(nullptr);
    db.push_back(std::move(row));
  }
  Json queued = Json::array();
  for (const auto& [ccm, t] : accepted_) queued.push_back({{"ccm", hex(ccm)}, {"time", t}});
  Json log = Json::array();
  for (const auto& vs : log_) log.push_back(spot::to_json(vs));
  return {{"x", hex(keys_.x)}, {"config", spot::to_json(cfg_)}, {"db_user", db}, {"queued", queued},
          {"published", log}};
}

HealthAuthority HealthAuthority::from_json(const PairingContext& ctx, const Json& j) {
  ctx.activate();
  HaKeys k;
  k.x = unhex_field<Scalar>(j, "x");
  k.pk = ctx.g2() * k.x;
  HealthAuthority ha(ctx, k, config_from_json(at(j, "config")));
  for (const auto& row : at(j, "db_user")) {
    UserRecord r;
    r.id = unhex_field<G2Point>(row, "id");
    r.t_u = unhex_field<Scalar>(row, "t_u");
    if (r.id != ctx.g2() * r.t_u) throw MalformedInput("user record id does not match t_u");
    if (!at(row, "pk_u").is_null()) r.pk_u = unhex_field<G2Point>(row, "pk_u");
    const auto status = field<std::string>(row, "status");
    if (status == "healthy") {
      r.status = HealthStatus::kHealthy;
    } else if (status == "infected") {
      r.status = HealthStatus::kInfected;
    } else {
      throw MalformedInput("unknown health status " + status);
    }
    ha.db_.push_back(std::move(r));
  }
  for (const auto& q : at(j, "queued")) ha.accepted_.emplace(unhex_field<Scalar>(q, "ccm"), field<std::int64_t>(q, "time"));
  for (const auto& vs : at(j, "published")) ha.log_.push_back(verified_set_from_json(vs));
  return ha;
}

}  // namespace spot

namespace spot {

namespace {

template <class Base, class Opp>
Json csig_secret_json(const CsigSecretKey<Base, Opp>& sk) {
  Json gammas = Json::array(), deltas = Json::array();
  for (const auto& g : sk.gammas) gammas.push_back(hex(g));
  for (const auto& d : sk.deltas) deltas.push_back(hex(d));
  return {{"pk", to_hex(sk.pk.to_bytes())}, {"alpha", hex(sk.alpha)},     {"beta", hex(sk.beta)},
          {"gamma_z", hex(sk.gamma_z)},     {"delta_z", hex(sk.delta_z)}, {"gammas", gammas},
          {"deltas", deltas}};
}

template <class Base, class Opp>
CsigSecretKey<Base, Opp> csig_secret_from(const PairingContext& ctx, const Json& j) {
  ctx.activate();
  CsigSecretKey<Base, Opp> sk;
  sk.pk = unhex_field<CsigPublicKey<Base, Opp>>(j, "pk");
  sk.alpha = unhex_field<Scalar>(j, "alpha");
  sk.beta = unhex_field<Scalar>(j, "beta");
  sk.gamma_z = unhex_field<Scalar>(j, "gamma_z");
  sk.delta_z = unhex_field<Scalar>(j, "delta_z");
  for (const auto& g : at(j, "gammas")) sk.gammas.push_back(unhex<Scalar>(g));
  for (const auto& d : at(j, "deltas")) sk.deltas.push_back(unhex<Scalar>(d));
  const auto& pk = sk.pk;
  const Opp& opp = ctx.generator<Opp>();
  bool ok = sk.gammas.size() == pk.k() && sk.deltas.size() == pk.k() && pk.a_pub == opp * sk.alpha &&
            pk.b_pub == opp * sk.beta && pk.gz == pk.gr * sk.gamma_z && pk.hz == pk.hu * sk.delta_z;
  for (std::size_t i = 0; ok && i < pk.k(); ++i) {
    ok = pk.g[i] == pk.gr * sk.gammas[i] && pk.h[i] == pk.hu * sk.deltas[i];
  }
  if (!ok) throw MalformedInput("secret key does not match its public key");
  return sk;
}

}  // namespace

Json to_json(const XsigSecretKey& sk) { return {{"sk1", csig_secret_json(sk.sk1)}, {"sk2", csig_secret_json(sk.sk2)}}; }

XsigSecretKey xsig_secret_from_json(const PairingContext& ctx, const Json& j) {
  return {csig_secret_from<G2Point, G1Point>(ctx, at(j, "sk1")), csig_secret_from<G1Point, G2Point>(ctx, at(j, "sk2"))};
}

Json to_json(const GroupManagerKey& gm) { return {{"sk_g", to_json(gm.sk_g)}, {"crs", to_hex(gm.vk.crs.to_bytes())}}; }

GroupManagerKey group_manager_from_json(const PairingContext& ctx, const Json& j) {
  GroupManagerKey gm;
  gm.sk_g = xsig_secret_from_json(ctx, at(j, "sk_g"));
  gm.vk.pk_g = gm.sk_g.pk();
  gm.vk.crs = unhex_field<NiwiCrs>(j, "crs");
  return gm;
}

Json to_json(const ProxyCredential& cred) {
  return {{"sk_p", csig_secret_json(cred.sk_p)}, {"sigma_p", to_hex(cred.sigma_p.to_bytes())}};
}

ProxyCredential credential_from_json(const PairingContext& ctx, const Json& j) {
  return {csig_secret_from<G1Point, G2Point>(ctx, at(j, "sk_p")), unhex_field<XsigSignature>(j, "sigma_p")};
}

}  // namespace spot
