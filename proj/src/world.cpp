#include "spot/world.hpp"

#include <fstream>

#include "json_util.hpp"
#include "spot/errors.hpp"
#include "spot/persist.hpp"

namespace spot {

namespace fs = std::filesystem;
using jsonx::at;
using jsonx::field;

// ---- transcript

Transcript::Body& Transcript::Body::add(const Scalar& s) {
  w_.put(s);
  n_.zn += 1;
  return *this;
}
Transcript::Body& Transcript::Body::add(const G1Point& p) {
  w_.put(p);
  n_.g1 += 1;
  return *this;
}
Transcript::Body& Transcript::Body::add(const G2Point& q) {
  w_.put(q);
  n_.g2 += 1;
  return *this;
}
Transcript::Body& Transcript::Body::add(const GroupSignature& pi) {
  add_all(pi.proof.c);
  add_all(pi.proof.d);
  for (const auto& e : pi.proof.eq) add(e.theta).add(e.pi);
  return *this;
}

namespace {
template <class Base, class Opp>
void add_csig_sig(Transcript::Body& b, const CsigSignature<Base, Opp>& s) {
  b.add(s.z).add(s.r).add(s.s).add(s.t).add(s.u).add(s.v).add(s.w);
}
template <class Base, class Opp>
void add_csig_pk(Transcript::Body& b, const CsigPublicKey<Base, Opp>& pk) {
  b.add(pk.gz).add(pk.hz).add(pk.gr).add(pk.hu).add_all(pk.g).add_all(pk.h).add(pk.a_pub).add(pk.b_pub);
}
}  // namespace

Transcript::Body& Transcript::Body::add(const XsigSignature& s) {
  add_csig_sig(*this, s.sigma1);
  add_csig_sig(*this, s.sigma2);
  return *this;
}
Transcript::Body& Transcript::Body::add(const ProxyPublicKey& pk) {
  add_csig_pk(*this, pk);
  return *this;
}
Transcript::Body& Transcript::Body::add(const GroupVerifKey& vk) {
  add_csig_pk(*this, vk.pk_g.pk1);
  add_csig_pk(*this, vk.pk_g.pk2);
  return add(vk.crs.u).add(vk.crs.v);
}
Transcript::Body& Transcript::Body::add(const VerifiedSet& vs) { return add_all(vs.ccms).add(vs.signature); }

void Transcript::record(std::int64_t time, std::string phase, std::string kind, std::string from, std::string to,
                        const Body& body) {
  Message m{time, std::move(phase), std::move(kind), std::move(from), std::move(to), body.elements(),
            body.bytes().size(), {}};
  std::array<std::uint8_t, 16> d{};
  shake256({as_bytes("SPOT-MSG/v1"), body.bytes()}, d);
  m.digest = to_hex(d);
  messages_.push_back(std::move(m));
}

Json Transcript::to_json() const {
  Json out = Json::array();
  for (const auto& m : messages_) {
    out.push_back({{"time", m.time},
                   {"phase", m.phase},
                   {"kind", m.kind},
                   {"from", m.from},
                   {"to", m.to},
                   {"elements", {{"g1", m.elements.g1}, {"g2", m.elements.g2}, {"zn", m.elements.zn}}},
                   {"bytes", m.bytes},
                   {"digest", m.digest}});
  }
  return out;
}

// ---- world

World::World(SecurityLevel level, Bytes seed, ProtocolConfig cfg)
    : ctx_(std::make_unique<PairingContext>(PairingContext::setup(level, seed))), cfg_(cfg) {}
World::World(World&&) noexcept = default;
World& World::operator=(World&&) noexcept = default;
World::~World() = default;

const GroupManagerKey& World::gm() const {
  if (!gm_) throw MissingState("group manager key not generated");
  return *gm_;
}
const GroupVerifKey& World::vk() const {
  if (!vk_) throw MissingState("group verification key not generated");
  return *vk_;
}
HealthAuthority& World::ha() {
  if (!ha_) throw MissingState("health authority key not generated");
  return *ha_;
}
const HealthAuthority& World::ha() const {
  if (!ha_) throw MissingState("health authority key not generated");
  return *ha_;
}
Server& World::server() {
  if (!server_) throw MissingState("server key not generated");
  return *server_;
}
const Server& World::server() const {
  if (!server_) throw MissingState("server key not generated");
  return *server_;
}
User& World::user(const std::string& name) {
  auto it = users_.find(name);
  if (it == users_.end()) throw MissingState("unknown user " + name);
  return it->second;
}
const User& World::user(const std::string& name) const {
  auto it = users_.find(name);
  if (it == users_.end()) throw MissingState("unknown user " + name);
  return it->second;
}

void World::advance(std::int64_t now) {
  if (now < clock_) throw ProtocolError("simulated clock cannot go backwards");
  clock_ = now;
}

void World::set_preprocessing(bool on) {
  if (!on) {
    prepared_.reset();
  } else if (!prepared_) {
    prepared_ = std::make_unique<PreparedGroupKey>(ctx(), vk());
  }
}

void World::keygen(const std::string& role, Rng& rng, Transcript* t) {
  Transcript::Body body;
  if (role == "gm") {
    gm_ = gsig_setup(ctx(), rng);
    vk_ = gm_->vk;
    if (prepared_) prepared_ = std::make_unique<PreparedGroupKey>(ctx(), *vk_);
    body.add(*vk_);
  } else if (role == "server") {
    server_.emplace(Server::keygen(ctx(), rng, cfg_));
    body.add(server_->pk().y1).add(server_->pk().y2);
  } else if (role == "ha") {
    ha_.emplace(HealthAuthority::keygen(ctx(), rng, cfg_));
    body.add(ha_->pk());
  } else {
    throw MalformedInput("unknown role " + role + " (gm, server, ha)");
  }
  if (t) t->record(clock_, "init", role + "-keygen", role, "public", body);
}

void World::join_proxy(const std::string& name, bool primary, Rng& rng, Transcript* t) {
  if (name.empty()) throw MalformedInput("proxy name must not be empty");
  if (proxies_.contains(name)) throw ProtocolError("proxy " + name + " already joined");
  const GroupManagerKey& g = gm();
  ProxySecretKey sk = proxy_keygen(ctx(), rng);
  XsigSignature sigma = gm_certify(ctx(), g.sk_g, sk.pk, rng);
  if (t) {
    Transcript::Body up, down;
    up.add(sk.pk);
    down.add(sigma);
    t->record(clock_, "join", "proxy-key", name, "gm", up);
    t->record(clock_, "join", "certificate", "gm", name, down);
  }
  proxies_.emplace(name, Proxy(name, ProxyCredential{std::move(sk), sigma}));
  (primary ? roster_.primary : roster_.secondary).push_back(name);
}

void World::register_user(const std::string& name, Rng& rng, Transcript* t) {
  if (name.empty()) throw MalformedInput("user name must not be empty");
  if (users_.contains(name)) throw ProtocolError("user " + name + " already registered");
  HealthAuthority& h = ha();
  const G2Point id = h.set_user_id(rng).id;
  User u = User::keygen(ctx(), id, rng);
  h.register_user_key(id, u.pk());
  if (t) {
    Transcript::Body down, up;
    down.add(id);
    up.add(u.pk());
    t->record(clock_, "register", "user-id", "ha", name, down);
    t->record(clock_, "register", "user-key", name, "ha", up);
  }
  users_.emplace(name, std::move(u));
}

void World::rotate_all(std::int64_t epoch, Rng& rng) {
  for (auto& [name, u] : users_) {
    if (u.epoch() < epoch) u.rotate(epoch, rng);
  }
}

ContactRecord World::contact(const std::string& a, const std::string& b, std::int64_t epoch, std::int64_t time,
                             std::int64_t duration, Rng& rng, Transcript* t) {
  if (a == b) throw MalformedInput("a contact needs two distinct users");
  if (duration < 0) throw MalformedInput("negative contact duration");
  advance(time);
  User& ua = user(a);
  User& ub = user(b);
  for (User* u : {&ua, &ub}) {
    if (u->epoch() > epoch) throw ProtocolError("contact refers to a past epoch");
    if (u->epoch() < epoch) u->rotate(epoch, rng);
  }
  ContactRecord rec{epoch, time, duration, a, b, {}, {}, {}, {}};
  const Ebid da = ua.ebid(), db = ub.ebid();
  if (da == db) {
    rec.status = "tie";
    return rec;
  }
  auto [pa, pb] = choose_proxies(da, db, roster_);
  rec.proxy_a = pa;
  rec.proxy_b = pb;
  const Scalar ccm = set_ccm(ctx(), da, db);
  rec.ccm = ccm;
  Server& s = server();

  auto upload = [&](const std::string& who, const User& u, const std::string& proxy) {
    if (!t) return;
    Transcript::Body up, fwd;
    up.add(ccm).add(u.id());
    fwd.add(ccm);
    t->record(time, "generation", "ccm-upload", who, proxy, up);
    t->record(time, "generation", "ccm-forward", proxy, "server", fwd);
  };
  upload(a, ua, pa);
  IngestResult first = s.ingest(ccm, pa, time, rng);
  upload(b, ub, pb);
  IngestResult second = s.ingest(ccm, pb, time, rng);
  if (first.status == IngestStatus::kRejected || second.status == IngestStatus::kRejected) {
    rec.status = "duplicate";
    return rec;
  }
  if (second.status != IngestStatus::kMatched) {
    rec.status = "unmatched";
    return rec;
  }
  const Scalar ps = *second.ps;
  auto deliver = [&](const std::string& who, User& u, const std::string& proxy) {
    PSignOutput out = proxies_.at(proxy).sign_for(ctx(), vk(), u.id(), ps, rng, mode_);
    if (t) {
      Transcript::Body psb, signed_contact;
      psb.add(ps);
      signed_contact.add(out.m).add(out.pi);
      t->record(time, "generation", "partial-signature", "server", proxy, psb);
      t->record(time, "generation", "signed-contact", proxy, who, signed_contact);
    }
    u.record(ContactEntry{ccm, out.m, std::move(out.pi), time, duration});
  };
  deliver(a, ua, pa);
  deliver(b, ub, pb);
  rec.status = "stored";
  return rec;
}

void World::declare_infected(const std::string& name) { ha().set_status(user(name).id(), HealthStatus::kInfected); }

SubmissionRecord World::submit(const std::string& name, std::int64_t time, Transcript* t) {
  advance(time);
  User& u = user(name);
  HealthAuthority& h = ha();
  Server& s = server();
  s.purge_expired(time);
  u.purge_expired(time, cfg_);
  const UserRecord* rec = h.find(u.id());
  if (rec == nullptr) throw MissingState("user " + name + " is not in the authority's registry");
  SubmissionRecord out;
  out.time = time;
  out.user = name;
  out.infected = rec->status == HealthStatus::kInfected;
  out.submitted = u.contacts().size();
  if (t) {
    Transcript::Body list;
    list.add(u.id());
    for (const auto& e : u.contacts()) list.add(e.ccm).add(e.m).add(e.pi);
    t->record(time, "verification", "contact-list", name, "ha", list);
  }
  out.verdict = h.verify_contact_list(s, vk(), u.id(), u.contacts(), {mode_, prepared_.get()});
  if (t) {
    for (const auto& v : out.verdict.entries) {
      if (v.outcome == EntryOutcome::kBadGroupSignature) continue;
      Transcript::Body req, resp;
      req.add(u.contacts()[v.index].ccm);
      t->record(time, "verification", "ps-prime-request", "ha", "server", req);
      if (v.outcome != EntryOutcome::kNoServerRecord) {
        // PS' itself stays out of the transcript; same width.
        resp.add(Scalar::zero());
        t->record(time, "verification", "ps-prime", "server", "ha", resp);
      }
    }
  }
  return out;
}

VerifiedSet World::publish(std::int64_t time, Transcript* t) {
  advance(time);
  VerifiedSet vs = ha().publish(time);
  if (t) {
    Transcript::Body b;
    b.add(vs);
    t->record(time, "publication", "verified-set", "ha", "public", b);
  }
  return vs;
}

RiskResult World::risk(const std::string& name) const {
  const auto& log = ha().published();
  if (log.empty()) throw MissingState("nothing has been published yet");
  return risk_score(ctx(), ha().pk(), user(name).contacts(), log.back(), cfg_);
}

// ---- persistence

namespace {

void write_json(const fs::path& p, const Json& j) {
  fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << j.dump(2) << '\n';
  }
  fs::rename(tmp, p);
}

Json read_json(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw MissingState("missing state file " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw MalformedInput(p.string() + ": " + e.what());
  }
}

Json names(const std::vector<std::string>& v) { return Json(v); }

}  // namespace

void World::save(const fs::path& dir) const {
  const SecurityLevel level = ctx().security_level();
  Json params = {{"seed", to_hex(ctx().seed())},
                 {"config", to_json(cfg_)},
                 {"clock", clock_},
                 {"roster", {{"primary", names(roster_.primary)}, {"secondary", names(roster_.secondary)}}}};
  write_json(dir / "params.json", envelope("params", level, params));
  if (gm_) write_json(dir / "gm.json", envelope("group-manager", level, to_json(*gm_)));
  if (vk_) write_json(dir / "group_key.json", envelope("group-key", level, Json::object({{"vk", to_hex(vk_->to_bytes())}})));
  if (!proxies_.empty()) {
    Json creds = Json::object();
    for (const auto& [name, p] : proxies_) creds[name] = to_json(p.credential());
    write_json(dir / "proxies.json", envelope("proxies", level, creds));
  }
  if (server_) write_json(dir / "server.json", envelope("server", level, server_->to_json()));
  if (ha_) write_json(dir / "ha.json", envelope("health-authority", level, ha_->to_json()));
  if (fs::exists(dir / "users")) {
    for (const auto& entry : fs::directory_iterator(dir / "users")) {
      if (!users_.contains(entry.path().stem().string())) fs::remove(entry.path());
    }
  }
  for (const auto& [name, u] : users_) {
    write_json(dir / "users" / (name + ".json"), envelope("user", level, u.to_json()));
  }
}

World World::load(const fs::path& dir) {
  const Json penv = read_json(dir / "params.json");
  const SecurityLevel level = envelope_level(penv);
  const Json params = open_envelope(penv, "params", level);
  World w(level, from_hex(field<std::string>(params, "seed")), config_from_json(at(params, "config")));
  const PairingContext& c = w.ctx();
  w.clock_ = field<std::int64_t>(params, "clock");
  const Json& roster = at(params, "roster");
  w.roster_.primary = field<std::vector<std::string>>(roster, "primary");
  w.roster_.secondary = field<std::vector<std::string>>(roster, "secondary");

  if (fs::exists(dir / "gm.json")) {
    w.gm_ = group_manager_from_json(c, open_envelope(read_json(dir / "gm.json"), "group-manager", level));
  }
  if (fs::exists(dir / "group_key.json")) {
    const Json body = open_envelope(read_json(dir / "group_key.json"), "group-key", level);
    w.vk_ = GroupVerifKey::from_bytes(from_hex(field<std::string>(body, "vk")));
    if (w.gm_ && !(w.gm_->vk == *w.vk_)) throw MalformedInput("group key does not match the manager's key");
  } else if (w.gm_) {
    w.vk_ = w.gm_->vk;
  }
  if (fs::exists(dir / "proxies.json")) {
    const Json body = open_envelope(read_json(dir / "proxies.json"), "proxies", level);
    for (const auto& [name, cj] : body.items()) {
      w.proxies_.emplace(name, Proxy(name, credential_from_json(c, cj)));
    }
  }
  for (const auto& n : w.roster_.primary) {
    if (!w.proxies_.contains(n)) throw MalformedInput("roster names unknown proxy " + n);
  }
  for (const auto& n : w.roster_.secondary) {
    if (!w.proxies_.contains(n)) throw MalformedInput("roster names unknown proxy " + n);
  }
  if (fs::exists(dir / "server.json")) {
    w.server_.emplace(Server::from_json(c, open_envelope(read_json(dir / "server.json"), "server", level)));
  }
  if (fs::exists(dir / "ha.json")) {
    w.ha_.emplace(
        HealthAuthority::from_json(c, open_envelope(read_json(dir / "ha.json"), "health-authority", level)));
  }
  if (fs::exists(dir / "users")) {
    for (const auto& entry : fs::directory_iterator(dir / "users")) {
      if (entry.path().extension() != ".json") continue;
      w.users_.emplace(entry.path().stem().string(),
                       User::from_json(open_envelope(read_json(entry.path()), "user", level)));
    }
  }
  return w;
}

}  // namespace spot
