#include "spot/simulator.hpp"

#include <algorithm>
#include <set>

#include "json_util.hpp"
#include "spot/errors.hpp"
#include "spot/persist.hpp"

namespace spot {

using jsonx::at;
using jsonx::field;
using jsonx::hex;

namespace {

std::vector<HealthEvent> health_events(const Json& j, const char* key) {
  std::vector<HealthEvent> out;
  if (!j.contains(key)) return out;
  for (const auto& e : at(j, key)) out.push_back({field<std::int64_t>(e, "day"), field<std::size_t>(e, "user")});
  return out;
}

Json health_json(const std::vector<HealthEvent>& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back({{"day", e.day}, {"user", e.user}});
  return out;
}

}  // namespace

Scenario Scenario::from_json(const Json& j) {
  if (!j.is_object()) throw MalformedInput("scenario must be a JSON object");
  Scenario sc;
  sc.seed = field<std::string>(j, "seed");
  if (j.contains("security_level")) {
    try {
      sc.level = security_level_from_bits(field<int>(j, "security_level"));
    } catch (const UnsupportedSecurityLevel& e) {
      throw MalformedInput(e.what());
    }
  }
  sc.users = field<std::size_t>(j, "users");
  const Json& px = at(j, "proxies");
  sc.primary = field<std::vector<std::string>>(px, "primary");
  sc.secondary = field<std::vector<std::string>>(px, "secondary");
  if (j.contains("epoch_seconds")) sc.epoch_seconds = field<std::int64_t>(j, "epoch_seconds");
  sc.epochs = field<std::int64_t>(j, "epochs");
  for (const auto& e : at(j, "contacts")) {
    ProximityEvent p;
    p.epoch = field<std::int64_t>(e, "epoch");
    const auto pair = field<std::vector<std::size_t>>(e, "users");
    if (pair.size() != 2) throw MalformedInput("a contact names exactly two users");
    p.a = pair[0];
    p.b = pair[1];
    p.duration = field<std::int64_t>(e, "duration");
    if (e.contains("offset")) p.offset = field<std::int64_t>(e, "offset");
    sc.contacts.push_back(p);
  }
  sc.infections = health_events(j, "infections");
  sc.healthy_submissions = health_events(j, "healthy_submissions");
  if (j.contains("config")) sc.config = config_from_json(at(j, "config"));
  if (j.contains("variant")) {
    const Json& v = at(j, "variant");
    if (v.contains("parallel")) sc.parallel = field<bool>(v, "parallel");
    if (v.contains("preprocess")) sc.preprocess = field<bool>(v, "preprocess");
  }
  sc.validate();
  return sc;
}

Json Scenario::to_json() const {
  Json contacts_j = Json::array();
  for (const auto& c : contacts) {
    contacts_j.push_back({{"epoch", c.epoch}, {"users", {c.a, c.b}}, {"duration", c.duration}, {"offset", c.offset}});
  }
  return {{"seed", seed},
          {"security_level", bits(level)},
          {"users", users},
          {"proxies", {{"primary", primary}, {"secondary", secondary}}},
          {"epoch_seconds", epoch_seconds},
          {"epochs", epochs},
          {"contacts", contacts_j},
          {"infections", health_json(infections)},
          {"healthy_submissions", health_json(healthy_submissions)},
          {"config", spot::to_json(config)},
          {"variant", {{"parallel", parallel}, {"preprocess", preprocess}}}};
}

void Scenario::validate() const {
  if (users < 2) throw MalformedInput("a scenario needs at least two users");
  if (primary.empty() || secondary.empty()) throw MalformedInput("both proxy subsets need a proxy");
  std::set<std::string> names(primary.begin(), primary.end());
  names.insert(secondary.begin(), secondary.end());
  if (names.size() != primary.size() + secondary.size()) throw MalformedInput("proxy names must be unique");
  if (epoch_seconds <= 0 || epochs <= 0) throw MalformedInput("epoch length and count must be positive");
  std::int64_t last_epoch = 0;
  for (const auto& c : contacts) {
    if (c.a >= users || c.b >= users) throw MalformedInput("contact references an undeclared user");
    if (c.a == c.b) throw MalformedInput("contact between a user and itself");
    if (c.epoch < last_epoch) throw MalformedInput("contact epochs must be non-decreasing");
    if (c.epoch >= epochs) throw MalformedInput("contact epoch beyond the epoch count");
    if (c.duration < 0 || c.offset < 0 || c.offset >= epoch_seconds) throw MalformedInput("contact timing out of range");
    last_epoch = c.epoch;
  }
  for (const auto* list : {&infections, &healthy_submissions}) {
    std::int64_t last_day = 0;
    for (const auto& e : *list) {
      if (e.user >= users) throw MalformedInput("health event references an undeclared user");
      if (e.day < last_day) throw MalformedInput("health event days must be non-decreasing");
      last_day = e.day;
    }
  }
}

SimulationResult run_scenario(const Scenario& sc) {
  sc.validate();
  Rng rng(std::string_view("SPOT-SIM/v1:" + sc.seed));
  SimulationResult res{World(sc.level, Bytes(sc.seed.begin(), sc.seed.end()), sc.config), {}, {}, {}, {}, {}, 0};
  World& w = res.world;
  Transcript* t = &res.transcript;

  // System initialisation.
  w.keygen("gm", rng, t);
  w.keygen("server", rng, t);
  w.keygen("ha", rng, t);
  w.set_execution(sc.parallel ? Execution::kParallel : Execution::kSequential);
  w.set_preprocessing(sc.preprocess);
  for (const auto& p : sc.primary) w.join_proxy(p, true, rng, t);
  for (const auto& p : sc.secondary) w.join_proxy(p, false, rng, t);
  for (std::size_t i = 0; i < sc.users; ++i) w.register_user(Scenario::user_name(i), rng, t);

  // Merge contacts and health events on one timeline. Contacts go first on
  // equal timestamps.
  struct Event {
    std::int64_t time;
    int kind;  // 0 contact, 1 infection, 2 healthy submission
    std::size_t index;
  };
  std::vector<Event> events;
  for (std::size_t i = 0; i < sc.contacts.size(); ++i) {
    events.push_back({sc.contacts[i].epoch * sc.epoch_seconds + sc.contacts[i].offset, 0, i});
  }
  for (std::size_t i = 0; i < sc.infections.size(); ++i) events.push_back({sc.infections[i].day * 86400, 1, i});
  for (std::size_t i = 0; i < sc.healthy_submissions.size(); ++i) {
    events.push_back({sc.healthy_submissions[i].day * 86400, 2, i});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& x, const Event& y) { return std::tie(x.time, x.kind) < std::tie(y.time, y.kind); });

  std::int64_t epoch = -1;
  for (const auto& ev : events) {
    if (ev.kind == 0) {
      const ProximityEvent& c = sc.contacts[ev.index];
      if (c.epoch > epoch) {
        epoch = c.epoch;
        w.rotate_all(epoch, rng);
      }
      res.contacts.push_back(
          w.contact(Scenario::user_name(c.a), Scenario::user_name(c.b), c.epoch, ev.time, c.duration, rng, t));
    } else {
      const HealthEvent& h = ev.kind == 1 ? sc.infections[ev.index] : sc.healthy_submissions[ev.index];
      const std::string name = Scenario::user_name(h.user);
      if (ev.kind == 1) w.declare_infected(name);
      res.submissions.push_back(w.submit(name, ev.time, t));
    }
  }

  res.end_time = std::max(w.clock(), sc.epochs * sc.epoch_seconds);
  res.published = w.publish(res.end_time, t);
  for (std::size_t i = 0; i < sc.users; ++i) {
    const std::string name = Scenario::user_name(i);
    w.user(name).purge_expired(res.end_time, sc.config);
    res.risk[name] = w.risk(name);
  }
  return res;
}

Json SimulationResult::report() const {
  Json contacts_j = Json::array();
  for (const auto& c : contacts) {
    contacts_j.push_back({{"epoch", c.epoch},
                          {"time", c.time},
                          {"users", {c.a, c.b}},
                          {"proxies", {c.proxy_a, c.proxy_b}},
                          {"duration", c.duration},
                          {"status", c.status},
                          {"ccm", c.ccm ? Json(hex(*c.ccm)) : Json(nullptr)}});
  }
  Json subs = Json::array();
  for (const auto& s : submissions) {
    Json entries = Json::array();
    for (const auto& e : s.verdict.entries) entries.push_back({{"index", e.index}, {"outcome", to_string(e.outcome)}});
    subs.push_back({{"time", s.time},
                    {"user", s.user},
                    {"infected", s.infected},
                    {"submitted", s.submitted},
                    {"status", s.verdict.status == ListStatus::kVerified ? "verified" : "refused-healthy"},
                    {"accepted", s.verdict.accepted_count()},
                    {"entries", entries}});
  }
  Json risk_j = Json::object();
  for (const auto& [name, r] : risk) {
    risk_j[name] = {{"score", r.score}, {"matches", r.matches}, {"exposed", r.exposed}};
  }
  return {{"end_time", end_time},
          {"contacts", contacts_j},
          {"submissions", subs},
          {"published", to_json(published)},
          {"risk", risk_j},
          {"transcript", transcript.to_json()}};
}

}  // namespace spot
