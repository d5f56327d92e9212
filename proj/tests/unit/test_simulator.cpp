#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "spot/errors.hpp"
#include "spot/persist.hpp"
#include "spot/simulator.hpp"

using namespace spot;

namespace {

Scenario minimal(bool infect) {
  Scenario sc;
  sc.seed = "sim-minimal";
  sc.users = 2;
  sc.epochs = 1;
  sc.contacts = {{0, 0, 1, 600, 0}};
  if (infect) sc.infections = {{1, 0}};
  return sc;
}

std::size_t expected_bytes(const PairingContext& ctx, const ElementCount& n) {
  return n.g1 * ctx.g1_size() + n.g2 * ctx.g2_size() + n.zn * ctx.scalar_size();
}

}  // namespace

TEST_CASE("one contact and one infection expose the other user") {
  auto res = run_scenario(minimal(true));
  REQUIRE(res.contacts.size() == 1);
  CHECK(res.contacts[0].status == "stored");
  REQUIRE(res.submissions.size() == 1);
  CHECK(res.submissions[0].verdict.accepted_count() == 1);
  CHECK(res.risk.at("u1").score == 1);
  CHECK(res.risk.at("u1").exposed);
  CHECK(res.risk.at("u0").score == 1);  // the infected user shares the CCM too
}

TEST_CASE("no infection, no exposure") {
  auto res = run_scenario(minimal(false));
  CHECK(res.published.ccms.empty());
  CHECK(res.risk.at("u0").score == 0);
  CHECK(res.risk.at("u1").score == 0);
}

TEST_CASE("same seed, identical transcript") {
  auto a = run_scenario(minimal(true));
  auto b = run_scenario(minimal(true));
  CHECK(a.report().dump() == b.report().dump());
  auto other = minimal(true);
  other.seed = "other";
  CHECK_FALSE(run_scenario(other).report().dump() == a.report().dump());
}

TEST_CASE("transcript element counts match encoded sizes") {
  auto res = run_scenario(minimal(true));
  const auto& ctx = res.world.ctx();
  bool saw_signed = false, saw_server_key = false;
  for (const auto& m : res.transcript.messages()) {
    CHECK(m.bytes == expected_bytes(ctx, m.elements));
    if (m.kind == "signed-contact") {
      saw_signed = true;
      // M, the per-equation proof pairs and the commitments.
      CHECK(m.elements == ElementCount{6 + 15, 7 + 14, 0, 0});
    }
    if (m.kind == "server-keygen") {
      saw_server_key = true;
      CHECK(m.elements == ElementCount{0, 2, 0, 0});
    }
    if (m.kind == "ha-keygen") CHECK(m.elements == ElementCount{0, 1, 0, 0});
    if (m.kind == "gm-keygen") CHECK(m.elements == ElementCount{11, 21, 0, 0});
    if (m.kind == "proxy-key") CHECK(m.elements == ElementCount{6, 2, 0, 0});
    if (m.kind == "certificate") CHECK(m.elements == ElementCount{7, 7, 0, 0});
    if (m.kind == "partial-signature") CHECK(m.elements == ElementCount{0, 0, 0, 1});
  }
  CHECK(saw_signed);
  CHECK(saw_server_key);
}

TEST_CASE("variants give the same verdicts") {
  auto base = run_scenario(minimal(true));
  auto sc = minimal(true);
  sc.parallel = true;
  sc.preprocess = true;
  auto fast = run_scenario(sc);
  CHECK(fast.report().dump() == base.report().dump());
}

TEST_CASE("repeated contact in one epoch is a duplicate") {
  auto sc = minimal(false);
  sc.contacts.push_back({0, 1, 0, 60, 10});
  auto res = run_scenario(sc);
  REQUIRE(res.contacts.size() == 2);
  CHECK(res.contacts[1].status == "duplicate");
  CHECK(res.world.user("u0").contacts().size() == 1);
}

TEST_CASE("scenario validation") {
  auto sc = minimal(true);
  sc.contacts[0].b = 5;
  CHECK_THROWS_AS(sc.validate(), MalformedInput);
  sc = minimal(true);
  sc.contacts.push_back({-1, 0, 1, 1, 0});
  CHECK_THROWS_AS(sc.validate(), MalformedInput);
  sc = minimal(true);
  sc.secondary = {"P1"};
  CHECK_THROWS_AS(sc.validate(), MalformedInput);
  CHECK_THROWS_AS(Scenario::from_json(Json::parse(R"({"seed":"x"})")), MalformedInput);
  auto round = Scenario::from_json(minimal(true).to_json());
  CHECK(round.to_json() == minimal(true).to_json());
}

TEST_CASE("world state survives save and load") {
  auto res = run_scenario(minimal(true));
  const auto dir = std::filesystem::temp_directory_path() / "spot-test-world";
  std::filesystem::remove_all(dir);
  res.world.save(dir);
  World w = World::load(dir);
  CHECK(w.clock() == res.world.clock());
  CHECK(w.risk("u1").score == res.risk.at("u1").score);
  CHECK(w.server().to_json() == res.world.server().to_json());
  CHECK(w.ha().to_json() == res.world.ha().to_json());
  CHECK(w.gm().vk == res.world.vk());
  CHECK(w.roster().primary == res.world.roster().primary);
  CHECK(credential_valid(w.ctx(), w.vk(), w.proxies().at("P1").credential()));

  std::filesystem::remove(dir / "ha.json");
  World partial = World::load(dir);
  CHECK_THROWS_AS(partial.ha(), MissingState);
  {
    std::ofstream(dir / "server.json") << "{ not json";
  }
  CHECK_THROWS_AS(World::load(dir), MalformedInput);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(World::load(dir), MissingState);
}
