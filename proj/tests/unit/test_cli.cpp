#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "spot/persist.hpp"
#include "spot/simulator.hpp"

using namespace spot;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = spot::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("spot-cli-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_scenario(const std::string& name, const Json& j) {
  fs::path p = fs::temp_directory_path() / ("spot-cli-" + name + ".json");
  std::ofstream(p) << j.dump();
  return p;
}

Json minimal_scenario() {
  return Json::parse(R"({"seed": "cli", "users": 2, "proxies": {"primary": ["P1"], "secondary": ["P2"]},
                         "epochs": 1, "contacts": [{"epoch": 0, "users": [0, 1], "duration": 600}],
                         "infections": [{"day": 1, "user": 0}]})");
}

}  // namespace

TEST_CASE("init writes parameters that reload") {
  auto d = fresh("init");
  auto r = invoke({"init", "--dir", d.string(), "--seed", "s"});
  CHECK(r.code == 0);
  CHECK(fs::exists(d / "params.json"));
  World w = World::load(d);
  CHECK(w.ctx().security_level() == SecurityLevel::k112);
  CHECK(invoke({"init", "--dir", d.string()}).code == 2);
  CHECK(invoke({"init", "--dir", d.string(), "--force", "--level", "128"}).code == 0);
  CHECK(World::load(d).ctx().security_level() == SecurityLevel::k128);
  CHECK(invoke({"init", "--dir", d.string(), "--force", "--level", "100"}).code == 2);
  fs::remove_all(d);
}

TEST_CASE("full manual flow and exit codes") {
  auto d = fresh("flow");
  const std::string ds = d.string();
  REQUIRE(invoke({"init", "-d", ds, "--seed", "x"}).code == 0);
  CHECK(invoke({"join-proxy", "P1", "-d", ds}).code == 3);  // no group manager yet
  REQUIRE(invoke({"keygen", "-d", ds, "--seed", "x"}).code == 0);
  REQUIRE(invoke({"join-proxy", "P1", "-d", ds, "--seed", "x"}).code == 0);
  REQUIRE(invoke({"join-proxy", "P2", "--secondary", "-d", ds, "--seed", "x"}).code == 0);
  REQUIRE(invoke({"register-user", "alice", "-d", ds, "--seed", "x"}).code == 0);
  REQUIRE(invoke({"register-user", "bob", "-d", ds, "--seed", "x"}).code == 0);
  CHECK(invoke({"register-user", "bob", "-d", ds}).code == 2);
  REQUIRE(invoke({"contact", "alice", "bob", "--epoch", "0", "--time", "10", "--duration", "901", "-d", ds}).code == 0);

  auto healthy = invoke({"verify", "alice", "-d", ds});
  CHECK(healthy.code == 1);
  CHECK(healthy.out.find("refused") != std::string::npos);

  CHECK(invoke({"risk", "bob", "-d", ds}).code == 3);  // nothing published
  CHECK(invoke({"declare-infected", "alice", "-d", ds}).code == 0);
  auto ok = invoke({"verify", "alice", "--mt", "--pre", "-d", ds});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("1 of 1 entries accepted") != std::string::npos);
  CHECK(invoke({"publish", "-d", ds}).code == 0);
  auto risk = invoke({"risk", "bob", "-d", ds});
  CHECK(risk.code == 0);
  CHECK(risk.out.find("score 2") != std::string::npos);
  CHECK(invoke({"risk", "carol", "-d", ds}).code == 3);

  // A forged publication is refused at scoring time.
  Json ha = Json::parse(slurp(d / "ha.json"));
  ha["body"]["published"][0]["ccms"] = Json::array();
  std::ofstream(d / "ha.json") << ha.dump();
  CHECK(invoke({"risk", "bob", "-d", ds}).code == 1);

  std::ofstream(d / "server.json") << "{";
  CHECK(invoke({"publish", "-d", ds}).code == 2);
  fs::remove_all(d);
}

TEST_CASE("simulate is reproducible in fresh directories") {
  auto sc = write_scenario("sim", minimal_scenario());
  auto a = fresh("sim-a"), b = fresh("sim-b");
  auto ra = invoke({"simulate", sc.string(), "-d", a.string()});
  auto rb = invoke({"simulate", sc.string(), "-d", b.string()});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(ra.out.find("risk u1: 1 exposed") != std::string::npos);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  for (const char* f : {"params.json", "server.json", "ha.json", "gm.json", "proxies.json", "users/u0.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(invoke({"simulate", sc.string(), "-d", a.string()}).code == 2);  // not fresh
  // The simulated state keeps working with the other commands.
  CHECK(invoke({"risk", "u1", "-d", a.string()}).code == 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("malformed scenarios and arguments") {
  Json bad = minimal_scenario();
  bad["contacts"][0]["users"] = Json::array({0, 7});
  auto p = write_scenario("bad", bad);
  auto d = fresh("bad");
  CHECK(invoke({"simulate", p.string(), "-d", d.string()}).code == 2);
  std::ofstream(p) << "not json";
  CHECK(invoke({"simulate", p.string(), "-d", d.string()}).code == 2);
  CHECK(invoke({"simulate", "/nonexistent/scenario.json", "-d", d.string()}).code == 3);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"bench", "--runs", "1", "--algorithms", "Nope"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("bench prints a table and writes JSON") {
  auto j = fs::temp_directory_path() / "spot-cli-bench.json";
  auto r = invoke({"bench", "--runs", "1", "--algorithms", "S_Keygen,Set_CCM", "--json", j.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("S_Keygen") != std::string::npos);
  Json rep = Json::parse(slurp(j));
  CHECK(rep["rows"].size() == 2);
  CHECK(rep["rows"][0]["communication"]["g2"] == 2);
}
