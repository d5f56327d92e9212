#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>

#include "spot/bench.hpp"
#include "spot/errors.hpp"
#include "spot/persist.hpp"
#include "spot/simulator.hpp"

namespace spot::cli {

namespace fs = std::filesystem;

namespace {

Json read_json_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw MissingState("cannot read " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw MalformedInput(p.string() + ": " + e.what());
  }
}

void write_text(const fs::path& p, const std::string& s) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << s;
}

Rng make_rng(const std::optional<std::string>& seed, const std::string& purpose) {
  if (!seed) return Rng::from_entropy();
  return Rng("SPOT-CLI/v1:" + purpose + ":" + *seed);
}

void print_verdict(std::ostream& out, const SubmissionRecord& s) {
  if (s.verdict.status == ListStatus::kUserHealthy) {
    out << "refused: " << s.user << " is not marked infected; nothing was verified\n";
    return;
  }
  out << "user " << s.user << ": " << s.verdict.accepted_count() << " of " << s.submitted << " entries accepted\n";
  for (const auto& e : s.verdict.entries) out << "  entry " << e.index << ": " << to_string(e.outcome) << '\n';
}

struct Options {
  std::string dir = ".";
  std::optional<std::string> seed;
  // init
  int level = 112;
  std::string config_file;
  bool force = false;
  // keygen
  std::string role = "all";
  // names
  std::string name, other;
  bool secondary = false;
  // contact
  std::int64_t epoch = 0, duration = 0;
  std::optional<std::int64_t> time;
  // verify
  bool parallel = false, preprocess = false;
  // simulate
  std::string scenario, report;
  // bench
  std::size_t runs = 100;
  std::vector<std::string> algorithms, variants;
  std::string json_out;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SPOT proximity tracing: keys, contacts, verification and benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("-d,--dir", o.dir, "state directory")->capture_default_str();
  app.add_option("--seed", o.seed, "deterministic randomness (default: system entropy)");

  auto* init = app.add_subcommand("init", "create public parameters in the state directory");
  init->add_option("--level", o.level, "security level in bits (112 or 128)")->capture_default_str();
  init->add_option("--config", o.config_file, "JSON document with delta_days, match_window_seconds, ...");
  init->add_flag("--force", o.force, "overwrite existing state");

  auto* keygen = app.add_subcommand("keygen", "generate authority keys");
  keygen->add_option("--role", o.role, "gm, server, ha or all")->capture_default_str();

  auto* join = app.add_subcommand("join-proxy", "certify a new proxy into the group");
  join->add_option("name", o.name)->required();
  join->add_flag("--secondary", o.secondary, "place the proxy in the secondary subset");

  auto* reg = app.add_subcommand("register-user", "register a user with the health authority");
  reg->add_option("name", o.name)->required();

  auto* contact = app.add_subcommand("contact", "record one proximity contact between two users");
  contact->add_option("a", o.name)->required();
  contact->add_option("b", o.other)->required();
  contact->add_option("--epoch", o.epoch)->required();
  contact->add_option("--time", o.time, "simulated seconds (default: current clock)");
  contact->add_option("--duration", o.duration)->required();

  auto* sim = app.add_subcommand("simulate", "run a scenario file into a fresh state directory");
  sim->add_option("scenario", o.scenario)->required();
  sim->add_option("--report", o.report, "report path (default: <dir>/report.json)");

  auto* infected = app.add_subcommand("declare-infected", "mark a user infected");
  infected->add_option("user", o.name)->required();

  auto* verify = app.add_subcommand("verify", "submit a user's contact list to the health authority");
  verify->add_option("user", o.name)->required();
  verify->add_option("--time", o.time, "simulated seconds (default: current clock)");
  verify->add_flag("--mt", o.parallel, "multithreaded signature verification");
  verify->add_flag("--pre", o.preprocess, "pairing preprocessing");

  auto* publish = app.add_subcommand("publish", "sign and publish the verified CCM set");
  publish->add_option("--time", o.time, "simulated seconds (default: current clock)");

  auto* risk = app.add_subcommand("risk", "score a user against the latest publication");
  risk->add_option("user", o.name)->required();

  auto* bench = app.add_subcommand("bench", "time the protocol algorithms");
  bench->add_option("--runs", o.runs)->capture_default_str();
  bench->add_option("--level", o.level)->capture_default_str();
  bench->add_option("--algorithms", o.algorithms, "subset, e.g. P_Sign,Sig_Verify")->delimiter(',');
  bench->add_option("--variant", o.variants, "baseline, mt, pre, mt+pre or all")->delimiter(',');
  bench->add_option("--json", o.json_out, "also write the report as JSON");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  }

  const fs::path dir = o.dir;
  try {
    if (*init) {
      if (fs::exists(dir / "params.json") && !o.force) {
        err << "error: " << (dir / "params.json").string() << " exists (use --force)\n";
        return kMalformed;
      }
      const SecurityLevel level = security_level_from_bits(o.level);
      ProtocolConfig cfg = o.config_file.empty() ? ProtocolConfig{} : config_from_json(read_json_file(o.config_file));
      Rng rng = make_rng(o.seed, "init");
      Bytes seed(32);
      rng.fill(seed);
      if (o.force && fs::exists(dir)) {
        for (const char* f : {"params.json", "gm.json", "group_key.json", "proxies.json", "server.json", "ha.json"}) {
          fs::remove(dir / f);
        }
        fs::remove_all(dir / "users");
      }
      World w(level, seed, cfg);
      w.save(dir);
      out << "initialised " << bits(level) << "-bit parameters (" << curve_name(level) << ") in " << dir.string()
          << '\n';
      return kOk;
    }
    if (*bench) {
      BenchOptions bo;
      bo.level = security_level_from_bits(o.level);
      bo.runs = o.runs;
      bo.algorithms = o.algorithms;
      if (!o.variants.empty()) {
        bo.variants.clear();
        for (const auto& v : o.variants) {
          if (v == "all") {
            bo.variants = BenchVariant::all();
            break;
          }
          bo.variants.push_back(BenchVariant::parse(v));
        }
      }
      if (o.seed) bo.seed = *o.seed;
      BenchReport rep = run_bench(bo);
      out << rep.table();
      if (!o.json_out.empty()) write_text(o.json_out, rep.to_json().dump(2) + "\n");
      return kOk;
    }
    if (*sim) {
      if (fs::exists(dir / "params.json")) {
        err << "error: " << dir.string() << " already holds state; simulate needs a fresh directory\n";
        return kMalformed;
      }
      Scenario sc = Scenario::from_json(read_json_file(o.scenario));
      SimulationResult res = run_scenario(sc);
      res.world.save(dir);
      const fs::path report = o.report.empty() ? dir / "report.json" : fs::path(o.report);
      write_text(report, res.report().dump(2) + "\n");
      std::size_t stored = 0;
      for (const auto& c : res.contacts) stored += c.status == "stored";
      out << "contacts: " << stored << " stored of " << res.contacts.size() << '\n';
      for (const auto& s : res.submissions) print_verdict(out, s);
      out << "published " << res.published.ccms.size() << " CCMs at t=" << res.end_time << '\n';
      for (const auto& [name, r] : res.risk) {
        out << "risk " << name << ": " << r.score << (r.exposed ? " exposed" : "") << '\n';
      }
      out << "transcript: " << res.transcript.messages().size() << " messages; report " << report.string() << '\n';
      return kOk;
    }

    World w = World::load(dir);
    if (*keygen) {
      Rng rng = make_rng(o.seed, "keygen");
      const std::vector<std::string> roles =
          o.role == "all" ? std::vector<std::string>{"gm", "server", "ha"} : std::vector<std::string>{o.role};
      for (const auto& r : roles) {
        w.keygen(r, rng);
        out << "generated " << r << " key\n";
      }
    } else if (*join) {
      Rng rng = make_rng(o.seed, "join:" + o.name);
      w.join_proxy(o.name, !o.secondary, rng);
      out << "proxy " << o.name << " joined the " << (o.secondary ? "secondary" : "primary") << " subset\n";
    } else if (*reg) {
      Rng rng = make_rng(o.seed, "register:" + o.name);
      w.register_user(o.name, rng);
      out << "registered " << o.name << '\n';
    } else if (*contact) {
      Rng rng = make_rng(o.seed, "contact:" + o.name + ":" + o.other);
      ContactRecord c = w.contact(o.name, o.other, o.epoch, o.time.value_or(w.clock()), o.duration, rng);
      out << "contact " << c.a << "-" << c.b << ": " << c.status;
      if (!c.proxy_a.empty()) out << " via " << c.proxy_a << "/" << c.proxy_b;
      out << '\n';
      w.save(dir);
      return c.status == "stored" ? kOk : kVerifyFailed;
    } else if (*infected) {
      w.declare_infected(o.name);
      out << o.name << " marked infected\n";
    } else if (*verify) {
      w.set_execution(o.parallel ? Execution::kParallel : Execution::kSequential);
      w.set_preprocessing(o.preprocess);
      SubmissionRecord s = w.submit(o.name, o.time.value_or(w.clock()));
      print_verdict(out, s);
      w.save(dir);
      const bool all_ok = s.verdict.status == ListStatus::kVerified && s.verdict.accepted_count() == s.submitted;
      return all_ok ? kOk : kVerifyFailed;
    } else if (*publish) {
      VerifiedSet vs = w.publish(o.time.value_or(w.clock()));
      out << "published " << vs.ccms.size() << " CCMs\n";
    } else if (*risk) {
      RiskResult r;
      try {
        r = w.risk(o.name);
      } catch (const ProtocolError& e) {
        err << "rejected: " << e.what() << '\n';
        return kVerifyFailed;
      }
      out << o.name << ": score " << r.score << ", matches " << r.matches << ", "
          << (r.exposed ? "exposed" : "not exposed") << '\n';
      return kOk;
    }
    w.save(dir);
    return kOk;
  } catch (const MissingState& e) {
    err << "missing state: " << e.what() << '\n';
    return kMissingState;
  } catch (const MalformedInput& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const UnsupportedSecurityLevel& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const ProtocolError& e) {
    err << "refused: " << e.what() << '\n';
    return kMalformed;
  }
}

}  // namespace spot::cli
