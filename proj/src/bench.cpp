#include "spot/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <thread>

#include "spot/errors.hpp"

namespace spot {

std::string BenchVariant::name() const {
  if (parallel && preprocess) return "mt+pre";
  if (parallel) return "mt";
  if (preprocess) return "pre";
  return "baseline";
}

BenchVariant BenchVariant::parse(std::string_view s) {
  for (const auto& v : all()) {
    if (v.name() == s) return v;
  }
  throw MalformedInput("unknown variant " + std::string(s) + " (baseline, mt, pre, mt+pre)");
}

std::vector<BenchVariant> BenchVariant::all() { return {{false, false}, {true, false}, {false, true}, {true, true}}; }

const std::vector<std::string>& bench_algorithms() {
  static const std::vector<std::string> names = {"Set_params", "HA_Keygen",  "S_Keygen",   "Setup_ProxyGr",
                                                 "Join_ProxyGr", "Set_UserID", "Userkeygen", "Set_CCM",
                                                 "S_PSign",      "P_Sign",     "Sig_Verify", "CCM_Verify"};
  return names;
}

const BenchRow* BenchReport::find(std::string_view algorithm, std::string_view variant) const {
  for (const auto& r : rows) {
    if (r.algorithm == algorithm && r.variant == variant) return &r;
  }
  return nullptr;
}

namespace {

struct Stats {
  double mean = 0, stddev = 0, min = 0;
};

Stats stats(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  double sum = 0;
  s.min = xs.front();
  for (double x : xs) {
    sum += x;
    s.min = std::min(s.min, x);
  }
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

// Runs fn `runs` times and returns milliseconds per run.
std::vector<double> time_runs(std::size_t runs, const std::function<void(std::size_t)>& fn) {
  std::vector<double> out;
  out.reserve(runs);
  for (std::size_t i = 0; i < runs; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn(i);
    const auto t1 = std::chrono::steady_clock::now();
    out.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return out;
}

// A fixed deployment the per-contact algorithms run against.
struct Fixture {
  PairingContext ctx;
  HaKeys ha;
  ServerKeys server;
  GroupManagerKey gm;
  ProxyCredential cred;
  Scalar t_u;
  G2Point id_u;
  Ebid d_a, d_b;
  Scalar ccm;
  PartialSignature ps;
  PSignOutput signed_contact;
};

Fixture make_fixture(SecurityLevel level, const std::string& seed) {
  Rng rng("SPOT-BENCH/v1:" + seed);
  Fixture f{PairingContext::setup(level, seed), {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  f.ha = ha_keygen(f.ctx, rng);
  f.server = s_keygen(f.ctx, rng);
  f.gm = gsig_setup(f.ctx, rng);
  f.cred = gsig_join(f.ctx, f.gm, rng);
  f.t_u = rng.next_nonzero_scalar();
  f.id_u = f.ctx.g2() * f.t_u;
  f.d_a = Ebid::random(rng);
  f.d_b = Ebid::random(rng);
  f.ccm = set_ccm(f.ctx, f.d_a, f.d_b);
  f.ps = s_psign(f.server, f.ccm, rng);
  f.signed_contact = p_sign(f.ctx, f.gm.vk, f.cred, f.id_u, f.ps.ps, rng);
  return f;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, v < 1 ? "%.4f" : "%.2f", v);
  return buf;
}

}  // namespace

BenchReport run_bench(const BenchOptions& opt) {
  std::vector<std::string> selected = opt.algorithms.empty() ? bench_algorithms() : opt.algorithms;
  for (const auto& a : selected) {
    if (std::find(bench_algorithms().begin(), bench_algorithms().end(), a) == bench_algorithms().end()) {
      throw MalformedInput("unknown algorithm " + a);
    }
  }
  if (opt.runs == 0) throw MalformedInput("runs must be positive");

  BenchReport rep;
  rep.level = opt.level;
  rep.runs = opt.runs;
  rep.hardware_threads = std::thread::hardware_concurrency();

  Fixture f = make_fixture(opt.level, opt.seed);
  const PairingContext& ctx = f.ctx;
  Rng rng("SPOT-BENCH/v1:runs:" + opt.seed);

  auto add_row = [&](const std::string& alg, const std::string& entity, const BenchVariant& v,
                     const std::vector<double>& ms, std::optional<ElementCount> comm, std::string note,
                     bool consistent) {
    Stats s = stats(ms);
    BenchRow r{alg, entity, v.name(), ms.size(), s.mean, s.stddev, s.min, comm.has_value(), comm.value_or(ElementCount{}),
               std::move(note), consistent};
    rep.rows.push_back(std::move(r));
  };
  const BenchVariant base{};

  for (const auto& alg : selected) {
    if (alg == "Set_params") {
      auto ms = time_runs(opt.runs, [&](std::size_t i) {
        (void)PairingContext::setup(opt.level, "params-" + std::to_string(i)).serialize();
      });
      add_row(alg, "TA", base, ms, ElementCount{1, 1, 1, 1}, "n, g1, g2, e(g1,g2)", true);
      ctx.activate();
    } else if (alg == "HA_Keygen") {
      HaKeys k;
      auto ms = time_runs(opt.runs, [&](std::size_t) { k = ha_keygen(ctx, rng); });
      add_row(alg, "TA", base, ms, ElementCount{0, 1, 0, 0}, "pk_HA lives in G2", true);
    } else if (alg == "S_Keygen") {
      ServerKeys k;
      auto ms = time_runs(opt.runs, [&](std::size_t) { k = s_keygen(ctx, rng); });
      add_row(alg, "TA", base, ms, ServerPublicKey::elements(), "", true);
    } else if (alg == "Setup_ProxyGr") {
      ElementCount n;
      auto ms = time_runs(opt.runs, [&](std::size_t) { n = gsig_setup(ctx, rng).vk.elements(); });
      add_row(alg, "GM", base, ms, n, "vk_g: pk_g and CRS (U, V)", true);
    } else if (alg == "Join_ProxyGr") {
      bool ok = true;
      ElementCount proxy_side, gm_side;
      auto ms = time_runs(opt.runs, [&](std::size_t) {
        ProxyCredential c = gsig_join(ctx, f.gm, rng);
        proxy_side = c.pk().elements();
        gm_side = XsigSignature::elements();
        ok = ok && credential_valid(ctx, f.gm.vk, c);
      });
      add_row(alg, "P/GM", base, ms, proxy_side + gm_side,
              "P: " + proxy_side.describe() + " / GM: " + gm_side.describe(), ok);
    } else if (alg == "Set_UserID") {
      HealthAuthority ha(ctx, f.ha);
      auto ms = time_runs(opt.runs, [&](std::size_t) { (void)ha.set_user_id(rng); });
      add_row(alg, "HA", base, ms, ElementCount{0, 1, 0, 0}, "", true);
    } else if (alg == "Userkeygen") {
      auto ms = time_runs(opt.runs, [&](std::size_t) { (void)User::keygen(ctx, f.id_u, rng); });
      add_row(alg, "U", base, ms, ElementCount{0, 1, 0, 0}, "", true);
    } else if (alg == "Set_CCM") {
      bool ok = true;
      auto ms = time_runs(opt.runs, [&](std::size_t) { ok = ok && set_ccm(ctx, f.d_a, f.d_b) == f.ccm; });
      add_row(alg, "U", base, ms, ElementCount{0, 0, 0, 1}, "", ok);
    } else if (alg == "S_PSign") {
      PartialSignature p;
      auto ms = time_runs(opt.runs, [&](std::size_t) { p = s_psign(f.server, f.ccm, rng); });
      add_row(alg, "S", base, ms, ElementCount{0, 0, 0, 1}, "PS only; PS' stays at S", true);
    } else if (alg == "P_Sign") {
      // Outputs from equal seeds must match across variants.
      std::map<std::string, std::vector<Bytes>> outputs;
      for (const auto& v : opt.variants) {
        if (v.preprocess) continue;
        const Execution mode = v.parallel ? Execution::kParallel : Execution::kSequential;
        std::vector<Bytes>& outs = outputs[v.name()];
        ElementCount n;
        auto ms = time_runs(opt.runs, [&](std::size_t i) {
          Rng r("p-sign-run:" + std::to_string(i));
          auto out = p_sign(ctx, f.gm.vk, f.cred, f.id_u, f.ps.ps, r, mode);
          n = out.table_elements();
          outs.push_back(out.pi.to_bytes());
        });
        const bool consistent = outputs.begin()->second == outs;
        add_row(alg, "P", v, ms, n, "plus commitments " + f.signed_contact.commitment_elements().describe(),
                consistent);
      }
    } else if (alg == "Sig_Verify") {
      std::unique_ptr<PreparedGroupKey> prepared;
      for (const auto& v : opt.variants) {
        if (v.preprocess && !prepared) prepared = std::make_unique<PreparedGroupKey>(ctx, f.gm.vk);
        const GsigVerifyOptions vo{v.parallel ? Execution::kParallel : Execution::kSequential,
                                   v.preprocess ? prepared.get() : nullptr};
        bool ok = true;
        const G2Point wrong = f.signed_contact.m + ctx.g2();
        auto ms = time_runs(opt.runs, [&](std::size_t i) {
          // Alternate honest and wrong messages; verdicts must track them.
          const bool honest = i % 2 == 0;
          const bool v_ok = sig_verify(ctx, f.gm.vk, honest ? f.signed_contact.m : wrong, f.signed_contact.pi, vo);
          ok = ok && v_ok == honest;
        });
        add_row(alg, "HA", v, ms, std::nullopt, "N.A.", ok);
      }
    } else if (alg == "CCM_Verify") {
      bool ok = true;
      const ServerPublicKey pk = public_key(f.server);
      auto ms = time_runs(opt.runs,
                          [&](std::size_t) { ok = ok && ccm_verify(ctx, f.signed_contact.m, f.ps.ps_prime, pk, f.t_u); });
      add_row(alg, "HA", base, ms, std::nullopt, "N.A.", ok);
    }
  }
  return rep;
}

std::string BenchReport::table() const {
  std::vector<std::array<std::string, 8>> cells;
  cells.push_back({"Algorithm", "Entity", "Variant", "Runs", "Mean ms", "Stddev ms", "Communication", "OK"});
  for (const auto& r : rows) {
    std::string comm = r.has_comm ? r.comm.describe() : "N.A.";
    if (r.has_comm && !r.comm_note.empty()) comm += "  (" + r.comm_note + ")";
    cells.push_back({r.algorithm, r.entity, r.variant, std::to_string(r.runs), fmt(r.mean_ms), fmt(r.stddev_ms), comm,
                     r.consistent ? "yes" : "NO"});
  }
  std::array<std::size_t, 8> width{};
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out = "security level " + std::to_string(bits(level)) + " (" + std::string(curve_name(level)) +
                    "), hardware threads " + std::to_string(hardware_threads) + "\n";
  for (std::size_t k = 0; k < cells.size(); ++k) {
    for (std::size_t i = 0; i < cells[k].size(); ++i) {
      const bool numeric = i == 3 || i == 4 || i == 5;
      const std::string& c = cells[k][i];
      const std::string pad(width[i] - c.size(), ' ');
      out += numeric ? pad + c : c + (i + 1 < cells[k].size() ? pad : "");
      if (i + 1 < cells[k].size()) out += "  ";
    }
    out += '\n';
    if (k == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out += std::string(total - 2, '-') + '\n';
    }
  }
  return out;
}

Json BenchReport::to_json() const {
  Json rows_j = Json::array();
  for (const auto& r : rows) {
    Json row = {{"algorithm", r.algorithm}, {"entity", r.entity},       {"variant", r.variant},
                {"runs", r.runs},           {"mean_ms", r.mean_ms},     {"stddev_ms", r.stddev_ms},
                {"min_ms", r.min_ms},       {"consistent", r.consistent}};
    if (r.has_comm) {
      row["communication"] = {{"g1", r.comm.g1},
                              {"g2", r.comm.g2},
                              {"gt", r.comm.gt},
                              {"zn", r.comm.zn},
                              {"text", r.comm.describe()},
                              {"note", r.comm_note}};
    } else {
      row["communication"] = nullptr;
    }
    rows_j.push_back(std::move(row));
  }
  return {{"security_level", bits(level)},
          {"curve", std::string(curve_name(level))},
          {"runs", runs},
          {"hardware_threads", hardware_threads},
          {"rows", rows_j}};
}

}  // namespace spot
