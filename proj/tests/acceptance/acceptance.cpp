// Acceptance runner: one PASS/FAIL line per criterion.
//
//   spot_acceptance --criterion 3
//   spot_acceptance            (all)
//
// Exit status: 0 when every selected criterion passes, 1 on any failure,
// 77 when the only failure is a throughput check the host cannot run
// (fewer than 4 hardware threads).

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "csig_oracle.hpp"
#include "niwi_oracle.hpp"
#include "spot/bench.hpp"
#include "spot/entities.hpp"
#include "spot/errors.hpp"
#include "spot/simulator.hpp"
#include "spot/xsig.hpp"

using namespace spot;
using spot::testing::KnownExponentOracle;

namespace {

constexpr int kHostLimited = 77;

// Tolerances.
constexpr int kRoundTrips = 100;
constexpr int kGsigPairs = 50;
constexpr double kCompletenessBudgetSeconds = 300.0;
constexpr int kOracleInstances = 100;
constexpr int kTamperTrials = 50;
constexpr int kAdversarialPs = 100;
constexpr int kUnlinkEpochs = 100;
constexpr std::size_t kBenchRuns = 100;
constexpr double kDominanceFactor = 10.0;
constexpr double kCheapCeilingMs = 1.0;
constexpr double kMinSpeedup = 0.20;
constexpr unsigned kMinThreadsForSpeedup = 4;

struct Outcome {
  bool ok = true;
  bool host_limited = false;  // failed only on a check gated on core count
  std::vector<std::string> lines;

  void check(bool cond, const std::string& what) {
    lines.push_back(std::string(cond ? "  ok   " : "  BAD  ") + what);
    ok = ok && cond;
  }
  void note(const std::string& what) { lines.push_back("  ..   " + what); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string frac(int n, int d) { return std::to_string(n) + "/" + std::to_string(d); }

const PairingContext& ctx() {
  static const PairingContext c = PairingContext::setup(SecurityLevel::k112, "acceptance");
  return c;
}

template <class P>
P bump(const P& p, const Scalar& d) {
  return p + ctx().generator<P>() * d;
}

// Same, and teaches the oracle the new log.
template <class P>
P bump(KnownExponentOracle& o, const P& p, const Scalar& d) {
  P q = bump(p, d);
  o.record(q, o.log_or_throw(p) + d);
  return q;
}

template <class Base, class Opp>
std::vector<Opp> random_points(std::size_t k, Rng& rng) {
  std::vector<Opp> m;
  for (std::size_t i = 0; i < k; ++i) m.push_back(ctx().generator<Opp>() * rng.next_scalar());
  return m;
}

// ---------------------------------------------------------------- 1

template <class Base, class Opp>
int csig_round_trips(std::size_t k, Rng& rng) {
  using C = Csig<Base, Opp>;
  auto sk = C::keygen(ctx(), k, rng);
  int ok = 0;
  for (int i = 0; i < kRoundTrips; ++i) {
    auto m = random_points<Base, Opp>(k, rng);
    ok += C::verify(ctx(), sk.pk, m, C::sign(ctx(), sk, m, rng));
  }
  return ok;
}

Outcome criterion_completeness() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  Rng rng("acceptance-completeness");
  for (std::size_t k : {1u, 2u, 7u}) {
    out.check(csig_round_trips<G1Point, G2Point>(k, rng) == kRoundTrips,
              "csig signs G2, k=" + std::to_string(k) + ": " + frac(kRoundTrips, kRoundTrips) + " required");
    out.check(csig_round_trips<G2Point, G1Point>(k, rng) == kRoundTrips,
              "csig signs G1, k=" + std::to_string(k) + ": " + frac(kRoundTrips, kRoundTrips) + " required");
  }

  auto xsk = xsig_keygen(ctx(), 6, 2, rng);
  int xok = 0;
  for (int i = 0; i < kRoundTrips; ++i) {
    auto m1 = random_points<G2Point, G1Point>(6, rng);
    auto m2 = random_points<G1Point, G2Point>(2, rng);
    xok += xsig_verify(ctx(), xsk.pk(), m1, m2, xsig_sign(ctx(), xsk, m1, m2, rng));
  }
  out.check(xok == kRoundTrips, "xsig (6,2): " + frac(xok, kRoundTrips));

  KnownExponentOracle o(ctx(), Rng("acceptance-niwi"));
  int nok = 0;
  std::set<std::size_t> eq_counts;
  for (int i = 0; i < kRoundTrips; ++i) {
    auto in = testing::random_niwi_instance(o, 4, 4);
    eq_counts.insert(in.st.equations.size());
    nok += niwi_verify(ctx(), in.crs, in.st, niwi_prove(ctx(), in.crs, in.st, in.w, rng));
  }
  out.check(nok == kRoundTrips, "niwi random systems: " + frac(nok, kRoundTrips));
  out.check(eq_counts == std::set<std::size_t>{1, 2, 3, 4}, "niwi systems cover 1..4 equations");

  auto gm = gsig_setup(ctx(), rng);
  std::vector<ProxyCredential> creds = {gsig_join(ctx(), gm, rng), gsig_join(ctx(), gm, rng)};
  int gok = 0;
  for (int i = 0; i < kGsigPairs; ++i) {
    G2Point m = ctx().g2() * rng.next_scalar();
    gok += gsig_verify(ctx(), gm.vk, m, gsig_sign(ctx(), gm.vk, creds[i % 2], m, rng).pi);
  }
  out.check(gok == kGsigPairs, "gsig credential/message pairs: " + frac(gok, kGsigPairs));

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.check(secs < kCompletenessBudgetSeconds,
            "runtime " + fmt("%.1f", secs) + " s < " + fmt("%.0f", kCompletenessBudgetSeconds) + " s (" +
                std::to_string(std::thread::hardware_concurrency()) + " hardware threads)");
  return out;
}

// ---------------------------------------------------------------- 2

struct Tally {
  int instances = 0, mismatches = 0, accepted = 0;
  void add(bool by_pairing, bool by_scalar) {
    ++instances;
    mismatches += by_pairing != by_scalar;
    accepted += by_scalar;
  }
  std::string text() const {
    return std::to_string(instances) + " instances, " + std::to_string(accepted) + " valid, " +
           std::to_string(mismatches) + " mismatches";
  }
};

// Csig signature over a message whose logs the oracle knows; records the key
// and signature logs as computed from scalars.
template <class Base, class Opp>
CsigSignature<Base, Opp> sign_known(KnownExponentOracle& o, const CsigKeyExponents& e,
                                    const CsigSecretKey<Base, Opp>& sk, const std::vector<Opp>& msg, bool& match) {
  auto x = CsigSignRandomness::random(o.rng());
  auto sig = Csig<Base, Opp>::sign_with(ctx(), sk, msg, x);
  auto base = [&](const Base& p, const Scalar& l) { match = match && p == o.make<Base>(l); };
  auto opp = [&](const Opp& p, const Scalar& l) { match = match && p == o.make<Opp>(l); };
  base(sk.pk.gr, e.gr_log);
  base(sk.pk.hu, e.hu_log);
  base(sk.pk.gz, e.gr_log * e.gamma_z);
  base(sk.pk.hz, e.hu_log * e.delta_z);
  opp(sk.pk.a_pub, e.alpha);
  opp(sk.pk.b_pub, e.beta);
  Scalar r = e.alpha - x.rho * x.tau - e.gamma_z * x.zeta;
  Scalar u = e.beta - x.phi * x.omega - e.delta_z * x.zeta;
  for (std::size_t i = 0; i < msg.size(); ++i) {
    base(sk.pk.g[i], e.gr_log * e.gammas[i]);
    base(sk.pk.h[i], e.hu_log * e.deltas[i]);
    r = r - o.log_or_throw(msg[i]) * e.gammas[i];
    u = u - o.log_or_throw(msg[i]) * e.deltas[i];
  }
  opp(sig.z, x.zeta);
  opp(sig.r, r);
  base(sig.s, e.gr_log * x.rho);
  opp(sig.t, x.tau);
  opp(sig.u, u);
  base(sig.v, e.hu_log * x.phi);
  opp(sig.w, x.omega);
  return sig;
}

// Both csig equations, honest or with one component moved: r only enters
// the first equation, u only the second.
template <class Base, class Opp>
void csig_equivalence(KnownExponentOracle& o, int trial, Tally& first, Tally& second, Tally& whole, bool& match) {
  auto in = testing::make_csig_instance<Base, Opp>(o, 1 + o.rng().uniform(7));
  match = match && in.points_match;
  auto sig = in.sig;
  auto msg = in.msg;
  const Scalar d = o.random_scalar();
  switch (trial % 5) {
    case 1: sig.r = bump(o, sig.r, d); break;
    case 2: sig.u = bump(o, sig.u, d); break;
    case 3: sig.s = bump(o, sig.s, d); break;
    case 4: {
      const std::size_t i = o.rng().uniform(msg.size());
      msg[i] = bump(o, msg[i], d);
      break;
    }
    default: break;
  }
  auto eqs = testing::csig_terms(in.sk.pk, msg, sig);
  const bool e1 = o.holds_in_exponent(eqs[0], GtElement::one());
  const bool e2 = o.holds_in_exponent(eqs[1], GtElement::one());
  first.add(o.holds_with_pairings(eqs[0], GtElement::one()), e1);
  second.add(o.holds_with_pairings(eqs[1], GtElement::one()), e2);
  whole.add(Csig<Base, Opp>::verify(ctx(), in.sk.pk, msg, sig), e1 && e2);
}

Outcome criterion_oracle() {
  Outcome out;
  KnownExponentOracle o(ctx(), Rng("acceptance-oracle"));
  bool match = true;

  Tally first, second, whole;
  for (int i = 0; i < kOracleInstances; ++i) {
    if (i % 2 == 0) {
      csig_equivalence<G1Point, G2Point>(o, i / 2, first, second, whole, match);
    } else {
      csig_equivalence<G2Point, G1Point>(o, i / 2, first, second, whole, match);
    }
  }
  out.check(first.mismatches == 0, "csig first equation: " + first.text());
  out.check(second.mismatches == 0, "csig second equation: " + second.text());
  out.check(whole.mismatches == 0, "csig verify: " + whole.text());

  // ccm_verify: log M = t (PS' y1 + y2).
  Tally ccm;
  for (int i = 0; i < kOracleInstances; ++i) {
    Rng& rng = o.rng();
    auto keys = s_keygen(ctx(), rng);
    const Scalar t = rng.next_nonzero_scalar();
    const Scalar c = rng.next_scalar();
    auto ps = s_psign(keys, c, rng);
    Scalar m_log = t * ps.ps;
    Scalar ps_prime = ps.ps_prime;
    Scalar t_claim = t;
    const Scalar d = rng.next_nonzero_scalar();
    switch (i % 4) {
      case 1: m_log = m_log + d; break;
      case 2: ps_prime = ps_prime + d; break;
      case 3: t_claim = t_claim + d; break;
      default: break;
    }
    const G2Point m = o.g2(m_log);
    const bool by_scalar = m_log == t_claim * ps_prime * keys.y1 + t_claim * keys.y2;
    ccm.add(ccm_verify(ctx(), m, ps_prime, public_key(keys), t_claim), by_scalar);
  }
  out.check(ccm.mismatches == 0, "ccm_verify: " + ccm.text());

  // Per-equation proof verification.
  Tally niwi;
  for (int i = 0; i < kOracleInstances; ++i) {
    auto in = testing::random_niwi_instance(o);
    auto rnd = NiwiRandomness::random(in.w.x.size(), in.w.y.size(), o.rng());
    auto proof = niwi_prove_with(ctx(), in.crs, in.st, in.w, rnd);
    match = match && testing::proof_points_match(o, in, rnd, proof);
    if (i % 2 == 1) {
      const Scalar d = o.random_scalar();
      if (i % 4 == 1 && !proof.c.empty()) {
        auto& p = proof.c[o.rng().uniform(proof.c.size())];
        p = bump(o, p, d);
      } else if (!proof.d.empty()) {
        auto& q = proof.d[o.rng().uniform(proof.d.size())];
        q = bump(o, q, d);
      }
    }
    auto verdicts = niwi_verify_each(ctx(), in.crs, in.st, proof);
    for (std::size_t e = 0; e < verdicts.size(); ++e) {
      niwi.add(verdicts[e], o.holds_in_exponent(testing::niwi_verify_terms(in.crs, in.st.equations[e], proof, e),
                                                in.st.equations[e].target));
    }
  }
  out.check(niwi.mismatches == 0, "proof equations: " + niwi.text());

  // xsig: the G1 half signs m1 || s, s taken from the G2 half.
  Tally chain;
  for (int i = 0; i < kOracleInstances; ++i) {
    auto inner = testing::make_csig_instance<G1Point, G2Point>(o, 2);
    match = match && inner.points_match;
    auto e1 = CsigKeyExponents::random(7, o.rng());
    auto sk1 = CsigSignsG1::derive(ctx(), e1);
    std::vector<G1Point> m1;
    for (int j = 0; j < 6; ++j) m1.push_back(o.random_g1());
    m1.push_back(inner.sig.s);
    auto sigma1 = sign_known(o, e1, sk1, m1, match);
    XsigPublicKey pk{sk1.pk, inner.sk.pk};
    XsigSignature sig{sigma1, inner.sig};
    std::vector<G1Point> m1_only(m1.begin(), m1.end() - 1);
    auto m2 = inner.msg;
    const Scalar d = o.random_scalar();
    switch (i % 4) {
      case 1: sig.sigma2.s = o.random_g1(); break;  // foreign chained element
      case 2: m1_only[o.rng().uniform(6)] = o.random_g1(); break;
      case 3: {
        const std::size_t j = o.rng().uniform(2);
        m2[j] = bump(o, m2[j], d);
        break;
      }
      default: break;
    }
    auto full = m1_only;
    full.push_back(sig.sigma2.s);
    const bool by_scalar = testing::csig_holds_in_exponent(o, sk1.pk, full, sig.sigma1) &&
                           testing::csig_holds_in_exponent(o, inner.sk.pk, m2, sig.sigma2);
    chain.add(xsig_verify(ctx(), pk, m1_only, m2, sig), by_scalar);
  }
  out.check(chain.mismatches == 0, "xsig chaining: " + chain.text());
  out.check(match, "every generated point equals the generator to its scalar-computed log");
  return out;
}

// ---------------------------------------------------------------- 3

class TamperTable {
 public:
  void add(const std::string& component, bool rejected) {
    auto& [r, n] = counts_[component];
    r += rejected;
    ++n;
  }
  void report(Outcome& out, const std::string& scheme) const {
    int worst = kTamperTrials;
    std::string worst_name;
    bool ok = true;
    for (const auto& [name, c] : counts_) {
      if (worst_name.empty() || c.first < worst) {
        worst = c.first;
        worst_name = name;
      }
      if (c.first < kTamperTrials || c.second < kTamperTrials) {
        ok = false;
        out.note(scheme + " " + name + ": " + frac(c.first, c.second));
      }
    }
    out.check(ok, scheme + ": " + std::to_string(counts_.size()) + " components, each rejected in >= " +
                      frac(kTamperTrials, kTamperTrials) + " trials (lowest " + worst_name + " " +
                      frac(worst, kTamperTrials) + ")");
  }

 private:
  std::map<std::string, std::pair<int, int>> counts_;
};

template <class Base, class Opp>
void tamper_csig(Outcome& out, const std::string& label, Rng& rng) {
  using C = Csig<Base, Opp>;
  TamperTable table;
  auto sk = C::keygen(ctx(), 2, rng);
  for (int t = 0; t < kTamperTrials; ++t) {
    auto m = random_points<Base, Opp>(2, rng);
    auto sig = C::sign(ctx(), sk, m, rng);
    const Scalar d = rng.next_nonzero_scalar();
    auto try_sig = [&](const std::string& name, auto member) {
      auto bad = sig;
      bad.*member = bump(bad.*member, d);
      table.add(name, !C::verify(ctx(), sk.pk, m, bad));
    };
    try_sig("z", &C::Signature::z);
    try_sig("r", &C::Signature::r);
    try_sig("s", &C::Signature::s);
    try_sig("t", &C::Signature::t);
    try_sig("u", &C::Signature::u);
    try_sig("v", &C::Signature::v);
    try_sig("w", &C::Signature::w);
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto bad = m;
      bad[i] = bump(bad[i], d);
      table.add("m[" + std::to_string(i) + "]", !C::verify(ctx(), sk.pk, bad, sig));
    }
  }
  table.report(out, label);
}

void tamper_xsig(Outcome& out, Rng& rng) {
  using S1 = CsigSignature<G2Point, G1Point>;
  using S2 = CsigSignature<G1Point, G2Point>;
  TamperTable table;
  auto sk = xsig_keygen(ctx(), 6, 2, rng);
  const auto pk = sk.pk();
  for (int t = 0; t < kTamperTrials; ++t) {
    auto m1 = random_points<G2Point, G1Point>(6, rng);
    auto m2 = random_points<G1Point, G2Point>(2, rng);
    auto sig = xsig_sign(ctx(), sk, m1, m2, rng);
    const Scalar d = rng.next_nonzero_scalar();
    auto one = [&](const std::string& name, auto member) {
      auto bad = sig;
      bad.sigma1.*member = bump(bad.sigma1.*member, d);
      table.add("sigma1." + name, !xsig_verify(ctx(), pk, m1, m2, bad));
    };
    auto two = [&](const std::string& name, auto member) {
      auto bad = sig;
      bad.sigma2.*member = bump(bad.sigma2.*member, d);
      table.add("sigma2." + name, !xsig_verify(ctx(), pk, m1, m2, bad));
    };
    one("z", &S1::z), one("r", &S1::r), one("s", &S1::s), one("t", &S1::t);
    one("u", &S1::u), one("v", &S1::v), one("w", &S1::w);
    two("z", &S2::z), two("r", &S2::r), two("s", &S2::s), two("t", &S2::t);
    two("u", &S2::u), two("v", &S2::v), two("w", &S2::w);
    for (std::size_t i = 0; i < m1.size(); ++i) {
      auto bad = m1;
      bad[i] = bump(bad[i], d);
      table.add("m1[" + std::to_string(i) + "]", !xsig_verify(ctx(), pk, bad, m2, sig));
    }
    for (std::size_t i = 0; i < m2.size(); ++i) {
      auto bad = m2;
      bad[i] = bump(bad[i], d);
      table.add("m2[" + std::to_string(i) + "]", !xsig_verify(ctx(), pk, m1, bad, sig));
    }
  }
  table.report(out, "xsig (6,2)");
}

void tamper_gsig(Outcome& out, const GroupManagerKey& gm, const ProxyCredential& cred, Rng& rng) {
  TamperTable table;
  PreparedGroupKey prepared(ctx(), gm.vk);
  const GsigVerifyOptions opt{Execution::kSequential, &prepared};
  for (int t = 0; t < kTamperTrials; ++t) {
    G2Point m = ctx().g2() * rng.next_scalar();
    auto pi = gsig_sign(ctx(), gm.vk, cred, m, rng).pi;
    const Scalar d = rng.next_nonzero_scalar();
    for (std::size_t i = 0; i < pi.proof.c.size(); ++i) {
      auto bad = pi;
      bad.proof.c[i] = bump(bad.proof.c[i], d);
      table.add("c[" + std::to_string(i) + "]", !gsig_verify(ctx(), gm.vk, m, bad, opt));
    }
    for (std::size_t j = 0; j < pi.proof.d.size(); ++j) {
      auto bad = pi;
      bad.proof.d[j] = bump(bad.proof.d[j], d);
      table.add("d[" + std::to_string(j) + "]", !gsig_verify(ctx(), gm.vk, m, bad, opt));
    }
    for (std::size_t e = 0; e < pi.proof.eq.size(); ++e) {
      auto bad = pi;
      bad.proof.eq[e].pi = bump(bad.proof.eq[e].pi, d);
      table.add("pi[" + std::to_string(e) + "]", !gsig_verify(ctx(), gm.vk, m, bad, opt));
      bad = pi;
      bad.proof.eq[e].theta = bump(bad.proof.eq[e].theta, d);
      table.add("theta[" + std::to_string(e) + "]", !gsig_verify(ctx(), gm.vk, m, bad, opt));
    }
    table.add("message", !gsig_verify(ctx(), gm.vk, bump(m, d), pi, opt));
  }
  table.report(out, "group signature");
}

void tamper_protocol(Outcome& out, const GroupManagerKey& gm, const std::vector<Proxy>& proxies, Rng& rng) {
  TamperTable partial, published, entry;
  ProtocolConfig cfg;
  auto ha = HealthAuthority::keygen(ctx(), rng, cfg);
  Server server = Server::keygen(ctx(), rng, cfg);
  auto rec = ha.set_user_id(rng);
  auto peer_rec = ha.set_user_id(rng);
  ha.set_status(rec.id, HealthStatus::kInfected);
  User user = User::keygen(ctx(), rec.id, rng);
  User peer = User::keygen(ctx(), peer_rec.id, rng);
  auto keys = s_keygen(ctx(), rng);
  auto hak = ha_keygen(ctx(), rng);

  for (int t = 0; t < kTamperTrials; ++t) {
    const Scalar d = rng.next_nonzero_scalar();

    // Partial signature as checked by ccm_verify.
    const Scalar c = rng.next_scalar();
    auto ps = s_psign(keys, c, rng);
    const G2Point m = rec.id * ps.ps;
    partial.add("M", !ccm_verify(ctx(), bump(m, d), ps.ps_prime, public_key(keys), rec.t_u));
    partial.add("PS", !ccm_verify(ctx(), rec.id * (ps.ps + d), ps.ps_prime, public_key(keys), rec.t_u));
    partial.add("PS'", !ccm_verify(ctx(), m, ps.ps_prime + d, public_key(keys), rec.t_u));

    // Published set.
    std::vector<Scalar> ccms = {rng.next_scalar(), rng.next_scalar(), rng.next_scalar()};
    auto vs = ha_publish(ctx(), hak, ccms);
    auto bad = vs;
    bad.signature = bump(bad.signature, d);
    published.add("signature", !verify_published(ctx(), hak.pk, bad));
    bad = vs;
    const std::size_t i = rng.uniform(bad.ccms.size());
    bad.ccms[i] = bad.ccms[i] + d;
    std::sort(bad.ccms.begin(), bad.ccms.end());
    published.add("ccm list", !verify_published(ctx(), hak.pk, bad));

    // A contact entry as submitted to the authority.
    user.rotate(t, rng);
    peer.rotate(t, rng);
    const std::int64_t now = 1000 + t * 900;
    const Scalar ccm = set_ccm(ctx(), user.ebid(), peer.ebid());
    server.ingest(ccm, "P1", now, rng);
    auto res = server.ingest(ccm, "P2", now + 1, rng);
    if (!res.ps) throw ProtocolError("contact not matched");
    auto signed_out = proxies[0].sign_for(ctx(), gm.vk, user.id(), *res.ps, rng);
    ContactEntry e{ccm, signed_out.m, signed_out.pi, now, 600};
    auto verdict = [&](const ContactEntry& x) {
      return ha.verify_contact_list(server, gm.vk, user.id(), {x}).entries.at(0).outcome;
    };
    const bool honest = verdict(e) == EntryOutcome::kAccepted;
    auto be = e;
    be.ccm = be.ccm + d;
    entry.add("ccm", honest && verdict(be) != EntryOutcome::kAccepted);
    be = e;
    be.m = bump(be.m, d);
    entry.add("M", honest && verdict(be) != EntryOutcome::kAccepted);
    be = e;
    be.pi.proof.eq[rng.uniform(be.pi.proof.eq.size())].theta += ctx().g1() * d;
    entry.add("pi", honest && verdict(be) != EntryOutcome::kAccepted);
  }
  partial.report(out, "partial signature");
  published.report(out, "published set");
  entry.report(out, "contact entry at the authority (honest copy accepted)");
}

Outcome criterion_tamper() {
  Outcome out;
  Rng rng("acceptance-tamper");
  tamper_csig<G1Point, G2Point>(out, "csig signs G2", rng);
  tamper_csig<G2Point, G1Point>(out, "csig signs G1", rng);
  tamper_xsig(out, rng);
  auto gm = gsig_setup(ctx(), rng);
  std::vector<Proxy> proxies;
  proxies.emplace_back("P1", gsig_join(ctx(), gm, rng));
  tamper_gsig(out, gm, proxies[0].credential(), rng);
  tamper_protocol(out, gm, proxies, rng);
  return out;
}

// ---------------------------------------------------------------- 4

Outcome criterion_scenario(const std::string& path) {
  Outcome out;
  std::ifstream in(path);
  if (!in) throw MissingState("cannot open " + path);
  const Scenario sc = Scenario::from_json(Json::parse(in));
  out.check(sc.users == 10 && sc.primary.size() + sc.secondary.size() == 3 && sc.epochs == 20 &&
                sc.contacts.size() == 30 && sc.infections.size() == 2,
            "scenario shape: 10 users, 3 proxies in two subsets, 20 epochs, 30 contacts, 2 infections");

  const auto res = run_scenario(sc);
  const auto cfg = sc.config;

  // Accepted entries per infected user, and refusals.
  std::set<std::string> infected;
  std::set<std::vector<std::uint8_t>> expected_ccms;
  bool honest_all = true, refused_all = true;
  std::size_t infected_entries = 0;
  for (const auto& s : res.submissions) {
    if (s.infected) {
      infected.insert(s.user);
      honest_all = honest_all && s.verdict.status == ListStatus::kVerified &&
                   s.verdict.entries.size() == s.submitted && s.verdict.accepted_count() == s.submitted;
      infected_entries += s.submitted;
      for (const auto& c : res.contacts) {
        if (c.status != "stored" || !c.ccm) continue;
        if ((c.a == s.user || c.b == s.user) && c.time <= s.time && s.time - c.time <= cfg.delta_seconds()) {
          expected_ccms.insert(c.ccm->to_bytes());
        }
      }
    } else {
      refused_all = refused_all && s.verdict.status == ListStatus::kUserHealthy && s.verdict.entries.empty();
    }
  }
  out.check(infected.size() == 2 && infected_entries > 0 && honest_all,
            "every honest entry of the infected users is accepted (" + std::to_string(infected_entries) +
                " entries)");
  const auto healthy_count = std::count_if(res.submissions.begin(), res.submissions.end(),
                                           [](const SubmissionRecord& s) { return !s.infected; });
  out.check(healthy_count == static_cast<long>(sc.healthy_submissions.size()) && healthy_count > 0 && refused_all,
            "every healthy submission is refused (" + std::to_string(healthy_count) + ")");

  std::set<std::vector<std::uint8_t>> published;
  for (const auto& c : res.published.ccms) published.insert(c.to_bytes());
  out.check(published == expected_ccms, "published set equals the CCMs recomputed from contact records (" +
                                            std::to_string(published.size()) + ")");
  out.check(verify_published(res.world.ctx(), res.world.ha().pk(), res.published), "published set signature");

  std::set<std::string> exposed;
  for (const auto& c : res.contacts) {
    if (c.status == "stored" && c.ccm && expected_ccms.count(c.ccm->to_bytes())) {
      exposed.insert(c.a);
      exposed.insert(c.b);
    }
  }
  bool exact = res.risk.size() == sc.users;
  std::string positives;
  for (const auto& [name, r] : res.risk) {
    exact = exact && ((r.score > 0) == (exposed.count(name) > 0));
    if (r.score > 0) positives += " " + name;
  }
  out.check(exact, "risk > 0 exactly for users sharing an accepted CCM:" + positives);
  out.check(exposed.size() > infected.size(), "at least one non-infected user is exposed");

  const auto again = run_scenario(sc);
  out.check(again.report() == res.report(), "rerun under the same seed gives an identical report");
  return out;
}

// ---------------------------------------------------------------- 5

Outcome criterion_security() {
  Outcome out;
  Rng rng("acceptance-security");
  ProtocolConfig cfg;

  // (a) Forged PS values.
  {
    auto keys = s_keygen(ctx(), rng);
    const Scalar t_u = rng.next_nonzero_scalar();
    const G2Point id = ctx().g2() * t_u;
    const Scalar ccm = rng.next_scalar();
    auto target = s_psign(keys, ccm, rng);
    const bool honest = ccm_verify(ctx(), id * target.ps, target.ps_prime, public_key(keys), t_u);
    std::vector<Scalar> observed;
    for (int i = 0; i < 8; ++i) observed.push_back(s_psign(keys, rng.next_scalar(), rng).ps);
    int rejected = 0;
    for (int i = 0; i < kAdversarialPs; ++i) {
      Scalar forged;
      if (i < kAdversarialPs / 2) {
        forged = rng.next_scalar();
      } else {
        const auto& a = observed[rng.uniform(observed.size())];
        const auto& b = observed[rng.uniform(observed.size())];
        const auto& c = observed[rng.uniform(observed.size())];
        switch (i % 4) {
          case 0: forged = a + b; break;
          case 1: forged = a - b + c; break;
          case 2: forged = Scalar::from_u64(2 + rng.uniform(5)) * a - b; break;
          default: forged = a + b + c; break;
        }
      }
      rejected += !ccm_verify(ctx(), id * forged, target.ps_prime, public_key(keys), t_u);
    }
    out.check(honest && rejected == kAdversarialPs,
              "(a) forged PS values rejected by ccm_verify: " + frac(rejected, kAdversarialPs));
  }

  auto gm = gsig_setup(ctx(), rng);
  Proxy p1("P1", gsig_join(ctx(), gm, rng)), p2("P2", gsig_join(ctx(), gm, rng));
  auto ha = HealthAuthority::keygen(ctx(), rng, cfg);
  Server server = Server::keygen(ctx(), rng, cfg);
  auto ra = ha.set_user_id(rng);
  auto rb = ha.set_user_id(rng);
  User a = User::keygen(ctx(), ra.id, rng), b = User::keygen(ctx(), rb.id, rng);
  a.rotate(0, rng);
  b.rotate(0, rng);
  const std::int64_t t0 = 1000;
  const Scalar ccm = set_ccm(ctx(), a.ebid(), b.ebid());
  server.ingest(ccm, "P1", t0, rng);
  auto res = server.ingest(ccm, "P2", t0 + 1, rng);
  if (!res.ps) throw ProtocolError("contact not matched");
  auto oa = p1.sign_for(ctx(), gm.vk, a.id(), *res.ps, rng);
  const std::vector<ContactEntry> list = {{ccm, oa.m, oa.pi, t0, 900}};
  ha.set_status(a.id(), HealthStatus::kInfected);

  // (c) Duplicate CCM inside the retention window.
  {
    const std::int64_t day = 86400;
    bool all = true;
    for (std::int64_t at : {t0 + 10, t0 + day, t0 + (cfg.delta_days - 1) * day}) {
      all = all && server.ingest(ccm, "P1", at, rng).status == IngestStatus::kRejected;
      all = all && server.ingest(ccm, "P2", at + 1, rng).status == IngestStatus::kRejected;
    }
    out.check(all && server.lookup(ccm)->ps == *res.ps,
              "(c) the same CCM re-sent within the window is rejected and the record is unchanged");
  }

  // (b) Replay after the retention purge.
  {
    const bool before = ha.verify_contact_list(server, gm.vk, a.id(), list).entries.at(0).accepted();
    // Stored when the second copy arrived, at t0 + 1.
    const std::int64_t stored_at = t0 + 1;
    server.purge_expired(stored_at + cfg.delta_seconds());
    const bool at_edge = server.lookup(ccm).has_value();
    server.purge_expired(stored_at + cfg.delta_seconds() + 1);
    const auto after = ha.verify_contact_list(server, gm.vk, a.id(), list).entries.at(0).outcome;
    out.check(before && at_edge && after == EntryOutcome::kNoServerRecord,
              "(b) accepted before the purge, replay after it rejected: " + std::string(to_string(after)));
  }

  // (d) One fresh CCM per epoch for a fixed pair.
  {
    std::set<Bytes> seen;
    for (int e = 1; e <= kUnlinkEpochs; ++e) {
      a.rotate(e, rng);
      b.rotate(e, rng);
      seen.insert(set_ccm(ctx(), a.ebid(), b.ebid()).to_bytes());
    }
    out.check(seen.size() == static_cast<std::size_t>(kUnlinkEpochs),
              "(d) distinct CCMs for one pair over " + std::to_string(kUnlinkEpochs) +
                  " epochs: " + std::to_string(seen.size()));
  }
  return out;
}

// ---------------------------------------------------------------- 6

Outcome criterion_bench() {
  Outcome out;
  BenchOptions opt;
  opt.runs = kBenchRuns;
  opt.variants = BenchVariant::all();
  const auto rep = run_bench(opt);
  out.note("hardware threads: " + std::to_string(rep.hardware_threads) + ", runs per row: " +
           std::to_string(rep.runs));
  auto mean = [&](const char* alg, const char* variant = "baseline") {
    const auto* r = rep.find(alg, variant);
    if (!r) throw ProtocolError(std::string("bench row missing: ") + alg + " " + variant);
    return r->mean_ms;
  };

  const double heavy = std::min(mean("P_Sign"), mean("Sig_Verify"));
  const double light = std::max({mean("Set_CCM"), mean("S_PSign"), mean("CCM_Verify")});
  out.check(heavy >= kDominanceFactor * light,
            "(i) min(P_Sign, Sig_Verify) " + fmt("%.3f", heavy) + " ms >= " + fmt("%.0f", kDominanceFactor) +
                " x max(Set_CCM, S_PSign, CCM_Verify) " + fmt("%.4f", light) + " ms (ratio " +
                fmt("%.0f", heavy / light) + ")");
  out.check(mean("Set_CCM") < kCheapCeilingMs && mean("S_PSign") < kCheapCeilingMs,
            "(ii) Set_CCM " + fmt("%.4f", mean("Set_CCM")) + " ms, S_PSign " + fmt("%.4f", mean("S_PSign")) +
                " ms, both < 1 ms");

  bool consistent = true;
  for (const auto& r : rep.rows) consistent = consistent && r.consistent;
  out.check(consistent, "variants give the same outputs and verdicts as baseline");

  const double sv = 1.0 - mean("Sig_Verify", "mt") / mean("Sig_Verify");
  const double ps = 1.0 - mean("P_Sign", "mt") / mean("P_Sign");
  out.note("pre: Sig_Verify " + fmt("%+.1f%%", 100 * (1.0 - mean("Sig_Verify", "pre") / mean("Sig_Verify"))) +
           ", mt+pre " + fmt("%+.1f%%", 100 * (1.0 - mean("Sig_Verify", "mt+pre") / mean("Sig_Verify"))));
  const bool enough_cores = rep.hardware_threads >= kMinThreadsForSpeedup;
  const bool fast = sv >= kMinSpeedup && ps >= kMinSpeedup;
  out.check(enough_cores && fast, "(iii) multithreaded speedup >= 20%: Sig_Verify " + fmt("%+.1f%%", 100 * sv) +
                                      ", P_Sign " + fmt("%+.1f%%", 100 * ps) + "; needs >= " +
                                      std::to_string(kMinThreadsForSpeedup) + " hardware threads, host has " +
                                      std::to_string(rep.hardware_threads));
  // Only (iii) failing, and only for lack of cores.
  if (!out.ok && !enough_cores) {
    out.host_limited = true;
    for (const auto& l : out.lines) {
      if (l.rfind("  BAD ", 0) == 0 && l.find("(iii)") == std::string::npos) out.host_limited = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------- 7

void communication_at(Outcome& out, SecurityLevel level) {
  const auto c = PairingContext::setup(level, "acceptance-comm");
  c.activate();
  const std::string tag = " [" + std::to_string(bits(level)) + "-bit]";
  Rng rng("acceptance-comm");
  const std::size_t g1 = c.g1_size(), g2 = c.g2_size(), zn = c.scalar_size();

  auto sk = s_keygen(c, rng);
  out.check(public_key(sk).to_bytes().size() == 2 * g2 && ServerPublicKey::elements() == ElementCount{0, 2, 0, 0},
            "S_Keygen: 2|G2| = " + std::to_string(2 * g2) + " bytes" + tag);
  auto hk = ha_keygen(c, rng);
  out.check(hk.pk.to_bytes().size() == g2, "HA_Keygen: one element (|G2| = " + std::to_string(g2) + " bytes)" + tag);
  const Scalar ccm = set_ccm(c, Ebid::random(rng), Ebid::random(rng));
  out.check(ccm.to_bytes().size() == zn, "Set_CCM: |Zn| = " + std::to_string(zn) + " bytes" + tag);
  auto ps = s_psign(sk, ccm, rng);
  out.check(ps.ps.to_bytes().size() == zn, "S_PSign: |Zn| to the proxy" + tag);

  auto gm = gsig_setup(c, rng);
  auto cred = gsig_join(c, gm, rng);
  const G2Point id = c.g2() * rng.next_nonzero_scalar();
  auto out_sig = p_sign(c, gm.vk, cred, id, ps.ps, rng);
  std::size_t table_bytes = out_sig.m.to_bytes().size();
  for (const auto& e : out_sig.pi.proof.eq) table_bytes += e.pi.to_bytes().size() + e.theta.to_bytes().size();
  out.check(out_sig.table_elements() == ElementCount{6, 7, 0, 0} && table_bytes == 6 * g1 + 7 * g2,
            "P_Sign: 6|G1| + 7|G2| = " + std::to_string(table_bytes) + " bytes, commitments " +
                out_sig.commitment_elements().describe() + " counted separately" + tag);
}

Outcome criterion_communication() {
  Outcome out;
  BenchOptions opt;
  opt.runs = 1;
  const auto rep = run_bench(opt);
  auto row = [&](const char* alg) -> const BenchRow& {
    const auto* r = rep.find(alg);
    if (!r) throw ProtocolError(std::string("bench row missing: ") + alg);
    return *r;
  };
  auto total = [](const ElementCount& e) { return e.g1 + e.g2 + e.gt + e.zn; };
  out.check(row("S_Keygen").comm == ElementCount{0, 2, 0, 0}, "bench S_Keygen " + row("S_Keygen").comm.describe());
  out.check(total(row("HA_Keygen").comm) == 1, "bench HA_Keygen " + row("HA_Keygen").comm.describe());
  out.check(row("Set_CCM").comm == ElementCount{0, 0, 0, 1}, "bench Set_CCM " + row("Set_CCM").comm.describe());
  out.check(row("S_PSign").comm == ElementCount{0, 0, 0, 1}, "bench S_PSign " + row("S_PSign").comm.describe());
  out.check(row("P_Sign").comm == ElementCount{6, 7, 0, 0}, "bench P_Sign " + row("P_Sign").comm.describe());
  out.note("Join_ProxyGr " + row("Join_ProxyGr").comm.describe() + " (" + row("Join_ProxyGr").comm_note +
           "), documented deviation");
  communication_at(out, SecurityLevel::k112);
  communication_at(out, SecurityLevel::k128);
  ctx().activate();
  return out;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPOT acceptance checks"};
  int only = 0;
  std::string scenario = SPOT_SCENARIO_DIR "/ten_users.json";
  app.add_option("--criterion", only, "run one criterion (1-7); default all")->check(CLI::Range(0, 7));
  app.add_option("--scenario", scenario, "scenario file for criterion 4");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "crypto completeness", criterion_completeness},
      {2, "exponent-oracle equivalence", criterion_oracle},
      {3, "tamper suite", criterion_tamper},
      {4, "end-to-end scenario", [&] { return criterion_scenario(scenario); }},
      {5, "security-property surrogates", criterion_security},
      {6, "bench ordering and speedup", criterion_bench},
      {7, "communication accounting", criterion_communication},
  };

  bool failed = false, limited_only = true;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& l : o.lines) std::cout << l << "\n";
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " ("
              << fmt("%.1f", secs) << " s)" << (o.host_limited ? " [host has too few cores]" : "") << "\n"
              << std::flush;
    if (!o.ok) {
      failed = true;
      limited_only = limited_only && o.host_limited;
    }
  }
  if (!failed) return 0;
  return limited_only ? kHostLimited : 1;
}
