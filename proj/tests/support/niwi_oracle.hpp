#pragma once

#include <vector>

#include "known_exponent_oracle.hpp"
#include "spot/niwi.hpp"

namespace spot::testing {

// A statement, witness and CRS with known logs.
struct NiwiInstance {
  Scalar crs_r, crs_s;
  NiwiCrs crs;
  NiwiStatement st;
  std::vector<Scalar> x_logs, y_logs;
  NiwiWitness w;
};

// Random satisfiable system: up to max_vars variables per group, 1..max_eq
// equations sharing them.
inline NiwiInstance random_niwi_instance(KnownExponentOracle& o, std::size_t max_vars = 4, std::size_t max_eq = 4) {
  Rng& rng = o.rng();
  NiwiInstance in;
  in.crs_r = rng.next_nonzero_scalar();
  in.crs_s = rng.next_nonzero_scalar();
  in.crs = {o.g1(in.crs_r), o.g2(in.crs_s)};
  const std::size_t nx = 1 + rng.uniform(max_vars), ny = 1 + rng.uniform(max_vars);
  for (std::size_t i = 0; i < nx; ++i) {
    in.st.add_x("X" + std::to_string(i));
    in.x_logs.push_back(rng.next_scalar());
    in.w.x.push_back(o.g1(in.x_logs.back()));
  }
  for (std::size_t j = 0; j < ny; ++j) {
    in.st.add_y("Y" + std::to_string(j));
    in.y_logs.push_back(rng.next_scalar());
    in.w.y.push_back(o.g2(in.y_logs.back()));
  }
  const std::size_t neq = 1 + rng.uniform(max_eq);
  for (std::size_t e = 0; e < neq; ++e) {
    PairingProductEquation eq;
    Scalar t;
    for (std::size_t j = 0; j < ny; ++j) {
      if (rng.uniform(2)) {
        Scalar a = rng.next_scalar();
        eq.a.push_back({o.g1(a), j});
        t += a * in.y_logs[j];
      }
    }
    for (std::size_t i = 0; i < nx; ++i) {
      if (rng.uniform(2)) {
        Scalar b = rng.next_scalar();
        eq.b.push_back({i, o.g2(b)});
        t += in.x_logs[i] * b;
      }
      for (std::size_t j = 0; j < ny; ++j) {
        if (rng.uniform(3) == 0) {
          Scalar g = rng.uniform(2) ? rng.next_scalar() : -Scalar::one();
          eq.gamma.push_back({i, j, g});
          t += g * in.x_logs[i] * in.y_logs[j];
        }
      }
    }
    eq.target = o.gt(t);
    in.st.equations.push_back(eq);
  }
  return in;
}

// Checks that every proof element equals the generator raised to the log
// computed from scalars, recording the logs as it goes.
inline bool proof_points_match(KnownExponentOracle& o, const NiwiInstance& in, const NiwiRandomness& rnd,
                               const NiwiProof& p) {
  bool ok = p.c.size() == in.x_logs.size() && p.d.size() == in.y_logs.size() &&
            p.eq.size() == in.st.equations.size();
  if (!ok) return false;
  std::vector<Scalar> c_logs, d_logs;
  for (std::size_t i = 0; i < p.c.size(); ++i) {
    c_logs.push_back(in.x_logs[i] + rnd.r[i] * in.crs_r);
    ok = ok && p.c[i] == o.g1(c_logs.back());
  }
  for (std::size_t j = 0; j < p.d.size(); ++j) {
    d_logs.push_back(in.y_logs[j] + rnd.s[j] * in.crs_s);
    ok = ok && p.d[j] == o.g2(d_logs.back());
  }
  for (std::size_t e = 0; e < p.eq.size(); ++e) {
    const auto& eq = in.st.equations[e];
    Scalar pi, theta;
    for (const auto& t : eq.b) pi += rnd.r[t.x] * o.log_or_throw(t.b);
    for (const auto& t : eq.a) theta += rnd.s[t.y] * o.log_or_throw(t.a);
    for (const auto& t : eq.gamma) {
      pi += t.gamma * rnd.r[t.x] * d_logs[t.y];
      theta += t.gamma * rnd.s[t.y] * in.x_logs[t.x];
    }
    ok = ok && p.eq[e].pi == o.g2(pi) && p.eq[e].theta == o.g1(theta);
  }
  return ok;
}

// Verification equation of one proof pair, as oracle terms.
inline std::vector<KnownExponentOracle::Term> niwi_verify_terms(const NiwiCrs& crs, const PairingProductEquation& eq,
                                                                 const NiwiProof& p, std::size_t e) {
  using O = KnownExponentOracle;
  std::vector<O::Term> terms;
  for (const auto& t : eq.a) terms.push_back(O::term(t.a, p.d[t.y]));
  for (const auto& t : eq.b) terms.push_back(O::term(p.c[t.x], t.b));
  for (const auto& t : eq.gamma) terms.push_back(O::term(p.c[t.x], p.d[t.y], t.gamma));
  terms.push_back(O::term(crs.u, p.eq[e].pi, -Scalar::one()));
  terms.push_back(O::term(p.eq[e].theta, crs.v, -Scalar::one()));
  return terms;
}

}  // namespace spot::testing
