#include "spot/niwi.hpp"

#include <map>

#include "spot/errors.hpp"

namespace spot {

namespace {
constexpr std::string_view kCrsMagic = "NWCR";
constexpr std::string_view kProofMagic = "NWPF";
}  // namespace

Bytes NiwiCrs::to_bytes() const {
  Writer w;
  w.raw(as_bytes(kCrsMagic)).put(u).put(v);
  return w.take();
}

NiwiCrs NiwiCrs::from_bytes(ByteView bytes) {
  Reader r(bytes);
  r.expect(kCrsMagic);
  NiwiCrs crs{r.get<G1Point>(), r.get<G2Point>()};
  r.finish();
  if (crs.u.is_identity() || crs.v.is_identity()) throw MalformedInput("degenerate CRS");
  return crs;
}

NiwiCrs niwi_crs_gen(const PairingContext& ctx, Rng& rng) {
  const Scalar r = rng.next_nonzero_scalar();
  const Scalar s = rng.next_nonzero_scalar();
  return niwi_crs_from_exponents(ctx, r, s);
}

NiwiCrs niwi_crs_from_exponents(const PairingContext& ctx, const Scalar& r, const Scalar& s) {
  ctx.activate();
  return {ctx.g1() * r, ctx.g2() * s};
}

PairingProductEquation PairingProductEquation::from_dense(const std::vector<G1Point>& a,
                                                          const std::vector<G2Point>& b,
                                                          const std::vector<std::vector<Scalar>>& gamma,
                                                          const GtElement& t) {
  if (gamma.size() != b.size()) throw MalformedInput("gamma must have one row per G1 variable");
  PairingProductEquation eq;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!a[j].is_identity()) eq.a.push_back({a[j], j});
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!b[i].is_identity()) eq.b.push_back({i, b[i]});
    if (gamma[i].size() != a.size()) throw MalformedInput("gamma must have one column per G2 variable");
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (!gamma[i][j].is_zero()) eq.gamma.push_back({i, j, gamma[i][j]});
    }
  }
  eq.target = t;
  return eq;
}

std::size_t NiwiStatement::add_x(std::string name) {
  x_names.push_back(std::move(name));
  return x_names.size() - 1;
}

std::size_t NiwiStatement::add_y(std::string name) {
  y_names.push_back(std::move(name));
  return y_names.size() - 1;
}

namespace {
std::size_t index_of(const std::vector<std::string>& names, std::string_view name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw MalformedInput("unknown statement variable " + std::string(name));
}
}  // namespace

std::size_t NiwiStatement::x_index(std::string_view name) const { return index_of(x_names, name); }
std::size_t NiwiStatement::y_index(std::string_view name) const { return index_of(y_names, name); }

void NiwiStatement::validate() const {
  const std::size_t nx = x_names.size(), ny = y_names.size();
  for (const auto& eq : equations) {
    for (const auto& t : eq.a) {
      if (t.y >= ny) throw MalformedInput("equation refers to an undeclared G2 variable");
    }
    for (const auto& t : eq.b) {
      if (t.x >= nx) throw MalformedInput("equation refers to an undeclared G1 variable");
      if (t.prepared && !(t.prepared->point() == t.b)) throw MalformedInput("prepared constant mismatch");
    }
    for (const auto& t : eq.gamma) {
      if (t.x >= nx || t.y >= ny) throw MalformedInput("equation refers to an undeclared variable");
    }
  }
}

NiwiRandomness NiwiRandomness::random(std::size_t nx, std::size_t ny, Rng& rng) {
  NiwiRandomness out;
  for (std::size_t i = 0; i < nx; ++i) out.r.push_back(rng.next_scalar());
  for (std::size_t j = 0; j < ny; ++j) out.s.push_back(rng.next_scalar());
  return out;
}

Bytes NiwiProof::to_bytes() const {
  Writer w;
  w.raw(as_bytes(kProofMagic));
  w.u32(static_cast<std::uint32_t>(c.size())).u32(static_cast<std::uint32_t>(d.size()));
  w.u32(static_cast<std::uint32_t>(eq.size()));
  w.put_all(c).put_all(d);
  for (const auto& e : eq) w.put(e.pi).put(e.theta);
  return w.take();
}

NiwiProof NiwiProof::from_bytes(ByteView bytes) {
  Reader r(bytes);
  r.expect(kProofMagic);
  const std::uint32_t nc = r.u32(), nd = r.u32(), ne = r.u32();
  if (nc > 1024 || nd > 1024 || ne > 1024) throw MalformedInput("proof dimensions out of range");
  NiwiProof p;
  p.c = r.get_all<G1Point>(nc);
  p.d = r.get_all<G2Point>(nd);
  for (std::uint32_t i = 0; i < ne; ++i) {
    G2Point pi = r.get<G2Point>();
    G1Point theta = r.get<G1Point>();
    p.eq.push_back({pi, theta});
  }
  r.finish();
  return p;
}

bool equation_holds(const PairingContext& ctx, const PairingProductEquation& eq, const NiwiWitness& w) {
  ctx.activate();
  PairingProduct pp;
  for (const auto& t : eq.a) pp.add(t.a, w.y.at(t.y));
  for (const auto& t : eq.b) pp.add(w.x.at(t.x), t.b);
  for (const auto& t : eq.gamma) pp.add(w.x.at(t.x) * t.gamma, w.y.at(t.y));
  return pp.evaluate() == eq.target;
}

NiwiProof niwi_prove(const PairingContext& ctx, const NiwiCrs& crs, const NiwiStatement& st, const NiwiWitness& w,
                     Rng& rng, Execution mode) {
  return niwi_prove_with(ctx, crs, st, w, NiwiRandomness::random(st.x_names.size(), st.y_names.size(), rng), mode);
}

NiwiProof niwi_prove_with(const PairingContext& ctx, const NiwiCrs& crs, const NiwiStatement& st,
                          const NiwiWitness& w, const NiwiRandomness& rnd, Execution mode) {
  st.validate();
  const std::size_t nx = st.x_names.size(), ny = st.y_names.size();
  if (w.x.size() != nx || w.y.size() != ny) throw MalformedInput("witness does not match the statement variables");
  if (rnd.r.size() != nx || rnd.s.size() != ny) throw MalformedInput("commitment randomness has the wrong shape");
  ctx.activate();

  const std::size_t neq = st.equations.size();
  std::vector<char> ok(neq, 0);
  for_each_index(neq, mode, [&](std::size_t i) { ok[i] = equation_holds(ctx, st.equations[i], w); });
  for (std::size_t i = 0; i < neq; ++i) {
    if (!ok[i]) throw UnsatisfiedWitness("witness does not satisfy equation " + std::to_string(i));
  }

  NiwiProof proof;
  proof.c.resize(nx);
  proof.d.resize(ny);
  for_each_index(nx + ny, mode, [&](std::size_t k) {
    if (k < nx) {
      proof.c[k] = w.x[k] + crs.u * rnd.r[k];
    } else {
      const std::size_t j = k - nx;
      proof.d[j] = w.y[j] + crs.v * rnd.s[j];
    }
  });

  // pi = sum r_x B + sum gamma r_x D_y ; theta = sum s_y A + sum gamma s_y X_x
  proof.eq.resize(neq);
  for_each_index(neq, mode, [&](std::size_t i) {
    const auto& eq = st.equations[i];
    G2Point pi;
    G1Point theta;
    for (const auto& t : eq.b) pi += t.b * rnd.r[t.x];
    for (const auto& t : eq.a) theta += t.a * rnd.s[t.y];
    for (const auto& t : eq.gamma) {
      pi += proof.d[t.y] * (t.gamma * rnd.r[t.x]);
      theta += w.x[t.x] * (t.gamma * rnd.s[t.y]);
    }
    proof.eq[i] = {pi, theta};
  });
  return proof;
}

namespace {

bool verify_one(const NiwiCrs& crs, const PairingProductEquation& eq, const NiwiProof& proof,
                const NiwiEquationProof& ep, const PreparedCrs* prepared) {
  // Terms sharing a G2 variable are folded into one pairing.
  std::map<std::size_t, G1Point> by_y;
  for (const auto& t : eq.a) by_y[t.y] += t.a;
  for (const auto& t : eq.gamma) by_y[t.y] += proof.c[t.x] * t.gamma;
  PairingProduct pp;
  for (const auto& [y, p] : by_y) pp.add(p, proof.d[y]);
  for (const auto& t : eq.b) {
    if (t.prepared) {
      pp.add(proof.c[t.x], *t.prepared);
    } else {
      pp.add(proof.c[t.x], t.b);
    }
  }
  pp.add(-crs.u, ep.pi);
  if (prepared) {
    pp.add(-ep.theta, prepared->v);
  } else {
    pp.add(-ep.theta, crs.v);
  }
  return pp.evaluate() == eq.target;
}

}  // namespace

std::vector<bool> niwi_verify_each(const PairingContext& ctx, const NiwiCrs& crs, const NiwiStatement& st,
                                   const NiwiProof& proof, NiwiVerifyOptions opt) {
  st.validate();
  if (proof.c.size() != st.x_names.size() || proof.d.size() != st.y_names.size() ||
      proof.eq.size() != st.equations.size()) {
    throw MalformedInput("proof shape does not match the statement");
  }
  if (opt.prepared && !(opt.prepared->crs == crs)) throw MalformedInput("prepared CRS does not match");
  ctx.activate();
  std::vector<char> ok(st.equations.size(), 0);
  for_each_index(st.equations.size(), opt.mode, [&](std::size_t i) {
    ok[i] = verify_one(crs, st.equations[i], proof, proof.eq[i], opt.prepared);
  });
  return {ok.begin(), ok.end()};
}

bool niwi_verify(const PairingContext& ctx, const NiwiCrs& crs, const NiwiStatement& st, const NiwiProof& proof,
                 NiwiVerifyOptions opt) {
  for (bool b : niwi_verify_each(ctx, crs, st, proof, opt)) {
    if (!b) return false;
  }
  return true;
}

}  // namespace spot
