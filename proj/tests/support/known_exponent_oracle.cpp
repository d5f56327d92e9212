#include "known_exponent_oracle.hpp"

#include <stdexcept>

namespace spot::testing {

G1Point KnownExponentOracle::g1(const Scalar& k) {
  G1Point p = ctx_->g1() * k;
  record(p, k);
  return p;
}

G2Point KnownExponentOracle::g2(const Scalar& k) {
  G2Point q = ctx_->g2() * k;
  record(q, k);
  return q;
}

GtElement KnownExponentOracle::gt(const Scalar& k) {
  GtElement t = ctx_->gt().pow(k);
  record(t, k);
  return t;
}

G1Point KnownExponentOracle::random_g1() { return g1(rng_.next_scalar()); }
G2Point KnownExponentOracle::random_g2() { return g2(rng_.next_scalar()); }

void KnownExponentOracle::record(const G1Point& p, const Scalar& k) { g1_logs_[p.to_bytes()] = k; }
void KnownExponentOracle::record(const G2Point& q, const Scalar& k) { g2_logs_[q.to_bytes()] = k; }
void KnownExponentOracle::record(const GtElement& t, const Scalar& k) { gt_logs_[t.to_bytes()] = k; }

namespace {
std::optional<Scalar> find(const std::map<Bytes, Scalar>& m, const Bytes& key) {
  auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  return it->second;
}
}  // namespace

std::optional<Scalar> KnownExponentOracle::log(const G1Point& p) const { return find(g1_logs_, p.to_bytes()); }
std::optional<Scalar> KnownExponentOracle::log(const G2Point& q) const { return find(g2_logs_, q.to_bytes()); }
std::optional<Scalar> KnownExponentOracle::log(const GtElement& t) const { return find(gt_logs_, t.to_bytes()); }

Scalar KnownExponentOracle::log_or_throw(const G1Point& p) const {
  if (auto k = log(p)) return *k;
  if (p.is_identity()) return Scalar::zero();
  throw std::logic_error("oracle: unknown G1 point");
}
Scalar KnownExponentOracle::log_or_throw(const G2Point& q) const {
  if (auto k = log(q)) return *k;
  if (q.is_identity()) return Scalar::zero();
  throw std::logic_error("oracle: unknown G2 point");
}
Scalar KnownExponentOracle::log_or_throw(const GtElement& t) const {
  if (auto k = log(t)) return *k;
  if (t.is_one()) return Scalar::zero();
  throw std::logic_error("oracle: unknown GT element");
}

Scalar KnownExponentOracle::product_log(const std::vector<Term>& terms) const {
  Scalar acc;
  for (const Term& t : terms) acc += t.k * log_or_throw(t.p) * log_or_throw(t.q);
  return acc;
}

bool KnownExponentOracle::holds_in_exponent(const std::vector<Term>& terms, const GtElement& t) const {
  return product_log(terms) == log_or_throw(t);
}

bool KnownExponentOracle::holds_with_pairings(const std::vector<Term>& terms, const GtElement& t) const {
  ctx_->activate();
  PairingProduct pp;
  for (const Term& term : terms) pp.add_pow(term.p, term.q, term.k);
  return pp.evaluate() == t;
}

}  // namespace spot::testing
