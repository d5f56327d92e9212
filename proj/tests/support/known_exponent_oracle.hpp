#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "spot/pairing.hpp"
#include "spot/rng.hpp"

namespace spot::testing {

// Builds points from exponents the test chooses, and remembers every
// discrete log, so a pairing-product relation can be replayed as scalar
// arithmetic mod n. Test-only.
class KnownExponentOracle {
 public:
  KnownExponentOracle(const PairingContext& ctx, Rng rng) : ctx_(&ctx), rng_(std::move(rng)) {}

  G1Point g1(const Scalar& k);
  G2Point g2(const Scalar& k);
  GtElement gt(const Scalar& k);
  template <class Point>
  Point make(const Scalar& k);
  template <class Point>
  Point random() {
    return make<Point>(rng_.next_scalar());
  }
  G1Point random_g1();
  G2Point random_g2();
  Scalar random_scalar() { return rng_.next_nonzero_scalar(); }

  // Learns a point computed from recorded ones, e.g. P + Q with log a + b.
  void record(const G1Point& p, const Scalar& k);
  void record(const G2Point& q, const Scalar& k);
  void record(const GtElement& t, const Scalar& k);

  std::optional<Scalar> log(const G1Point& p) const;
  std::optional<Scalar> log(const G2Point& q) const;
  std::optional<Scalar> log(const GtElement& t) const;
  Scalar log_or_throw(const G1Point& p) const;
  Scalar log_or_throw(const G2Point& q) const;
  Scalar log_or_throw(const GtElement& t) const;

  struct Term;
  static Term term(const G1Point& p, const G2Point& q, const Scalar& k = Scalar::one());
  static Term term(const G2Point& q, const G1Point& p, const Scalar& k = Scalar::one());

  // log of prod e(P_i, Q_i)^{k_i}, i.e. sum k_i * log P_i * log Q_i.
  struct Term {
    G1Point p;
    G2Point q;
    Scalar k = Scalar::one();
  };
  Scalar product_log(const std::vector<Term>& terms) const;
  // Verdict of prod e(P_i, Q_i)^{k_i} == t computed in the exponent only.
  bool holds_in_exponent(const std::vector<Term>& terms, const GtElement& t) const;
  // Same relation evaluated with real pairings.
  bool holds_with_pairings(const std::vector<Term>& terms, const GtElement& t) const;

  const PairingContext& context() const { return *ctx_; }
  Rng& rng() { return rng_; }

 private:
  const PairingContext* ctx_;
  Rng rng_;
  std::map<Bytes, Scalar> g1_logs_;
  std::map<Bytes, Scalar> g2_logs_;
  std::map<Bytes, Scalar> gt_logs_;
};

template <>
inline G1Point KnownExponentOracle::make<G1Point>(const Scalar& k) {
  return g1(k);
}
template <>
inline G2Point KnownExponentOracle::make<G2Point>(const Scalar& k) {
  return g2(k);
}

inline KnownExponentOracle::Term KnownExponentOracle::term(const G1Point& p, const G2Point& q, const Scalar& k) {
  return Term{p, q, k};
}
inline KnownExponentOracle::Term KnownExponentOracle::term(const G2Point& q, const G1Point& p, const Scalar& k) {
  return Term{p, q, k};
}

}  // namespace spot::testing
