#pragma once

// Non-interactive witness-indistinguishable proofs for pairing-product
// equations
//
//   prod_j e(A_j, Y_j) * prod_i e(X_i, B_i) * prod_ij e(X_i, Y_j)^gamma_ij = t
//
// with commitments C = X + R*U, D = Y + S*V under a CRS (U, V). Variables
// belong to a statement, so a variable used by several equations is
// committed once.

#include <string>
#include <vector>

#include "spot/codec.hpp"
#include "spot/pairing.hpp"
#include "spot/parallel.hpp"
#include "spot/rng.hpp"

namespace spot {

struct NiwiCrs {
  G1Point u;
  G2Point v;

  Bytes to_bytes() const;
  static NiwiCrs from_bytes(ByteView bytes);
  friend bool operator==(const NiwiCrs&, const NiwiCrs&) = default;
};

NiwiCrs niwi_crs_gen(const PairingContext& ctx, Rng& rng);
// U = g1^r, V = g2^s.
NiwiCrs niwi_crs_from_exponents(const PairingContext& ctx, const Scalar& r, const Scalar& s);

// Sparse form: every term refers to statement variables by index.
struct PairingProductEquation {
  struct ATerm {  // e(A, Y[y])
    G1Point a;
    std::size_t y;
  };
  struct BTerm {  // e(X[x], B)
    std::size_t x;
    G2Point b;
    const PreparedG2* prepared = nullptr;  // optional, must hold b
  };
  struct GammaTerm {  // e(X[x], Y[y])^gamma
    std::size_t x, y;
    Scalar gamma;
  };

  std::vector<ATerm> a;
  std::vector<BTerm> b;
  std::vector<GammaTerm> gamma;
  GtElement target;

  // Dense form over variables 0..k-1 and 0..l-1: A has l entries, B has k,
  // gamma is k x l. Identity constants and zero cells are dropped.
  static PairingProductEquation from_dense(const std::vector<G1Point>& a, const std::vector<G2Point>& b,
                                           const std::vector<std::vector<Scalar>>& gamma, const GtElement& t);
};

struct NiwiStatement {
  std::vector<std::string> x_names;  // G1 variables
  std::vector<std::string> y_names;  // G2 variables
  std::vector<PairingProductEquation> equations;

  std::size_t add_x(std::string name);
  std::size_t add_y(std::string name);
  std::size_t x_index(std::string_view name) const;
  std::size_t y_index(std::string_view name) const;
  // Throws MalformedInput on out-of-range variable references.
  void validate() const;
};

struct NiwiWitness {
  std::vector<G1Point> x;
  std::vector<G2Point> y;
};

struct NiwiRandomness {
  std::vector<Scalar> r;  // one per G1 variable
  std::vector<Scalar> s;  // one per G2 variable
  static NiwiRandomness random(std::size_t nx, std::size_t ny, Rng& rng);
};

struct NiwiEquationProof {
  G2Point pi;
  G1Point theta;
  friend bool operator==(const NiwiEquationProof&, const NiwiEquationProof&) = default;
};

struct NiwiProof {
  std::vector<G1Point> c;
  std::vector<G2Point> d;
  std::vector<NiwiEquationProof> eq;

  Bytes to_bytes() const;
  static NiwiProof from_bytes(ByteView bytes);
  ElementCount commitment_elements() const { return count_of<G1Point>(c.size()) + count_of<G2Point>(d.size()); }
  ElementCount proof_elements() const { return count_of<G1Point>(eq.size()) + count_of<G2Point>(eq.size()); }
  ElementCount elements() const { return commitment_elements() + proof_elements(); }
  friend bool operator==(const NiwiProof&, const NiwiProof&) = default;
};

// V with its line coefficients; reusable across proofs under one CRS.
struct PreparedCrs {
  NiwiCrs crs;
  PreparedG2 v;
  explicit PreparedCrs(const NiwiCrs& c) : crs(c), v(c.v) {}
};

bool equation_holds(const PairingContext& ctx, const PairingProductEquation& eq, const NiwiWitness& w);

// Throws UnsatisfiedWitness if some equation does not hold for the witness.
NiwiProof niwi_prove(const PairingContext& ctx, const NiwiCrs& crs, const NiwiStatement& st, const NiwiWitness& w,
                     Rng& rng, Execution mode = Execution::kSequential);
NiwiProof niwi_prove_with(const PairingContext& ctx, const NiwiCrs& crs, const NiwiStatement& st,
                          const NiwiWitness& w, const NiwiRandomness& rnd, Execution mode = Execution::kSequential);

struct NiwiVerifyOptions {
  Execution mode = Execution::kSequential;
  const PreparedCrs* prepared = nullptr;
};

// One verdict per equation. Shape mismatches throw MalformedInput.
std::vector<bool> niwi_verify_each(const PairingContext& ctx, const NiwiCrs& crs, const NiwiStatement& st,
                                   const NiwiProof& proof, NiwiVerifyOptions opt = {});
bool niwi_verify(const PairingContext& ctx, const NiwiCrs& crs, const NiwiStatement& st, const NiwiProof& proof,
                 NiwiVerifyOptions opt = {});

}  // namespace spot
