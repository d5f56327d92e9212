#pragma once

// Asymmetric pairing groups behind value types. The arithmetic backend is mcl;
// nothing outside this header and pairing.cpp touches mcl directly except the
// pairing-product evaluator.

#include <mcl/bn.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spot {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

enum class SecurityLevel : int { k112 = 112, k128 = 128 };

SecurityLevel security_level_from_bits(int bits);
inline int bits(SecurityLevel level) { return static_cast<int>(level); }
// Curve backing a level: alt_bn128 for 112 bits, BLS12-381 for 128 bits.
std::string_view curve_name(SecurityLevel level);

namespace detail {
// Default construction needs some curve loaded; loads the 112-bit curve if
// none is active yet.
void ensure_backend();
}  // namespace detail

// Element of Z_n, n the prime group order. Canonical encoding is fixed-width
// big-endian.
class Scalar {
 public:
  Scalar() {
    detail::ensure_backend();
    value_.clear();
  }
  explicit Scalar(const mcl::Fr& v) : value_(v) {}

  static Scalar zero() { return Scalar(); }
  static Scalar one() { return from_u64(1); }
  static Scalar from_u64(std::uint64_t v);
  static Scalar from_i64(std::int64_t v);
  // Strict decoding: exactly encoded_size() bytes, value < n.
  static Scalar from_bytes(ByteView bytes);
  // Big-endian integer of any length up to twice the encoded size, reduced mod n.
  static Scalar reduce(ByteView wide);
  static std::size_t encoded_size();

  Bytes to_bytes() const;
  std::string to_decimal() const;

  bool is_zero() const { return value_.isZero(); }
  Scalar inverse() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }
  // Integer order of the canonical representatives.
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

  const mcl::Fr& native() const { return value_; }

 private:
  mcl::Fr value_;
};

namespace detail {
struct G1Tag {
  using Native = mcl::G1;
  static constexpr std::string_view kName = "G1";
};
struct G2Tag {
  using Native = mcl::G2;
  static constexpr std::string_view kName = "G2";
};
}  // namespace detail

// Point of one of the two source groups, written additively.
template <class Tag>
class GroupPoint {
 public:
  using Native = typename Tag::Native;
  static constexpr std::string_view kGroupName = Tag::kName;

  GroupPoint() {
    detail::ensure_backend();
    value_.clear();
  }
  explicit GroupPoint(const Native& v) : value_(v) {}

  static GroupPoint identity() { return GroupPoint(); }
  // Strict decoding of the compressed form: rejects off-curve points,
  // points outside the order-n subgroup and non-canonical encodings.
  static GroupPoint from_bytes(ByteView bytes);
  static std::size_t encoded_size();

  Bytes to_bytes() const;
  bool is_identity() const { return value_.isZero(); }
  // n * P == O
  bool in_prime_order_subgroup() const { return value_.isValidOrder(); }

  friend GroupPoint operator+(const GroupPoint& a, const GroupPoint& b) {
    GroupPoint r;
    Native::add(r.value_, a.value_, b.value_);
    return r;
  }
  friend GroupPoint operator-(const GroupPoint& a, const GroupPoint& b) {
    GroupPoint r;
    Native::sub(r.value_, a.value_, b.value_);
    return r;
  }
  GroupPoint operator-() const {
    GroupPoint r;
    Native::neg(r.value_, value_);
    return r;
  }
  friend GroupPoint operator*(const GroupPoint& p, const Scalar& k) {
    GroupPoint r;
    Native::mul(r.value_, p.value_, k.native());
    return r;
  }
  friend GroupPoint operator*(const Scalar& k, const GroupPoint& p) { return p * k; }
  GroupPoint& operator+=(const GroupPoint& o) { return *this = *this + o; }
  friend bool operator==(const GroupPoint& a, const GroupPoint& b) { return a.value_ == b.value_; }

  const Native& native() const { return value_; }

 private:
  Native value_;
};

using G1Point = GroupPoint<detail::G1Tag>;
using G2Point = GroupPoint<detail::G2Tag>;

// Element of the target group, written multiplicatively.
class GtElement {
 public:
  GtElement() {
    detail::ensure_backend();
    value_ = 1;
  }
  explicit GtElement(const mcl::GT& v) : value_(v) {}

  static GtElement one() { return GtElement(); }
  // Full (uncompressed) encoding; decoding checks membership in the
  // order-n subgroup of the extension field.
  static GtElement from_bytes(ByteView bytes);
  static std::size_t encoded_size();
  Bytes to_bytes() const;

  bool is_one() const { return value_.isOne(); }
  GtElement inverse() const;
  GtElement pow(const Scalar& k) const;

  friend GtElement operator*(const GtElement& a, const GtElement& b);
  friend bool operator==(const GtElement& a, const GtElement& b) { return a.value_ == b.value_; }

  const mcl::GT& native() const { return value_; }

 private:
  mcl::GT value_;
};

// A G2 point with its Miller-loop line coefficients computed ahead of time.
class PreparedG2 {
 public:
  PreparedG2() = default;
  explicit PreparedG2(const G2Point& q);
  const G2Point& point() const { return point_; }
  const std::vector<mcl::Fp6>& coefficients() const { return coeff_; }

 private:
  G2Point point_;
  std::vector<mcl::Fp6> coeff_;
};

// Accumulates pairs and evaluates prod e(P_i, Q_i) with one shared final
// exponentiation. Arguments may be given in either group order.
class PairingProduct {
 public:
  PairingProduct& add(const G1Point& p, const G2Point& q);
  PairingProduct& add(const G2Point& q, const G1Point& p) { return add(p, q); }
  PairingProduct& add(const G1Point& p, const PreparedG2& q);
  // Adds e(P, Q)^k as e(k*P, Q).
  PairingProduct& add_pow(const G1Point& p, const G2Point& q, const Scalar& k);

  GtElement evaluate() const;
  std::size_t size() const { return g1_.size() + prepared_.size(); }

 private:
  std::vector<mcl::G1> g1_;
  std::vector<mcl::G2> g2_;
  std::vector<std::pair<mcl::G1, const PreparedG2*>> prepared_;
};

GtElement pair(const G1Point& p, const G2Point& q);

// Public parameters (n, G1, G2, G3, g1, g2, e, H). Immutable once built.
//
// mcl keeps one active curve per process. Every context method that enters
// the backend first activates the context's curve, so contexts of both levels
// may be created in one process, but points from one level must not be mixed
// with points from the other, and a switch must not race with arithmetic on
// other threads.
class PairingContext {
 public:
  static PairingContext setup(SecurityLevel level, ByteView seed);
  static PairingContext setup(SecurityLevel level, std::string_view seed) {
    return setup(level, as_bytes(seed));
  }

  SecurityLevel security_level() const { return level_; }
  const Bytes& seed() const { return seed_; }
  const G1Point& g1() const { return g1_; }
  const G2Point& g2() const { return g2_; }
  // e(g1, g2)
  const GtElement& gt() const { return gt_; }
  template <class Point>
  const Point& generator() const;

  // Big-endian n, padded to the scalar width.
  Bytes order_bytes() const;
  std::string order_decimal() const;

  // H : {0,1}* -> Z_n. SHAKE256 with a domain tag, 64 output bytes reduced mod n.
  Scalar hash_to_scalar(ByteView data) const;
  Scalar hash_to_scalar(std::string_view data) const { return hash_to_scalar(as_bytes(data)); }
  G1Point hash_to_g1(ByteView data) const;
  G1Point hash_to_g1(std::string_view data) const { return hash_to_g1(as_bytes(data)); }

  GtElement pair(const G1Point& p, const G2Point& q) const;

  std::size_t scalar_size() const;
  std::size_t g1_size() const;
  std::size_t g2_size() const;
  std::size_t gt_size() const;

  // Header, level, seed, then n | g1 | g2 | e(g1,g2).
  Bytes serialize() const;
  // Rebuilds from level and seed and rejects the input unless every stored
  // component matches.
  static PairingContext deserialize(ByteView bytes);

  // Makes this context's curve the active mcl curve.
  void activate() const;

  friend bool operator==(const PairingContext& a, const PairingContext& b) {
    return a.level_ == b.level_ && a.seed_ == b.seed_;
  }

 private:
  PairingContext() = default;

  SecurityLevel level_ = SecurityLevel::k112;
  Bytes seed_;
  G1Point g1_;
  G2Point g2_;
  GtElement gt_;
};

template <>
inline const G1Point& PairingContext::generator<G1Point>() const {
  return g1_;
}
template <>
inline const G2Point& PairingContext::generator<G2Point>() const {
  return g2_;
}

// SHAKE256 over the concatenation of `parts`, squeezed to out.size() bytes.
void shake256(std::initializer_list<ByteView> parts, std::span<std::uint8_t> out);

}  // namespace spot
