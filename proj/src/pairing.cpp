#include "spot/pairing.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <memory>
#include <mutex>

#include "spot/errors.hpp"

namespace spot {

namespace {

std::mutex g_curve_mutex;
std::atomic<int> g_active_bits{0};

void activate_curve(SecurityLevel level) {
  const int want = bits(level);
  if (g_active_bits.load(std::memory_order_acquire) == want) return;
  std::lock_guard lock(g_curve_mutex);
  if (g_active_bits.load(std::memory_order_relaxed) == want) return;
  if (level == SecurityLevel::k112) {
    mcl::initPairing(mcl::BN_SNARK1);
  } else {
    mcl::initPairing(mcl::BLS12_381);
    mcl::setMapToMode(MCL_MAP_TO_MODE_HASH_TO_CURVE);
  }
  mcl::verifyOrderG1(true);
  mcl::verifyOrderG2(true);
  g_active_bits.store(want, std::memory_order_release);
}

}  // namespace

void detail::ensure_backend() {
  if (g_active_bits.load(std::memory_order_acquire) == 0) activate_curve(SecurityLevel::k112);
}

namespace {

constexpr std::string_view kContextMagic = "SPOTPP";
constexpr std::uint8_t kContextVersion = 1;

template <class Native>
Bytes serialize_native(const Native& v) {
  // Largest encoding is a BLS12-381 GT element (576 bytes).
  std::array<std::uint8_t, 1024> buf{};
  const std::size_t n = v.serialize(buf.data(), buf.size());
  if (n == 0) throw std::logic_error("mcl serialization failed");
  return Bytes(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n));
}

void append(Bytes& out, ByteView b) { out.insert(out.end(), b.begin(), b.end()); }

ByteView take(ByteView& in, std::size_t n) {
  if (in.size() < n) throw MalformedInput("truncated public parameters");
  ByteView head = in.first(n);
  in = in.subspan(n);
  return head;
}

}  // namespace

SecurityLevel security_level_from_bits(int b) {
  if (b == 112) return SecurityLevel::k112;
  if (b == 128) return SecurityLevel::k128;
  throw UnsupportedSecurityLevel("unsupported security level: " + std::to_string(b) +
                                 " (expected 112 or 128)");
}

std::string_view curve_name(SecurityLevel level) {
  return level == SecurityLevel::k112 ? "alt_bn128" : "BLS12-381";
}

void shake256(std::initializer_list<ByteView> parts, std::span<std::uint8_t> out) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1) {
    throw std::runtime_error("SHAKE256 unavailable");
  }
  for (ByteView p : parts) {
    if (!p.empty() && EVP_DigestUpdate(ctx.get(), p.data(), p.size()) != 1) {
      throw std::runtime_error("SHAKE256 update failed");
    }
  }
  if (EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw std::runtime_error("SHAKE256 finalize failed");
  }
}

// ---------------------------------------------------------------- Scalar

Scalar Scalar::from_u64(std::uint64_t v) {
  std::array<std::uint8_t, 8> le{};
  for (std::size_t i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(v >> (8 * i));
  Scalar s;
  bool ok = false;
  s.value_.setLittleEndianMod(&ok, le.data(), le.size());
  if (!ok) throw std::logic_error("scalar from integer");
  return s;
}

Scalar Scalar::from_i64(std::int64_t v) {
  if (v >= 0) return from_u64(static_cast<std::uint64_t>(v));
  return -from_u64(static_cast<std::uint64_t>(-(v + 1)) + 1);
}

std::size_t Scalar::encoded_size() { return mcl::Fr::getByteSize(); }

Scalar Scalar::reduce(ByteView wide) {
  if (wide.size() > 2 * encoded_size()) throw MalformedInput("scalar input too wide");
  Scalar s;
  if (wide.empty()) return s;
  bool ok = false;
  s.value_.setBigEndianMod(&ok, wide.data(), wide.size());
  if (!ok) throw MalformedInput("scalar reduction failed");
  return s;
}

Scalar Scalar::from_bytes(ByteView bytes) {
  if (bytes.size() != encoded_size()) {
    throw MalformedInput("scalar encoding must be " + std::to_string(encoded_size()) + " bytes");
  }
  Scalar s = reduce(bytes);
  const Bytes canonical = s.to_bytes();
  if (!std::equal(canonical.begin(), canonical.end(), bytes.begin())) {
    throw MalformedInput("scalar encoding is not reduced mod n");
  }
  return s;
}

Bytes Scalar::to_bytes() const {
  Bytes out(encoded_size(), 0);
  const std::size_t n = value_.getLittleEndian(out.data(), out.size());
  if (n == 0) throw std::logic_error("scalar encoding failed");
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(n), out.end(), 0);
  std::reverse(out.begin(), out.end());
  return out;
}

std::string Scalar::to_decimal() const { return value_.getStr(10); }

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero scalar");
  Scalar r;
  mcl::Fr::inv(r.value_, value_);
  return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  Scalar r;
  mcl::Fr::add(r.value_, a.value_, b.value_);
  return r;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  Scalar r;
  mcl::Fr::sub(r.value_, a.value_, b.value_);
  return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r;
  mcl::Fr::mul(r.value_, a.value_, b.value_);
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r;
  mcl::Fr::neg(r.value_, value_);
  return r;
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
  const Bytes x = a.to_bytes();
  const Bytes y = b.to_bytes();
  return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
}

// ---------------------------------------------------------------- points

template <class Tag>
std::size_t GroupPoint<Tag>::encoded_size() {
  return GroupPoint().to_bytes().size();
}

template <class Tag>
Bytes GroupPoint<Tag>::to_bytes() const {
  return serialize_native(value_);
}

template <class Tag>
GroupPoint<Tag> GroupPoint<Tag>::from_bytes(ByteView bytes) {
  const std::string name(Tag::kName);
  if (bytes.size() != encoded_size()) {
    throw MalformedInput(name + " encoding must be " + std::to_string(encoded_size()) + " bytes");
  }
  GroupPoint p;
  std::size_t read = 0;
  try {
    read = p.value_.deserialize(bytes.data(), bytes.size());
  } catch (const std::exception& e) {
    throw MalformedInput(name + " point rejected: " + e.what());
  }
  if (read != bytes.size()) throw MalformedInput(name + " point is not on the curve or not in the subgroup");
  if (!p.value_.isValid() || !p.value_.isValidOrder()) {
    throw MalformedInput(name + " point is not in the order-n subgroup");
  }
  const Bytes canonical = p.to_bytes();
  if (!std::equal(canonical.begin(), canonical.end(), bytes.begin())) {
    throw MalformedInput(name + " encoding is not canonical");
  }
  return p;
}

template class GroupPoint<detail::G1Tag>;
template class GroupPoint<detail::G2Tag>;

// ---------------------------------------------------------------- GT

std::size_t GtElement::encoded_size() { return serialize_native(mcl::GT(1)).size(); }

Bytes GtElement::to_bytes() const { return serialize_native(value_); }

GtElement GtElement::from_bytes(ByteView bytes) {
  if (bytes.size() != encoded_size()) {
    throw MalformedInput("GT encoding must be " + std::to_string(encoded_size()) + " bytes");
  }
  GtElement g;
  std::size_t read = 0;
  try {
    read = g.value_.deserialize(bytes.data(), bytes.size());
  } catch (const std::exception& e) {
    throw MalformedInput(std::string("GT element rejected: ") + e.what());
  }
  if (read != bytes.size()) throw MalformedInput("GT element rejected");
  if (g.value_.isZero() || !mcl::isValidGT(g.value_)) {
    throw MalformedInput("GT element is not in the order-n subgroup");
  }
  return g;
}

GtElement GtElement::inverse() const {
  GtElement r;
  mcl::GT::unitaryInv(r.value_, value_);
  return r;
}

GtElement GtElement::pow(const Scalar& k) const {
  GtElement r;
  mcl::GT::pow(r.value_, value_, k.native());
  return r;
}

GtElement operator*(const GtElement& a, const GtElement& b) {
  GtElement r;
  mcl::GT::mul(r.value_, a.value_, b.value_);
  return r;
}

// ---------------------------------------------------------------- pairings

PreparedG2::PreparedG2(const G2Point& q) : point_(q) { mcl::precomputeG2(coeff_, q.native()); }

PairingProduct& PairingProduct::add(const G1Point& p, const G2Point& q) {
  if (p.is_identity() || q.is_identity()) return *this;
  g1_.push_back(p.native());
  g2_.push_back(q.native());
  return *this;
}

PairingProduct& PairingProduct::add(const G1Point& p, const PreparedG2& q) {
  if (p.is_identity() || q.point().is_identity()) return *this;
  prepared_.emplace_back(p.native(), &q);
  return *this;
}

PairingProduct& PairingProduct::add_pow(const G1Point& p, const G2Point& q, const Scalar& k) {
  return add(p * k, q);
}

GtElement PairingProduct::evaluate() const {
  mcl::GT f = 1;
  if (!g1_.empty()) mcl::millerLoopVec(f, g1_.data(), g2_.data(), g1_.size());
  for (const auto& [p, q] : prepared_) {
    mcl::GT t;
    mcl::precomputedMillerLoop(t, p, q->coefficients());
    f *= t;
  }
  mcl::GT out;
  mcl::finalExp(out, f);
  return GtElement(out);
}

GtElement pair(const G1Point& p, const G2Point& q) {
  mcl::GT out;
  mcl::pairing(out, p.native(), q.native());
  return GtElement(out);
}

// ---------------------------------------------------------------- context

void PairingContext::activate() const { activate_curve(level_); }

PairingContext PairingContext::setup(SecurityLevel level, ByteView seed) {
  // Validates the enum value as well.
  security_level_from_bits(bits(level));
  activate_curve(level);
  PairingContext ctx;
  ctx.level_ = level;
  ctx.seed_.assign(seed.begin(), seed.end());

  // Generators are seed-derived so that distinct seeds give distinct parameters.
  for (std::uint32_t attempt = 0;; ++attempt) {
    Bytes tag = {'S', 'P', 'O', 'T', '-', 'G', 'E', 'N', static_cast<std::uint8_t>(attempt)};
    append(tag, seed);
    mcl::G1 p;
    mcl::hashAndMapToG1(p, tag.data(), tag.size());
    tag[5] = 'g';
    mcl::G2 q;
    mcl::hashAndMapToG2(q, tag.data(), tag.size());
    ctx.g1_ = G1Point(p);
    ctx.g2_ = G2Point(q);
    ctx.gt_ = spot::pair(ctx.g1_, ctx.g2_);
    if (!ctx.g1_.is_identity() && !ctx.g2_.is_identity() && !ctx.gt_.is_one()) break;
  }
  return ctx;
}

Bytes PairingContext::order_bytes() const {
  Bytes out(scalar_size(), 0);
  // Decimal to big-endian base 256: out = out * 10 + digit.
  for (char c : order_decimal()) {
    unsigned carry = static_cast<unsigned>(c - '0');
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      const unsigned v = static_cast<unsigned>(*it) * 10 + carry;
      *it = static_cast<std::uint8_t>(v & 0xff);
      carry = v >> 8;
    }
  }
  return out;
}

std::string PairingContext::order_decimal() const {
  activate();
  return mcl::Fr::getModulo();
}

Scalar PairingContext::hash_to_scalar(ByteView data) const {
  activate();
  static constexpr std::string_view kTag = "SPOT-H/v1";
  std::array<std::uint8_t, 64> wide{};
  shake256({as_bytes(kTag), data}, wide);
  return Scalar::reduce(wide);
}

G1Point PairingContext::hash_to_g1(ByteView data) const {
  activate();
  static constexpr std::string_view kTag = "SPOT-H1/v1:";
  Bytes msg(kTag.begin(), kTag.end());
  append(msg, data);
  mcl::G1 p;
  mcl::hashAndMapToG1(p, msg.data(), msg.size());
  return G1Point(p);
}

GtElement PairingContext::pair(const G1Point& p, const G2Point& q) const {
  activate();
  return spot::pair(p, q);
}

std::size_t PairingContext::scalar_size() const {
  activate();
  return Scalar::encoded_size();
}
std::size_t PairingContext::g1_size() const {
  activate();
  return G1Point::encoded_size();
}
std::size_t PairingContext::g2_size() const {
  activate();
  return G2Point::encoded_size();
}
std::size_t PairingContext::gt_size() const {
  activate();
  return GtElement::encoded_size();
}

Bytes PairingContext::serialize() const {
  activate();
  Bytes out(kContextMagic.begin(), kContextMagic.end());
  out.push_back(kContextVersion);
  out.push_back(static_cast<std::uint8_t>(bits(level_)));
  const auto len = static_cast<std::uint32_t>(seed_.size());
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
  append(out, seed_);
  append(out, order_bytes());
  append(out, g1_.to_bytes());
  append(out, g2_.to_bytes());
  append(out, gt_.to_bytes());
  return out;
}

PairingContext PairingContext::deserialize(ByteView bytes) {
  ByteView in = bytes;
  ByteView magic = take(in, kContextMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kContextMagic.begin())) {
    throw MalformedInput("not a public-parameter encoding");
  }
  if (take(in, 1)[0] != kContextVersion) throw MalformedInput("unsupported public-parameter version");
  const SecurityLevel level = security_level_from_bits(take(in, 1)[0]);
  ByteView len_bytes = take(in, 4);
  std::uint32_t len = 0;
  for (std::uint8_t b : len_bytes) len = (len << 8) | b;
  ByteView seed = take(in, len);
  PairingContext ctx = setup(level, seed);
  const Bytes expected = ctx.serialize();
  if (expected.size() != bytes.size() || !std::equal(expected.begin(), expected.end(), bytes.begin())) {
    throw MalformedInput("public parameters do not match their level and seed");
  }
  return ctx;
}

}  // namespace spot
