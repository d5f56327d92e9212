#include "spot/rng.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <stdexcept>

namespace spot {

namespace {
constexpr std::string_view kSeedTag = "SPOT-RNG/v1";
}

Rng::Rng(ByteView seed) { shake256({as_bytes(kSeedTag), seed}, key_); }

Rng Rng::from_entropy() {
  std::array<std::uint8_t, 32> seed{};
  if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) {
    throw std::runtime_error("system entropy unavailable");
  }
  return Rng(ByteView(seed));
}

void Rng::refill() {
  std::array<std::uint8_t, 8> ctr{};
  for (std::size_t i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
  ++counter_;
  shake256({key_, ctr}, block_);
  pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == block_.size()) refill();
    const std::size_t n = std::min(block_.size() - pos_, out.size() - done);
    std::copy_n(block_.begin() + static_cast<std::ptrdiff_t>(pos_), n, out.begin() + static_cast<std::ptrdiff_t>(done));
    pos_ += n;
    done += n;
  }
}

std::uint64_t Rng::next_u64() {
  std::array<std::uint8_t, 8> b{};
  fill(b);
  std::uint64_t v = 0;
  for (std::uint8_t x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform: zero bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

double Rng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Scalar Rng::next_scalar() {
  std::array<std::uint8_t, 64> wide{};
  fill(wide);
  return Scalar::reduce(wide);
}

Scalar Rng::next_nonzero_scalar() {
  for (;;) {
    Scalar s = next_scalar();
    if (!s.is_zero()) return s;
  }
}

Rng Rng::fork(std::string_view label) const {
  Bytes seed(key_.begin(), key_.end());
  std::array<std::uint8_t, 8> ctr{};
  for (std::size_t i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
  seed.insert(seed.end(), ctr.begin(), ctr.end());
  seed.push_back(static_cast<std::uint8_t>(pos_));
  seed.insert(seed.end(), label.begin(), label.end());
  return Rng(ByteView(seed));
}

}  // namespace spot
