#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "spot/pairing.hpp"

namespace spot {

// Deterministic byte stream: block i = SHAKE256(key || i). Every random choice
// in the library draws from one of these, so a seed fixes a whole run.
class Rng {
 public:
  explicit Rng(ByteView seed);
  explicit Rng(std::string_view seed) : Rng(as_bytes(seed)) {}
  // Seeded from the OS entropy source.
  static Rng from_entropy();

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  // Uniform in [0, bound). bound > 0.
  std::uint64_t uniform(std::uint64_t bound);
  double next_double();
  Scalar next_scalar();
  Scalar next_nonzero_scalar();
  // Independent child stream; the parent is not advanced.
  Rng fork(std::string_view label) const;

 private:
  void refill();

  std::array<std::uint8_t, 32> key_{};
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 136> block_{};
  std::size_t pos_ = block_.size();
};

}  // namespace spot
