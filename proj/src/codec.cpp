#include "spot/codec.hpp"

namespace spot {

std::string to_hex(ByteView b) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(2 * b.size());
  for (std::uint8_t x : b) {
    s.push_back(kDigits[x >> 4]);
    s.push_back(kDigits[x & 15]);
  }
  return s;
}

namespace {
int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Bytes from_hex(std::string_view s) {
  if (s.size() % 2) throw MalformedInput("hex string has odd length");
  Bytes out(s.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(s[2 * i]), lo = nibble(s[2 * i + 1]);
    if (hi < 0 || lo < 0) throw MalformedInput("invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

std::string ElementCount::describe() const {
  std::string out;
  auto term = [&](std::size_t n, const char* name) {
    if (n == 0) return;
    if (!out.empty()) out += " + ";
    out += (n == 1 ? std::string() : std::to_string(n)) + "|" + name + "|";
  };
  term(g1, "G1");
  term(g2, "G2");
  term(gt, "GT");
  term(zn, "Zn");
  return out.empty() ? "0" : out;
}

}  // namespace spot
