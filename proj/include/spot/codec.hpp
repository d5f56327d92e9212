#pragma once

// Length-checked binary reader and writer over the canonical element
// encodings.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "spot/errors.hpp"
#include "spot/pairing.hpp"

namespace spot {

class Writer {
 public:
  Writer& u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
  }
  Writer& u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  Writer& raw(ByteView b) {
    out_.insert(out_.end(), b.begin(), b.end());
    return *this;
  }
  template <class T>
  Writer& put(const T& v) {
    return raw(v.to_bytes());
  }
  template <class T>
  Writer& put_all(const std::vector<T>& vs) {
    for (const auto& v : vs) put(v);
    return *this;
  }
  Bytes take() { return std::move(out_); }
  const Bytes& bytes() const { return out_; }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView in) : in_(in) {}

  ByteView raw(std::size_t n) {
    if (in_.size() < n) throw MalformedInput("truncated encoding");
    ByteView head = in_.first(n);
    in_ = in_.subspan(n);
    return head;
  }
  std::uint8_t u8() { return raw(1)[0]; }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (std::uint8_t b : raw(4)) v = (v << 8) | b;
    return v;
  }
  template <class T>
  T get() {
    return T::from_bytes(raw(T::encoded_size()));
  }
  template <class T>
  std::vector<T> get_all(std::size_t n) {
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(get<T>());
    return out;
  }
  void expect(std::string_view magic) {
    ByteView got = raw(magic.size());
    if (!std::equal(got.begin(), got.end(), magic.begin())) {
      throw MalformedInput("bad header, expected " + std::string(magic));
    }
  }
  bool done() const { return in_.empty(); }
  void finish() const {
    if (!in_.empty()) throw MalformedInput("trailing bytes after encoding");
  }

 private:
  ByteView in_;
};

std::string to_hex(ByteView b);
Bytes from_hex(std::string_view s);

// Element counts of a serialized object, by group.
struct ElementCount {
  std::size_t g1 = 0;
  std::size_t g2 = 0;
  std::size_t gt = 0;
  std::size_t zn = 0;

  ElementCount& operator+=(const ElementCount& o) {
    g1 += o.g1;
    g2 += o.g2;
    gt += o.gt;
    zn += o.zn;
    return *this;
  }
  friend ElementCount operator+(ElementCount a, const ElementCount& b) { return a += b; }
  friend bool operator==(const ElementCount&, const ElementCount&) = default;
  // e.g. "6|G1| + 7|G2|"
  std::string describe() const;
};

template <class Point>
ElementCount count_of(std::size_t n);
template <>
inline ElementCount count_of<G1Point>(std::size_t n) { return {n, 0, 0, 0}; }
template <>
inline ElementCount count_of<G2Point>(std::size_t n) { return {0, n, 0, 0}; }

}  // namespace spot
