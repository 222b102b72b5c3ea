#pragma once

// binary strings stored one bit per byte, plus text/packed io helpers.
// lengths and indices are size_t; numerals written MSB first.

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mdl {

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::string_view s) {
    bits_.reserve(s.size());
    for (char c : s) {
      if (c == '0') bits_.push_back(0);
      else if (c == '1') bits_.push_back(1);
      else throw std::invalid_argument("BitString: expected '0' or '1'");
    }
  }
  static BitString zeros(std::size_t n) { BitString b; b.bits_.assign(n, 0); return b; }
  static BitString ones(std::size_t n) { BitString b; b.bits_.assign(n, 1); return b; }
  // the n low bits of value, most significant first; from_index(5,4) == "0101"
  static BitString from_index(std::uint64_t value, std::size_t n) {
    BitString b;
    b.bits_.resize(n);
    for (std::size_t i = 0; i < n; ++i) b.bits_[n - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1u);
    return b;
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i]; }
  int at(std::size_t i) const {
    if (i >= bits_.size()) throw std::out_of_range("BitString::at");
    return bits_[i];
  }

  void push_back(int bit) { bits_.push_back(bit ? 1 : 0); }
  void append(const BitString& other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }
  void pop_back() { bits_.pop_back(); }
  void clear() { bits_.clear(); }

  std::size_t count_ones() const {
    std::size_t k = 0;
    for (auto b : bits_) k += b;
    return k;
  }

  BitString substr(std::size_t pos, std::size_t len) const {
    if (pos > bits_.size() || len > bits_.size() - pos) throw std::out_of_range("BitString::substr");
    BitString out;
    out.bits_.assign(bits_.begin() + pos, bits_.begin() + pos + len);
    return out;
  }
  BitString suffix_from(std::size_t pos) const { return substr(pos, bits_.size() - pos); }

  // value of the string read as an MSB-first numeral; "" -> 0
  std::uint64_t as_integer() const {
    if (bits_.size() > 64) throw std::overflow_error("BitString::as_integer: more than 64 bits");
    std::uint64_t v = 0;
    for (auto b : bits_) v = (v << 1) | b;
    return v;
  }

  std::string str() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) if (bits_[i]) s[i] = '1';
    return s;
  }

  bool operator==(const BitString& o) const { return bits_ == o.bits_; }
  bool operator!=(const BitString& o) const { return bits_ != o.bits_; }
  bool operator<(const BitString& o) const { return bits_ < o.bits_; }  // shortlex not intended; plain lexicographic on bit vectors

  friend BitString operator+(BitString a, const BitString& b) { a.append(b); return a; }

 private:
  std::vector<std::uint8_t> bits_;
};

inline std::ostream& operator<<(std::ostream& os, const BitString& b) { return os << b.str(); }

// shortest MSB-first numeral for n, with binary(0) == "0"
inline BitString binary_numeral(std::uint64_t n) {
  if (n == 0) return BitString("0");
  std::size_t len = 0;
  for (std::uint64_t v = n; v; v >>= 1) ++len;
  return BitString::from_index(n, len);
}

// ---- text io: one string per line, ASCII '0'/'1', blank lines and '#' comments skipped ----

inline std::vector<BitString> read_bits_text(std::istream& in) {
  std::vector<BitString> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.emplace_back(line);
  }
  return out;
}

inline void write_bits_text(std::ostream& os, const std::vector<BitString>& strings) {
  for (const auto& b : strings) os << b.str() << '\n';
}

// ---- packed io: 8-byte little-endian bit count, then payload bytes, LSB-first within each byte ----

inline std::vector<std::uint8_t> pack_bits(const BitString& b) {
  std::vector<std::uint8_t> out;
  std::uint64_t n = b.size();
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((n >> (8 * i)) & 0xFF));
  out.resize(8 + (b.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i]) out[8 + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  return out;
}

inline BitString unpack_bits(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8) throw std::invalid_argument("unpack_bits: missing length header");
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  if (bytes.size() != 8 + (n + 7) / 8) throw std::invalid_argument("unpack_bits: payload size disagrees with header");
  BitString b;
  for (std::uint64_t i = 0; i < n; ++i)
    b.push_back((bytes[8 + i / 8] >> (i % 8)) & 1u);
  return b;
}

}  // namespace mdl
