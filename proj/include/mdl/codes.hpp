#pragma once

// self-delimiting codes over bit strings and Shannon-Fano code construction.
// all code lengths are in bits, base-2 logs throughout; fractional lengths stay
// real-valued and are only rounded up when an actual codeword is emitted.

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdl/bitstring.hpp"

namespace mdl {

using bits_t = double;  // nonnegative code length in bits, +infinity allowed

inline constexpr bits_t inf_bits = std::numeric_limits<double>::infinity();

// fixed 12-significant-digit decimal rendering for costs in reports
inline std::string format_bits(bits_t v) {
  if (v == inf_bits) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct DecodeError : std::runtime_error {
  explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

// x -> x1x1 x2x2 ... xn(1-xn): each bit doubled, last pair broken to mark the end
inline BitString encode_doubling(const BitString& x) {
  if (x.empty()) throw std::invalid_argument("encode_doubling: empty input");
  BitString out;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    out.push_back(x[i]);
    out.push_back(x[i]);
  }
  out.push_back(x[x.size() - 1]);
  out.push_back(1 - x[x.size() - 1]);
  return out;
}

// returns (x, unread suffix)
inline std::pair<BitString, BitString> decode_doubling(const BitString& stream) {
  BitString x;
  std::size_t i = 0;
  while (true) {
    if (i + 1 >= stream.size()) throw DecodeError("decode_doubling: stream ended inside a pair");
    int a = stream[i], b = stream[i + 1];
    x.push_back(a);
    i += 2;
    if (a != b) return {x, stream.suffix_from(i)};
  }
}

// self-delimiting code for a natural number: the doubled numeral, 2*l(binary(n)) bits
inline BitString encode_natural(std::uint64_t n) { return encode_doubling(binary_numeral(n)); }

inline std::pair<std::uint64_t, BitString> decode_natural(const BitString& stream) {
  auto [numeral, rest] = decode_doubling(stream);
  return {numeral.as_integer(), std::move(rest)};
}

inline std::size_t encode_natural_length(std::uint64_t n) { return 2 * binary_numeral(n).size(); }

// x' = (doubled numeral of l(x)) ++ x; self-delimiting, works for empty x
inline BitString encode_standard(const BitString& x) {
  BitString out = encode_natural(x.size());
  out.append(x);
  return out;
}

inline std::pair<BitString, BitString> decode_standard(const BitString& stream) {
  auto [len, rest] = decode_natural(stream);
  if (len > rest.size()) throw DecodeError("decode_standard: declared length exceeds stream");
  return {rest.substr(0, len), rest.suffix_from(len)};
}

inline std::size_t encode_standard_length(std::size_t payload_len) {
  return encode_natural_length(payload_len) + payload_len;
}

inline bits_t kraft_sum(const std::vector<bits_t>& lengths) {
  bits_t s = 0;
  for (bits_t l : lengths) {
    if (l < 0) throw std::invalid_argument("kraft_sum: negative length");
    s += std::exp2(-l);
  }
  return s;
}

// ---- Shannon-Fano codes for finite distributions ----

struct FiniteDistribution {
  std::vector<double> probs;  // over symbols 0..k-1, must sum to 1 within 1e-9

  std::size_t size() const { return probs.size(); }
  void validate() const {
    if (probs.empty()) throw std::invalid_argument("FiniteDistribution: empty support");
    double s = 0;
    for (double p : probs) {
      if (p < 0) throw std::invalid_argument("FiniteDistribution: negative probability");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("FiniteDistribution: probabilities do not sum to 1");
  }
  double entropy() const {  // H(P) in bits, 0*log 0 = 0
    double h = 0;
    for (double p : probs) if (p > 0) h -= p * std::log2(p);
    return h;
  }
};

struct PrefixCode {
  std::vector<BitString> codewords;  // indexed by symbol

  std::vector<bits_t> lengths() const {
    std::vector<bits_t> out;
    out.reserve(codewords.size());
    for (const auto& c : codewords) out.push_back(static_cast<bits_t>(c.size()));
    return out;
  }

  BitString encode(const std::vector<std::size_t>& symbols) const {
    BitString out;
    for (auto s : symbols) {
      if (s >= codewords.size()) throw std::invalid_argument("PrefixCode::encode: symbol out of range");
      out.append(codewords[s]);
    }
    return out;
  }

  // decodes the entire stream; fails on trailing or unmatchable bits
  std::vector<std::size_t> decode(const BitString& stream) const {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < stream.size()) {
      bool matched = false;
      // longest codeword is short (<= 64 for ceil(-log p) codes in practice); linear scan per symbol
      for (std::size_t s = 0; s < codewords.size(); ++s) {
        const auto& w = codewords[s];
        if (w.empty() || w.size() > stream.size() - pos) continue;
        bool eq = true;
        for (std::size_t i = 0; i < w.size(); ++i)
          if (stream[pos + i] != w[i]) { eq = false; break; }
        if (eq) {
          out.push_back(s);
          pos += w.size();
          matched = true;
          break;
        }
      }
      if (!matched) throw DecodeError("PrefixCode::decode: no codeword matches");
    }
    return out;
  }
};

// integer codeword length ceil(-log2 p), guarded against ties landing a hair
// above an exact power of two
inline int shannon_fano_length(double p) {
  if (p <= 0) throw std::invalid_argument("shannon_fano_length: zero probability in support");
  if (p >= 1) return 0;
  double v = -std::log2(p);
  // any p strictly below 1 needs at least one bit
  return std::max(1, static_cast<int>(std::ceil(v - 1e-9)));
}

// canonical prefix code with lengths ceil(-log2 P(x)); Kraft holds since
// sum 2^-ceil(-log p) <= sum p = 1
inline PrefixCode build_shannon_fano(const FiniteDistribution& dist) {
  dist.validate();
  const std::size_t k = dist.size();
  std::vector<int> len(k);
  for (std::size_t s = 0; s < k; ++s) len[s] = shannon_fano_length(dist.probs[s]);

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return len[a] < len[b]; });

  PrefixCode code;
  code.codewords.resize(k);
  std::uint64_t next = 0;
  int prev_len = 0;
  for (std::size_t s : order) {
    next <<= (len[s] - prev_len);
    prev_len = len[s];
    if (len[s] > 0 && next >= (std::uint64_t{1} << len[s]))
      throw std::invalid_argument("build_shannon_fano: code space exhausted");
    code.codewords[s] = BitString::from_index(next, static_cast<std::size_t>(len[s]));
    ++next;
  }
  return code;
}

}  // namespace mdl
