#pragma once

// finite-set hypotheses over {0,1}^n: a catalog of set descriptors, each with
// an explicit model cost and data cost log2 |H| for members. the catalog is
//   full set            cost c0                      |H| = 2^n
//   k-ones slice        cost ceil(log2(n+1)) + c0    |H| = C(n,k)
//   prefix cylinder     cost 2 l(prefix) + c0        |H| = 2^(n-l)
//   repeated pattern p  cost l(standard code p) + c0 |H| = 1   (p repeated to n)
//   singleton {D}       cost n + c0                  |H| = 1
// c0 is the class identifier cost. pattern length is capped at n/2 so patterns
// stay cheaper shorthand for periodic strings rather than relabeled singletons.
// indices are assigned over this whole conceptual catalog, so (class, index)
// stays stable whether a hypothesis came from enumerate or enumerate_for.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdl/models.hpp"

namespace mdl {

struct SetDescriptor {
  enum Kind { kFull = 0, kSlice = 1, kCylinder = 2, kPattern = 3, kSingleton = 4 };

  Kind kind = kFull;
  std::size_t n = 0;
  std::size_t k = 0;   // slice only
  BitString word{};    // cylinder prefix, pattern, or singleton payload

  bits_t model_cost(bits_t c0) const {
    switch (kind) {
      case kFull: return c0;
      case kSlice: return std::ceil(std::log2(static_cast<double>(n) + 1)) + c0;
      case kCylinder: return 2.0 * static_cast<bits_t>(word.size()) + c0;
      case kPattern: return static_cast<bits_t>(encode_standard(word).size()) + c0;
      case kSingleton: return static_cast<bits_t>(n) + c0;
    }
    return inf_bits;
  }

  double log2_size() const {
    switch (kind) {
      case kFull: return static_cast<double>(n);
      case kSlice: return log2_binomial(n, k);
      case kCylinder: return static_cast<double>(n - word.size());
      case kPattern:
      case kSingleton: return 0.0;
    }
    return 0.0;
  }

  BitString repeated_pattern() const {
    BitString out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(word[i % word.size()]);
    return out;
  }

  bool contains(const BitString& x) const {
    if (x.size() != n) return false;
    switch (kind) {
      case kFull: return true;
      case kSlice: return x.count_ones() == k;
      case kCylinder:
        for (std::size_t i = 0; i < word.size(); ++i)
          if (x[i] != word[i]) return false;
        return true;
      case kPattern: return x == repeated_pattern();
      case kSingleton: return x == word;
    }
    return false;
  }

  // lexicographic rank of a member, and its inverse; together with contains
  // these make every descriptor a usable code book
  std::uint64_t index_of(const BitString& x) const {
    if (!contains(x)) throw std::invalid_argument("SetDescriptor::index_of: not a member");
    switch (kind) {
      case kFull: return x.as_integer();
      case kSlice: {
        std::uint64_t rank = 0;
        std::size_t ones_left = k;
        for (std::size_t i = 0; i < n && ones_left > 0; ++i)
          if (x[i]) {
            rank += binomial_exact(n - i - 1, ones_left);  // members with 0 here
            --ones_left;
          }
        return rank;
      }
      case kCylinder: return x.suffix_from(word.size()).as_integer();
      case kPattern:
      case kSingleton: return 0;
    }
    return 0;
  }

  BitString element_at(std::uint64_t rank) const {
    switch (kind) {
      case kFull: return BitString::from_index(rank, n);
      case kSlice: {
        BitString out;
        std::size_t ones_left = k;
        for (std::size_t i = 0; i < n; ++i) {
          std::uint64_t with_zero = ones_left > 0 ? binomial_exact(n - i - 1, ones_left) : 1;
          if (ones_left > 0 && rank >= with_zero) {
            out.push_back(1);
            rank -= with_zero;
            --ones_left;
          } else {
            out.push_back(0);
          }
        }
        return out;
      }
      case kCylinder: return word + BitString::from_index(rank, n - word.size());
      case kPattern: return repeated_pattern();
      case kSingleton: return word;
    }
    return BitString();
  }

  std::string label() const {
    switch (kind) {
      case kFull: return "full";
      case kSlice: return "slice k=" + std::to_string(k);
      case kCylinder: return "cylinder " + word.str();
      case kPattern: return "pattern " + word.str();
      case kSingleton: return "singleton " + word.str();
    }
    return "?";
  }
};

class SetFamilyClass final : public ModelClass {
 public:
  explicit SetFamilyClass(std::size_t n) : n_(n), id_("sets:n=" + std::to_string(n)) {
    if (n < 1 || n > 24) throw std::invalid_argument("finite_set_family: need 1 <= n <= 24");
  }

  const std::string& id() const override { return id_; }
  std::size_t registry_position() const override { return kRegistrySets; }
  std::size_t length() const { return n_; }

  // data-free view: everything except singletons (those are data-indexed and
  // 2^n strong at identical cost; enumerate_for supplies the relevant one)
  std::vector<Hypothesis> enumerate(bits_t budget) const override {
    std::vector<Hypothesis> out;
    maybe(out, budget, {SetDescriptor::kFull, n_});
    for (std::size_t k = 0; k <= n_; ++k) maybe(out, budget, {SetDescriptor::kSlice, n_, k});
    for (std::size_t len = 1; len <= n_; ++len) {
      if (2.0 * len + header_cost() > budget + 1e-9) break;
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v)
        maybe(out, budget, {SetDescriptor::kCylinder, n_, 0, BitString::from_index(v, len)});
    }
    for (std::size_t q = 1; 2 * q <= n_; ++q)
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << q); ++v)
        maybe(out, budget, {SetDescriptor::kPattern, n_, 0, BitString::from_index(v, q)});
    return out;
  }

  // catalog members containing D, singleton last
  std::vector<Hypothesis> enumerate_for(const DataSample& d, bits_t budget) const override {
    const BitString& x = d.bits();
    if (x.size() != n_) return {};
    std::vector<Hypothesis> out;
    maybe(out, budget, {SetDescriptor::kFull, n_});
    maybe(out, budget, {SetDescriptor::kSlice, n_, x.count_ones()});
    for (std::size_t len = 1; len <= n_; ++len)
      maybe(out, budget, {SetDescriptor::kCylinder, n_, 0, x.substr(0, len)});
    for (std::size_t q = 1; 2 * q <= n_; ++q) {
      SetDescriptor cand{SetDescriptor::kPattern, n_, 0, x.substr(0, q)};
      if (cand.contains(x)) maybe(out, budget, cand);
    }
    maybe(out, budget, {SetDescriptor::kSingleton, n_, 0, x});
    return out;
  }

  bits_t data_cost(const Hypothesis& h, const DataSample& d) const override {
    SetDescriptor sd = descriptor(h);
    return sd.contains(d.bits()) ? sd.log2_size() : inf_bits;
  }

  // membership as classification: the whole sample is one point, marked
  // correct iff the set contains it. makes the exception rule's blind spot
  // visible: containing sets all get a spotless record however huge they are.
  std::vector<bool> classification(const Hypothesis& h, const DataSample& d) const override {
    if (!d.is_bits()) return {};
    return {descriptor(h).contains(d.bits())};
  }

  bits_t conditional_coder_cost() const override {
    return header_cost() + static_cast<bits_t>(encode_natural_length(n_));
  }

  Hypothesis hypothesis(const SetDescriptor& sd) const {
    return {id_, catalog_index(sd), sd.model_cost(header_cost()), sd.label(), encode_params(sd)};
  }

  SetDescriptor descriptor(const Hypothesis& h) const {
    if (h.params.empty()) throw std::invalid_argument("set descriptor: empty parameter record");
    SetDescriptor sd;
    sd.kind = static_cast<SetDescriptor::Kind>(static_cast<int>(h.params[0]));
    sd.n = n_;
    switch (sd.kind) {
      case SetDescriptor::kFull: break;
      case SetDescriptor::kSlice: sd.k = static_cast<std::size_t>(h.params.at(1)); break;
      case SetDescriptor::kCylinder:
      case SetDescriptor::kPattern:
      case SetDescriptor::kSingleton: {
        auto len = static_cast<std::size_t>(h.params.at(1));
        sd.word = BitString::from_index(static_cast<std::uint64_t>(h.params.at(2)), len);
        break;
      }
    }
    return sd;
  }

  // stable position over the full conceptual catalog
  std::uint64_t catalog_index(const SetDescriptor& sd) const {
    const std::uint64_t cyl_base = n_ + 2;
    const std::uint64_t pat_base = cyl_base + ((std::uint64_t{1} << (n_ + 1)) - 2);
    const std::uint64_t sing_base = pat_base + ((std::uint64_t{1} << (n_ / 2 + 1)) - 2);
    switch (sd.kind) {
      case SetDescriptor::kFull: return 0;
      case SetDescriptor::kSlice: return 1 + sd.k;
      case SetDescriptor::kCylinder:
        return cyl_base + ((std::uint64_t{1} << sd.word.size()) - 2) + sd.word.as_integer();
      case SetDescriptor::kPattern:
        return pat_base + ((std::uint64_t{1} << sd.word.size()) - 2) + sd.word.as_integer();
      case SetDescriptor::kSingleton: return sing_base + sd.word.as_integer();
    }
    return 0;
  }

 private:
  static std::vector<double> encode_params(const SetDescriptor& sd) {
    switch (sd.kind) {
      case SetDescriptor::kFull: return {0};
      case SetDescriptor::kSlice: return {1, static_cast<double>(sd.k)};
      case SetDescriptor::kCylinder:
      case SetDescriptor::kPattern:
      case SetDescriptor::kSingleton:
        return {static_cast<double>(sd.kind), static_cast<double>(sd.word.size()),
                static_cast<double>(sd.word.as_integer())};
    }
    return {};
  }

  void maybe(std::vector<Hypothesis>& out, bits_t budget, const SetDescriptor& sd) const {
    if (sd.model_cost(header_cost()) <= budget + 1e-9) out.push_back(hypothesis(sd));
  }

  std::size_t n_;
  std::string id_;
};

inline std::shared_ptr<ModelClass> finite_set_family(std::size_t n) { return std::make_shared<SetFamilyClass>(n); }

// ---- realized two-part code through the catalog ----
// layout: natural(n) ++ natural(kind) ++ kind parameters ++ member index.
// encode picks the descriptor minimizing the realized total for D.

// realized bits after the length header for a given descriptor
inline std::size_t set_two_part_body_length(const SetDescriptor& sd) {
  std::size_t header = encode_natural_length(static_cast<std::uint64_t>(sd.kind));
  auto index_bits = static_cast<std::size_t>(std::ceil(sd.log2_size() - 1e-9));
  switch (sd.kind) {
    case SetDescriptor::kFull: return header + index_bits;
    case SetDescriptor::kSlice:
      return header + static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(sd.n) + 1))) + index_bits;
    case SetDescriptor::kCylinder: return header + 2 * sd.word.size() + index_bits;
    case SetDescriptor::kPattern: return header + encode_standard(sd.word).size();
    case SetDescriptor::kSingleton: return header + sd.n;
  }
  return header;
}

// body after the length header, for the descriptor minimizing the realized
// body length; usable on its own when l(x) is known out of band
inline BitString set_two_part_encode_body(const BitString& x) {
  if (x.empty() || x.size() > 24) throw std::invalid_argument("set_two_part_encode: need 1 <= l(x) <= 24");
  SetFamilyClass family(x.size());
  DataSample d{x};
  const SetDescriptor best = [&] {
    SetDescriptor arg{SetDescriptor::kSingleton, x.size(), 0, x};
    std::size_t best_len = static_cast<std::size_t>(-1);
    for (const auto& h : family.enumerate_for(d, inf_bits)) {
      SetDescriptor sd = family.descriptor(h);
      std::size_t len = set_two_part_body_length(sd);
      if (len < best_len) { best_len = len; arg = sd; }
    }
    return arg;
  }();

  BitString out = encode_natural(static_cast<std::uint64_t>(best.kind));
  switch (best.kind) {
    case SetDescriptor::kFull: break;
    case SetDescriptor::kSlice: {
      auto bitsk = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(x.size()) + 1)));
      out.append(BitString::from_index(best.k, bitsk));
      break;
    }
    case SetDescriptor::kCylinder: out.append(encode_doubling(best.word)); break;
    case SetDescriptor::kPattern: out.append(encode_standard(best.word)); break;
    case SetDescriptor::kSingleton: out.append(x); return out;
  }
  auto index_bits = static_cast<std::size_t>(std::ceil(best.log2_size() - 1e-9));
  out.append(BitString::from_index(best.index_of(x), index_bits));
  return out;
}

inline BitString set_two_part_encode(const BitString& x) {
  BitString body = set_two_part_encode_body(x);
  return encode_natural(x.size()) + body;
}

// inverse of the body given the string length out of band
inline BitString set_two_part_decode_body(std::size_t n, const BitString& body_in) {
  if (n < 1 || n > 24) throw DecodeError("set_two_part_decode: bad length");
  auto [kind64, body] = decode_natural(body_in);
  if (kind64 > SetDescriptor::kSingleton) throw DecodeError("set_two_part_decode: unknown descriptor kind");
  SetDescriptor sd;
  sd.kind = static_cast<SetDescriptor::Kind>(kind64);
  sd.n = n;
  switch (sd.kind) {
    case SetDescriptor::kFull: break;
    case SetDescriptor::kSlice: {
      auto bitsk = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n) + 1)));
      if (body.size() < bitsk) throw DecodeError("set_two_part_decode: truncated slice header");
      sd.k = static_cast<std::size_t>(body.substr(0, bitsk).as_integer());
      body = body.suffix_from(bitsk);
      break;
    }
    case SetDescriptor::kCylinder: {
      auto [prefix, rest2] = decode_doubling(body);
      sd.word = prefix;
      body = rest2;
      break;
    }
    case SetDescriptor::kPattern: {
      sd.word = decode_standard(body).first;
      return sd.element_at(0);
    }
    case SetDescriptor::kSingleton: {
      if (body.size() < n) throw DecodeError("set_two_part_decode: truncated singleton");
      return body.substr(0, n);
    }
  }
  auto index_bits = static_cast<std::size_t>(std::ceil(sd.log2_size() - 1e-9));
  if (body.size() < index_bits) throw DecodeError("set_two_part_decode: truncated index");
  return sd.element_at(body.substr(0, index_bits).as_integer());
}

inline BitString set_two_part_decode(const BitString& code) {
  auto [n64, rest] = decode_natural(code);
  if (n64 < 1 || n64 > 24) throw DecodeError("set_two_part_decode: bad length header");
  return set_two_part_decode_body(static_cast<std::size_t>(n64), rest);
}

}  // namespace mdl
