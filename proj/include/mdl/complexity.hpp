#pragma once

// computable stand-in for prefix complexity: minimize, over a fixed registry
// of prefix-decodable codecs, the codec identification cost plus the realized
// code length. estimates are upper bounds on the true complexity up to the
// registry constant and are never presented as the real thing.
//
// side information is out of band and free at both ends. conventions:
//   nullptr                                   fully self-delimiting codes
//   encode_natural(n)                         the sample length is given
//   encode_natural(n) ++ encode_natural(k)    length and ones count are given
// conditional-on-hypothesis estimates close over the hypothesis object; their
// side string still carries only the length.

#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdl/arith.hpp"
#include "mdl/bitstring.hpp"
#include "mdl/codes.hpp"
#include "mdl/models.hpp"
#include "mdl/set_family.hpp"

namespace mdl {

// how far estimates may sit above an idealized code before bound-style checks
// complain; reported with every claim, chosen to cover the coder termination
// and identification overheads of this registry, not derived from theory
inline constexpr bits_t kRegistrySlack = 8.0;

class Codec {
 public:
  virtual ~Codec() = default;
  virtual const std::string& id() const = 0;
  // nullopt when x lies outside this codec's domain for the given side input
  virtual std::optional<BitString> encode(const BitString& x, const BitString* side) const = 0;
  // exact inverse of encode under the same side information
  virtual BitString decode(const BitString& code, const BitString* side) const = 0;
};

namespace detail {

inline std::uint64_t side_length(const BitString* side) {
  if (!side) throw std::invalid_argument("codec: length side information required");
  return decode_natural(*side).first;
}

inline std::pair<std::uint64_t, std::uint64_t> side_slice(const BitString* side) {
  if (!side) throw std::invalid_argument("codec: slice side information required");
  auto [n, rest] = decode_natural(*side);
  return {n, decode_natural(rest).first};
}

// bits needed to index [0, count)
inline std::size_t index_width(std::uint64_t count) {
  return count <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(count - 1));
}

}  // namespace detail

// the always-available fallback: the string verbatim, with a length header
// when nothing is given
class LiteralCodec final : public Codec {
 public:
  const std::string& id() const override { return id_; }

  std::optional<BitString> encode(const BitString& x, const BitString* side) const override {
    if (!side) return encode_natural(x.size()) + x;
    if (detail::side_length(side) != x.size()) return std::nullopt;
    return x;
  }

  BitString decode(const BitString& code, const BitString* side) const override {
    std::size_t n;
    BitString body = code;
    if (side) {
      n = static_cast<std::size_t>(detail::side_length(side));
    } else {
      auto [n64, rest] = decode_natural(code);
      n = static_cast<std::size_t>(n64);
      body = rest;
    }
    if (body.size() < n) throw DecodeError("literal: truncated payload");
    return body.substr(0, n);
  }

 private:
  std::string id_ = "literal";
};

// run lengths in self-delimiting numerals. with the length given the final
// run is implied and its numeral is dropped.
class RleCodec final : public Codec {
 public:
  const std::string& id() const override { return id_; }

  std::optional<BitString> encode(const BitString& x, const BitString* side) const override {
    if (x.empty()) return std::nullopt;
    if (side && detail::side_length(side) != x.size()) return std::nullopt;
    std::vector<std::size_t> runs;
    std::size_t i = 0;
    while (i < x.size()) {
      std::size_t j = i;
      while (j < x.size() && x[j] == x[i]) ++j;
      runs.push_back(j - i);
      i = j;
    }
    BitString out = encode_natural(runs.size() - 1);
    out.push_back(x[0]);
    std::size_t emit = side ? runs.size() - 1 : runs.size();
    for (std::size_t r = 0; r < emit; ++r) out.append(encode_natural(runs[r] - 1));
    return out;
  }

  BitString decode(const BitString& code, const BitString* side) const override {
    auto [count64, rest] = decode_natural(code);
    auto run_count = static_cast<std::size_t>(count64) + 1;
    if (rest.empty()) throw DecodeError("rle: missing leading bit");
    int bit = rest[0];
    rest = rest.suffix_from(1);
    BitString out;
    std::size_t stored = side ? run_count - 1 : run_count;
    for (std::size_t r = 0; r < stored; ++r) {
      auto [len64, next] = decode_natural(rest);
      rest = next;
      for (std::uint64_t i = 0; i <= len64; ++i) out.push_back(bit);
      bit = 1 - bit;
    }
    if (side) {
      auto n = static_cast<std::size_t>(detail::side_length(side));
      if (out.size() >= n) throw DecodeError("rle: no room for the implied final run");
      while (out.size() < n) out.push_back(bit);
    }
    return out;
  }

 private:
  std::string id_ = "rle";
};

// adaptive arithmetic code under a kt estimator (order 0) or per-context kt
// estimators (order 1)
class AdaptiveCodec final : public Codec {
 public:
  explicit AdaptiveCodec(unsigned order) : order_(order), id_("kt" + std::to_string(order)) {}

  const std::string& id() const override { return id_; }

  std::optional<BitString> encode(const BitString& x, const BitString* side) const override {
    if (side && detail::side_length(side) != x.size()) return std::nullopt;
    BitString data = arithmetic_encode(x, *model());
    if (side) return data;
    return encode_natural(x.size()) + data;
  }

  BitString decode(const BitString& code, const BitString* side) const override {
    if (side) return arithmetic_decode(code, *model(), static_cast<std::size_t>(detail::side_length(side)));
    auto [n64, rest] = decode_natural(code);
    return arithmetic_decode(rest, *model(), static_cast<std::size_t>(n64));
  }

 private:
  std::unique_ptr<BitPredictor> model() const {
    if (order_ == 0) return std::make_unique<KTBernoulli>();
    return std::make_unique<KTContext>(order_);
  }

  unsigned order_;
  std::string id_;
};

// two-part code through one hypothesis class: hypothesis index in fixed
// width, then the arithmetic code of the data under that hypothesis. encode
// picks the hypothesis minimizing the realized total.
class TwoPartCodec final : public Codec {
 public:
  explicit TwoPartCodec(std::shared_ptr<ModelClass> cls) : cls_(std::move(cls)), id_(cls_->id()) {
    hyps_ = cls_->enumerate(inf_bits);
    if (hyps_.empty()) throw std::invalid_argument("two-part codec: class enumerates nothing");
    if (hyps_.size() > 200000) throw std::invalid_argument("two-part codec: enumeration too large to search");
    if (!cls_->predictor(hyps_.front()))
      throw std::invalid_argument("two-part codec: class has no sequential data coder");
    width_ = detail::index_width(hyps_.size());
  }

  const std::string& id() const override { return id_; }

  std::optional<BitString> encode(const BitString& x, const BitString* side) const override {
    if (side && detail::side_length(side) != x.size()) return std::nullopt;
    std::size_t best = hyps_.size();
    BitString best_code;
    for (std::size_t i = 0; i < hyps_.size(); ++i) {
      auto pred = cls_->predictor(hyps_[i]);
      if (model_log_loss(x, *pred) == inf_bits) continue;
      BitString c = arithmetic_encode(x, *pred);
      if (best == hyps_.size() || c.size() < best_code.size()) {
        best = i;
        best_code = std::move(c);
      }
    }
    if (best == hyps_.size()) return std::nullopt;
    BitString out = side ? BitString() : encode_natural(x.size());
    out.append(BitString::from_index(best, width_));
    out.append(best_code);
    return out;
  }

  BitString decode(const BitString& code, const BitString* side) const override {
    std::size_t n;
    BitString body = code;
    if (side) {
      n = static_cast<std::size_t>(detail::side_length(side));
    } else {
      auto [n64, rest] = decode_natural(code);
      n = static_cast<std::size_t>(n64);
      body = rest;
    }
    if (body.size() < width_) throw DecodeError("two-part: truncated hypothesis index");
    auto idx = static_cast<std::size_t>(body.substr(0, width_).as_integer());
    if (idx >= hyps_.size()) throw DecodeError("two-part: hypothesis index out of range");
    auto pred = cls_->predictor(hyps_[idx]);
    return arithmetic_decode(body.suffix_from(width_), *pred, n);
  }

 private:
  std::shared_ptr<ModelClass> cls_;
  std::string id_;
  std::vector<Hypothesis> hyps_;
  std::size_t width_ = 0;
};

// the finite-set catalog as a codec; covers every length the catalog covers,
// whatever instance length the registered class was built with
class SetFamilyCodec final : public Codec {
 public:
  explicit SetFamilyCodec(std::string id) : id_(std::move(id)) {}

  const std::string& id() const override { return id_; }

  std::optional<BitString> encode(const BitString& x, const BitString* side) const override {
    if (x.empty() || x.size() > 24) return std::nullopt;
    if (side && detail::side_length(side) != x.size()) return std::nullopt;
    if (side) return set_two_part_encode_body(x);
    return set_two_part_encode(x);
  }

  BitString decode(const BitString& code, const BitString* side) const override {
    if (side) return set_two_part_decode_body(static_cast<std::size_t>(detail::side_length(side)), code);
    return set_two_part_decode(code);
  }

 private:
  std::string id_;
};

// arithmetic code of the data under one fixed hypothesis, length given: the
// hypothesis is part of the conditioning, so only the data bits are paid for
class HypothesisCodec final : public Codec {
 public:
  HypothesisCodec(const ModelClass& cls, const Hypothesis& h)
      : pred_(cls.predictor(h)), id_("given:" + h.class_id + "[" + h.label + "]") {
    if (!pred_) throw std::invalid_argument("hypothesis codec: class has no sequential data coder");
  }

  const std::string& id() const override { return id_; }

  std::optional<BitString> encode(const BitString& x, const BitString* side) const override {
    if (detail::side_length(side) != x.size()) return std::nullopt;
    if (model_log_loss(x, *pred_) == inf_bits) return std::nullopt;
    return arithmetic_encode(x, *pred_);
  }

  BitString decode(const BitString& code, const BitString* side) const override {
    return arithmetic_decode(code, *pred_, static_cast<std::size_t>(detail::side_length(side)));
  }

 private:
  std::unique_ptr<BitPredictor> pred_;
  std::string id_;
};

// the string addressed by its lexicographic rank within its ones-count slice
class SliceIndexCodec final : public Codec {
 public:
  const std::string& id() const override { return id_; }

  std::optional<BitString> encode(const BitString& x, const BitString* side) const override {
    auto [n, k] = detail::side_slice(side);
    if (n > 62 || x.size() != n || x.count_ones() != k) return std::nullopt;
    SetDescriptor sd{SetDescriptor::kSlice, static_cast<std::size_t>(n), static_cast<std::size_t>(k)};
    return BitString::from_index(sd.index_of(x), detail::index_width(binomial_exact(n, k)));
  }

  BitString decode(const BitString& code, const BitString* side) const override {
    auto [n, k] = detail::side_slice(side);
    if (n > 62 || k > n) throw DecodeError("slice index: bad side information");
    SetDescriptor sd{SetDescriptor::kSlice, static_cast<std::size_t>(n), static_cast<std::size_t>(k)};
    std::size_t width = detail::index_width(binomial_exact(n, k));
    if (code.size() < width) throw DecodeError("slice index: truncated");
    auto rank = code.substr(0, width).as_integer();
    if (rank >= binomial_exact(n, k)) throw DecodeError("slice index: rank out of range");
    return sd.element_at(rank);
  }

 private:
  std::string id_ = "slice-index";
};

// run lengths with both symbol totals known: every run field is just wide
// enough for the copies remaining, and the code ends the moment one symbol
// is exhausted since the tail is then forced
class SliceRleCodec final : public Codec {
 public:
  const std::string& id() const override { return id_; }

  std::optional<BitString> encode(const BitString& x, const BitString* side) const override {
    auto [n64, k64] = detail::side_slice(side);
    auto n = static_cast<std::size_t>(n64), k = static_cast<std::size_t>(k64);
    if (x.size() != n || x.count_ones() != k) return std::nullopt;
    BitString out;
    if (k == 0 || k == n) return out;  // one-element slice, nothing to say
    std::size_t ones = k, zeros = n - k, pos = 0;
    out.push_back(x[0]);
    while (ones > 0 && zeros > 0) {
      int s = x[pos];
      std::size_t run = 0;
      while (pos + run < n && x[pos + run] == s) ++run;
      std::size_t cap = s ? ones : zeros;
      out.append(BitString::from_index(run - 1, detail::index_width(cap)));
      (s ? ones : zeros) -= run;
      pos += run;
    }
    return out;
  }

  BitString decode(const BitString& code, const BitString* side) const override {
    auto [n64, k64] = detail::side_slice(side);
    auto n = static_cast<std::size_t>(n64), k = static_cast<std::size_t>(k64);
    if (k > n) throw DecodeError("slice rle: bad side information");
    BitString out;
    if (k == 0 || k == n) {
      for (std::size_t i = 0; i < n; ++i) out.push_back(k == 0 ? 0 : 1);
      return out;
    }
    if (code.empty()) throw DecodeError("slice rle: missing leading bit");
    int s = code[0];
    std::size_t at = 1, ones = k, zeros = n - k;
    while (ones > 0 && zeros > 0) {
      std::size_t cap = s ? ones : zeros;
      std::size_t width = detail::index_width(cap);
      if (code.size() < at + width) throw DecodeError("slice rle: truncated run");
      auto run = static_cast<std::size_t>(code.substr(at, width).as_integer()) + 1;
      at += width;
      if (run > cap) throw DecodeError("slice rle: run exceeds remaining symbols");
      for (std::size_t i = 0; i < run; ++i) out.push_back(s);
      (s ? ones : zeros) -= run;
      s = 1 - s;
    }
    int tail = ones > 0 ? 1 : 0;
    while (out.size() < n) out.push_back(tail);
    return out;
  }

 private:
  std::string id_ = "slice-rle";
};

struct ComplexityEstimate {
  bits_t value = inf_bits;
  std::string winning_codec;  // registry id of the minimizing codec
  BitString code;             // its realized output, for round-trip audits
};

// ordered codec registry. identification costs are the self-delimiting codes
// of declaration ranks, so they satisfy kraft on their own and the combined
// code (id ++ codeword) stays prefix-free across the whole registry.
class ComplexityRegistry {
 public:
  ComplexityRegistry() {
    codecs_.push_back(std::make_shared<LiteralCodec>());
    codecs_.push_back(std::make_shared<RleCodec>());
    codecs_.push_back(std::make_shared<AdaptiveCodec>(0));
    codecs_.push_back(std::make_shared<AdaptiveCodec>(1));
  }

  // two-part codec for a model class; idempotent on the class id. classes
  // without a sequential coder are rejected, except set families, which ship
  // their own realized code.
  void register_two_part(const std::shared_ptr<ModelClass>& cls) {
    for (const auto& c : codecs_)
      if (c->id() == cls->id()) return;
    if (std::dynamic_pointer_cast<SetFamilyClass>(cls)) {
      codecs_.push_back(std::make_shared<SetFamilyCodec>(cls->id()));
      return;
    }
    codecs_.push_back(std::make_shared<TwoPartCodec>(cls));
  }

  std::size_t size() const { return codecs_.size(); }
  const Codec& codec(std::size_t rank) const { return *codecs_.at(rank); }

  const Codec* find(const std::string& id) const {
    for (const auto& c : codecs_)
      if (c->id() == id) return c.get();
    return nullptr;
  }

  std::vector<std::string> codec_ids() const {
    std::vector<std::string> out;
    out.reserve(codecs_.size());
    for (const auto& c : codecs_) out.push_back(c->id());
    return out;
  }

  static bits_t id_cost(std::size_t rank) { return static_cast<bits_t>(encode_natural_length(rank)); }

  bits_t id_kraft() const {
    bits_t sum = 0;
    for (std::size_t i = 0; i < codecs_.size(); ++i) sum += std::exp2(-id_cost(i));
    return sum;
  }

  ComplexityEstimate khat(const BitString& x) const { return best(x, nullptr); }

  ComplexityEstimate khat_given_length(const BitString& x) const {
    BitString side = encode_natural(x.size());
    return best(x, &side);
  }

  // minimum over the registry with the length given, plus the arithmetic
  // coder of the fixed hypothesis at the next free rank
  ComplexityEstimate khat_conditional(const ModelClass& cls, const Hypothesis& h, const BitString& x) const {
    BitString side = encode_natural(x.size());
    ComplexityEstimate out = best(x, &side);
    HypothesisCodec hc(cls, h);
    if (auto code = hc.encode(x, &side)) {
      bits_t total = id_cost(codecs_.size()) + static_cast<bits_t>(code->size());
      if (total < out.value) out = {total, hc.id(), std::move(*code)};
    }
    return out;
  }

  // length and ones count both given; a fixed lineup independent of what has
  // been registered, so slice estimates do not drift between registries
  static ComplexityEstimate khat_in_slice(const BitString& x) {
    BitString slice_side = encode_natural(x.size());
    slice_side.append(encode_natural(x.count_ones()));
    BitString length_side = encode_natural(x.size());
    SliceIndexCodec index;
    SliceRleCodec runs;
    RleCodec rle;
    AdaptiveCodec kt0(0);
    const Codec* lineup[] = {&index, &runs, &rle, &kt0};
    const BitString* sides[] = {&slice_side, &slice_side, &length_side, &length_side};
    ComplexityEstimate out;
    for (std::size_t i = 0; i < 4; ++i) {
      auto code = lineup[i]->encode(x, sides[i]);
      if (!code) continue;
      bits_t total = id_cost(i) + static_cast<bits_t>(code->size());
      if (total < out.value) out = {total, lineup[i]->id(), std::move(*code)};
    }
    return out;
  }

 private:
  ComplexityEstimate best(const BitString& x, const BitString* side) const {
    ComplexityEstimate out;
    for (std::size_t i = 0; i < codecs_.size(); ++i) {
      auto code = codecs_[i]->encode(x, side);
      if (!code) continue;
      bits_t total = id_cost(i) + static_cast<bits_t>(code->size());
      if (total < out.value) out = {total, codecs_[i]->id(), std::move(*code)};
    }
    if (out.value == inf_bits) throw std::logic_error("khat: no codec covered the input");
    return out;
  }

  std::vector<std::shared_ptr<Codec>> codecs_;
};

}  // namespace mdl
