#pragma once

// binary arithmetic coding against a sequential bit model, integer state only.
// realized code length is at most -log2 Pr(seq) + 2 bits: 62-bit registers and
// 128-bit splits keep the per-symbol quantization loss around 2^-52 bits, far
// below the 2-bit termination budget even for multi-thousand-bit inputs.
// decoding needs the symbol count out of band and tolerates any continuation
// past the emitted bits, so codes may be zero-padded or embedded as the final
// segment of a larger stream.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "mdl/bitstring.hpp"

namespace mdl {

// stateful conditional model: prob_one() is P(next bit = 1 | bits fed so far)
class BitPredictor {
 public:
  virtual ~BitPredictor() = default;
  virtual double prob_one() const = 0;
  virtual void update(int bit) = 0;
  virtual std::unique_ptr<BitPredictor> clone() const = 0;
};

class FixedBernoulli final : public BitPredictor {
 public:
  explicit FixedBernoulli(double p) : p_(p) {
    if (p < 0 || p > 1) throw std::invalid_argument("FixedBernoulli: p outside [0,1]");
  }
  double prob_one() const override { return p_; }
  void update(int) override {}
  std::unique_ptr<BitPredictor> clone() const override { return std::make_unique<FixedBernoulli>(*this); }

 private:
  double p_;
};

// Krichevsky-Trofimov estimator, P(1) = (ones + 1/2) / (seen + 1)
class KTBernoulli final : public BitPredictor {
 public:
  double prob_one() const override { return (ones_ + 0.5) / (seen_ + 1.0); }
  void update(int bit) override { ++seen_; ones_ += bit ? 1 : 0; }
  std::unique_ptr<BitPredictor> clone() const override { return std::make_unique<KTBernoulli>(*this); }

 private:
  std::uint64_t ones_ = 0, seen_ = 0;
};

// KT estimator per length-m context, initial context all zeros
class KTContext final : public BitPredictor {
 public:
  explicit KTContext(unsigned order) : order_(order) {
    if (order > 16) throw std::invalid_argument("KTContext: order too large");
    ones_.assign(std::size_t{1} << order, 0);
    seen_.assign(std::size_t{1} << order, 0);
  }
  double prob_one() const override { return (ones_[ctx_] + 0.5) / (seen_[ctx_] + 1.0); }
  void update(int bit) override {
    ++seen_[ctx_];
    ones_[ctx_] += bit ? 1 : 0;
    ctx_ = ((ctx_ << 1) | (bit ? 1u : 0u)) & ((std::size_t{1} << order_) - 1);
    if (order_ == 0) ctx_ = 0;
  }
  std::unique_ptr<BitPredictor> clone() const override { return std::make_unique<KTContext>(*this); }

 private:
  unsigned order_;
  std::size_t ctx_ = 0;
  std::vector<std::uint64_t> ones_, seen_;
};

// fixed transition table over length-m contexts, initial context all zeros
class FixedMarkov final : public BitPredictor {
 public:
  FixedMarkov(unsigned order, std::vector<double> prob_one_by_ctx)
      : order_(order), table_(std::move(prob_one_by_ctx)) {
    if (order > 16) throw std::invalid_argument("FixedMarkov: order too large");
    if (table_.size() != (std::size_t{1} << order)) throw std::invalid_argument("FixedMarkov: table size != 2^order");
    for (double p : table_)
      if (p < 0 || p > 1) throw std::invalid_argument("FixedMarkov: probability outside [0,1]");
  }
  double prob_one() const override { return table_[ctx_]; }
  void update(int bit) override {
    ctx_ = ((ctx_ << 1) | (bit ? 1u : 0u)) & ((std::size_t{1} << order_) - 1);
    if (order_ == 0) ctx_ = 0;
  }
  std::unique_ptr<BitPredictor> clone() const override { return std::make_unique<FixedMarkov>(*this); }

 private:
  unsigned order_;
  std::size_t ctx_ = 0;
  std::vector<double> table_;
};

namespace detail {

inline constexpr std::uint64_t kArithBits = 62;
inline constexpr std::uint64_t kArithFull = (std::uint64_t{1} << kArithBits) - 1;
inline constexpr std::uint64_t kArithHalf = std::uint64_t{1} << (kArithBits - 1);
inline constexpr std::uint64_t kArithQuarter = std::uint64_t{1} << (kArithBits - 2);

// probability of the low (0) branch, as counts out of `range`
inline std::uint64_t arith_split(std::uint64_t range, double p1) {
  double scaled = p1 * 18446744073709551616.0;  // p1 * 2^64, exact double multiply
  std::uint64_t q;
  if (scaled <= 1.0) q = 1;
  else if (scaled >= 18446744073709551614.0) q = ~std::uint64_t{0} - 1;
  else q = static_cast<std::uint64_t>(scaled);
  unsigned __int128 c1 = (static_cast<unsigned __int128>(range) * q) >> 64;
  std::uint64_t count1 = static_cast<std::uint64_t>(c1);
  if (count1 == 0) count1 = 1;
  if (count1 >= range) count1 = range - 1;
  return range - count1;  // count0
}

}  // namespace detail

class ArithmeticEncoder {
 public:
  void encode(int bit, double p1) {
    std::uint64_t range = high_ - low_ + 1;
    std::uint64_t count0 = detail::arith_split(range, p1);
    if (bit)
      low_ += count0;
    else
      high_ = low_ + count0 - 1;
    renormalize();
  }

  // emits the shortest dyadic granule inside [low, high]; after this, every
  // continuation of the output decodes to the encoded sequence
  BitString finish() {
    for (unsigned t = 1; t <= detail::kArithBits; ++t) {
      std::uint64_t g = std::uint64_t{1} << (detail::kArithBits - t);
      std::uint64_t v = (low_ + g - 1) / g * g;
      if (v >= low_ && v - low_ <= high_ - low_ && high_ - v >= g - 1) {
        for (unsigned i = 0; i < t; ++i) emit_bit((v >> (detail::kArithBits - 1 - i)) & 1u);
        return std::move(out_);
      }
    }
    throw std::logic_error("ArithmeticEncoder::finish: no granule found");
  }

 private:
  void emit_bit(std::uint64_t b) {
    out_.push_back(static_cast<int>(b));
    for (; pending_ > 0; --pending_) out_.push_back(static_cast<int>(1 - b));
  }

  void renormalize() {
    while (true) {
      if (high_ < detail::kArithHalf) {
        emit_bit(0);
      } else if (low_ >= detail::kArithHalf) {
        emit_bit(1);
        low_ -= detail::kArithHalf;
        high_ -= detail::kArithHalf;
      } else if (low_ >= detail::kArithQuarter && high_ < 3 * detail::kArithQuarter) {
        ++pending_;
        low_ -= detail::kArithQuarter;
        high_ -= detail::kArithQuarter;
      } else {
        break;
      }
      low_ <<= 1;
      high_ = (high_ << 1) | 1;
    }
  }

  std::uint64_t low_ = 0, high_ = detail::kArithFull;
  std::uint64_t pending_ = 0;
  BitString out_;
};

class ArithmeticDecoder {
 public:
  explicit ArithmeticDecoder(const BitString& code) : code_(&code) {
    for (unsigned i = 0; i < detail::kArithBits; ++i) window_ = (window_ << 1) | next_bit();
  }

  int decode(double p1) {
    std::uint64_t range = high_ - low_ + 1;
    std::uint64_t count0 = detail::arith_split(range, p1);
    int bit;
    if (window_ - low_ < count0) {
      bit = 0;
      high_ = low_ + count0 - 1;
    } else {
      bit = 1;
      low_ += count0;
    }
    while (true) {
      if (high_ < detail::kArithHalf) {
        // nothing to subtract
      } else if (low_ >= detail::kArithHalf) {
        low_ -= detail::kArithHalf;
        high_ -= detail::kArithHalf;
        window_ -= detail::kArithHalf;
      } else if (low_ >= detail::kArithQuarter && high_ < 3 * detail::kArithQuarter) {
        low_ -= detail::kArithQuarter;
        high_ -= detail::kArithQuarter;
        window_ -= detail::kArithQuarter;
      } else {
        break;
      }
      low_ <<= 1;
      high_ = (high_ << 1) | 1;
      window_ = (window_ << 1) | next_bit();
    }
    return bit;
  }

 private:
  std::uint64_t next_bit() { return pos_ < code_->size() ? static_cast<std::uint64_t>((*code_)[pos_++]) : 0; }

  const BitString* code_;
  std::size_t pos_ = 0;
  std::uint64_t low_ = 0, high_ = detail::kArithFull, window_ = 0;
};

// code for `seq` under `model`; the model is advanced on a copy
inline BitString arithmetic_encode(const BitString& seq, const BitPredictor& model) {
  auto m = model.clone();
  ArithmeticEncoder enc;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    enc.encode(seq[i], m->prob_one());
    m->update(seq[i]);
  }
  return enc.finish();
}

// inverse of arithmetic_encode given the same model and the symbol count
inline BitString arithmetic_decode(const BitString& code, const BitPredictor& model, std::size_t n_symbols) {
  auto m = model.clone();
  ArithmeticDecoder dec(code);
  BitString out;
  for (std::size_t i = 0; i < n_symbols; ++i) {
    int bit = dec.decode(m->prob_one());
    out.push_back(bit);
    m->update(bit);
  }
  return out;
}

// -log2 model probability of seq, +infinity on a zero-probability bit
inline double model_log_loss(const BitString& seq, const BitPredictor& model) {
  auto m = model.clone();
  double total = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    double p = seq[i] ? m->prob_one() : 1.0 - m->prob_one();
    if (p <= 0) return std::numeric_limits<double>::infinity();
    total -= std::log2(p);
    m->update(seq[i]);
  }
  return total;
}

}  // namespace mdl
