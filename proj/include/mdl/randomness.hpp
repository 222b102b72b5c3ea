#pragma once

// finite-string randomness machinery: the worked test examples, an ordered
// test registry with the max construction, sum-test conversion, deficiency
// estimates against uniform and model-induced distributions, and the
// fundamental-inequality checker.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mdl/complexity.hpp"
#include "mdl/models.hpp"
#include "mdl/selection.hpp"

namespace mdl {

// a test assigns each string a nonnegative significance level m; the mass of
// strings reaching level m under the target distribution stays below 2^-m
class MLTest {
 public:
  virtual ~MLTest() = default;
  virtual const std::string& id() const = 0;
  virtual std::string distribution() const { return "uniform"; }
  virtual int evaluate(const BitString& x) const = 0;
};

using MLTestRegistry = std::vector<std::shared_ptr<MLTest>>;

// ---- worked examples ----

inline int test_initial_zeros(const BitString& x) {
  if (x.empty()) throw std::invalid_argument("test_initial_zeros: empty input");
  int run = 0;
  for (std::size_t i = 0; i < x.size() && !x[i]; ++i) ++run;
  return run;
}

// largest i with ones at all odd positions 1, 3, ..., 2i-1
inline int test_odd_positions(const BitString& x) {
  if (x.empty()) throw std::invalid_argument("test_odd_positions: empty input");
  int level = 0;
  for (std::size_t pos = 0; pos < x.size(); pos += 2) {
    if (!x[pos]) break;
    ++level;
  }
  return level;
}

// least g with #{x of length n : |2 ones - n| > g} <= 2^{n-m}; m=0 admits
// everything and returns the -1 sentinel
inline int g_table(std::size_t n, int m) {
  if (n < 1 || n > 24) throw std::invalid_argument("g_table: need 1 <= n <= 24");
  std::uint64_t budget = m <= 0                       ? std::uint64_t{1} << n
                         : m > static_cast<int>(n)    ? 0
                                                      : std::uint64_t{1} << (n - m);
  for (int g = -1; g <= static_cast<int>(n); ++g) {
    std::uint64_t count = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      long dev = std::labs(2 * static_cast<long>(k) - static_cast<long>(n));
      if (dev > g) count += binomial_exact(n, k);
    }
    if (count <= budget) return g;
  }
  return static_cast<int>(n);
}

inline bool test_frequency(const BitString& x, int m) {
  long dev = std::labs(2 * static_cast<long>(x.count_ones()) - static_cast<long>(x.size()));
  return dev > g_table(x.size(), m);  // true = reject at level m
}

class InitialZerosTest final : public MLTest {
 public:
  const std::string& id() const override { return id_; }
  int evaluate(const BitString& x) const override { return test_initial_zeros(x); }

 private:
  std::string id_ = "initial-zeros";
};

class OddPositionsTest final : public MLTest {
 public:
  const std::string& id() const override { return id_; }
  int evaluate(const BitString& x) const override { return test_odd_positions(x); }

 private:
  std::string id_ = "odd-positions";
};

class FrequencyTest final : public MLTest {
 public:
  const std::string& id() const override { return id_; }
  // rejection levels are nested (g grows with m), so the level is the last
  // m whose band the string escapes
  int evaluate(const BitString& x) const override {
    int level = 0;
    for (int m = 1; m <= static_cast<int>(x.size()); ++m) {
      if (!test_frequency(x, m)) break;
      level = m;
    }
    return level;
  }

 private:
  std::string id_ = "frequency";
};

// compressibility as a test: strings whose given-length estimate undercuts
// their length score high; the codec identifier budget caps the level mass
class CompressionTest final : public MLTest {
 public:
  explicit CompressionTest(ComplexityRegistry kreg) : kreg_(std::move(kreg)) {}
  const std::string& id() const override { return id_; }
  int evaluate(const BitString& x) const override {
    bits_t est = kreg_.khat_given_length(x).value;
    double level = static_cast<double>(x.size()) - est - 1.0;
    return level > 0 ? static_cast<int>(level) : 0;
  }

 private:
  ComplexityRegistry kreg_;
  std::string id_ = "compression";
};

inline std::shared_ptr<MLTest> initial_zeros_test() { return std::make_shared<InitialZerosTest>(); }
inline std::shared_ptr<MLTest> odd_positions_test() { return std::make_shared<OddPositionsTest>(); }
inline std::shared_ptr<MLTest> frequency_test() { return std::make_shared<FrequencyTest>(); }
inline std::shared_ptr<MLTest> compression_test(ComplexityRegistry kreg) {
  return std::make_shared<CompressionTest>(std::move(kreg));
}

// max over the registry of level minus declaration rank, clamped at zero
inline int universal_test(const MLTestRegistry& registry, const BitString& x) {
  int best = 0;
  for (std::size_t i = 0; i < registry.size(); ++i)
    best = std::max(best, registry[i]->evaluate(x) - static_cast<int>(i) - 1);
  return best;
}

// ---- sum tests ----

struct SumTestCheck {
  double mass = 0;
  bool ok = false;
};

// exhaustive expectation of 2^delta under P over all length-n strings
inline SumTestCheck is_sum_test(const std::function<double(const BitString&)>& delta,
                                const std::function<double(const BitString&)>& p, std::size_t n) {
  if (n > 24) throw std::invalid_argument("is_sum_test: exhaustive domain capped at n = 24");
  SumTestCheck out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    BitString x = BitString::from_index(v, n);
    double mass = p(x);
    if (mass > 0) out.mass += mass * std::exp2(delta(x));
  }
  out.ok = out.mass <= 1.0 + 1e-9;
  return out;
}

struct SumTest {
  int c = 0;
  std::function<double(const BitString&)> evaluate;
};

// logarithmic discount conversion, levels kept nonnegative; c is the least
// integer making the expectation bound hold for every length up to n_max
inline SumTest to_sum_test(const std::shared_ptr<MLTest>& test, const std::function<double(const BitString&)>& p,
                           std::size_t n_max) {
  auto converted = [test](int c) {
    return [test, c](const BitString& x) {
      double d = test->evaluate(x);
      return std::max(0.0, d - 2.0 * std::log2(std::max(d, 1.0)) - c);
    };
  };
  for (int c = 0; c <= 64; ++c) {
    bool ok = true;
    for (std::size_t n = 1; n <= n_max && ok; ++n) ok = is_sum_test(converted(c), p, n).ok;
    if (ok) return {c, converted(c)};
  }
  throw std::logic_error("to_sum_test: no discount within 64 bits");
}

// ---- deficiency ----

inline bits_t typicality_threshold(std::size_t len) {
  return 2.0 * std::log2(std::max<double>(2.0, static_cast<double>(len))) + 8.0;
}

struct DeficiencyReport {
  bits_t value = 0;
  bits_t neg_log_p = 0;
  bits_t khat_term = 0;
  bits_t threshold = 0;
  bool atypical = false;
  std::string distribution;
};

// uniform over the string's own length: value = n - khat(x | n)
inline DeficiencyReport deficiency(const BitString& x, const ComplexityRegistry& kreg) {
  DeficiencyReport rep;
  rep.neg_log_p = static_cast<bits_t>(x.size());
  rep.khat_term = kreg.khat_given_length(x).value;
  rep.value = rep.neg_log_p - rep.khat_term;
  rep.threshold = typicality_threshold(x.size());
  rep.atypical = rep.value > rep.threshold;
  rep.distribution = "uniform:n=" + std::to_string(x.size());
  return rep;
}

// model-induced: value = data_cost - khat(x | H); zero-probability data is
// infinitely deficient
inline DeficiencyReport deficiency(const ModelClass& cls, const Hypothesis& h, const BitString& x,
                                   const ComplexityRegistry& kreg) {
  DeficiencyReport rep;
  rep.neg_log_p = cls.data_cost(h, DataSample{x});
  rep.threshold = typicality_threshold(x.size());
  rep.distribution = cls.id() + ":" + h.label;
  if (rep.neg_log_p == inf_bits) {
    rep.value = inf_bits;
    rep.atypical = true;
    return rep;
  }
  rep.khat_term = kreg.khat_conditional(cls, h, x).value;
  rep.value = rep.neg_log_p - rep.khat_term;
  rep.atypical = rep.value > rep.threshold;
  return rep;
}

inline bits_t fermi_dirac_threshold(std::size_t n) {
  return 2.0 * std::log2(static_cast<double>(n)) + 2.0;
}

// occupation-pattern deficiency within the k-ones slice, clamped at zero
inline bits_t fermi_dirac_deficiency(const BitString& x, std::size_t n, std::size_t k) {
  if (x.size() != n || x.count_ones() != k)
    throw std::invalid_argument("fermi_dirac_deficiency: not a k-ones string of length n");
  bits_t value = log2_binomial(n, k) - ComplexityRegistry::khat_in_slice(x).value;
  return value > 0 ? value : 0.0;
}

// one-sided proxy for "not anomalously favored": the given-length estimate
// stays within a log of the distribution's own code length
inline bool weak_random(const BitString& x, bits_t neg_log_p, const ComplexityRegistry& kreg) {
  return kreg.khat_given_length(x).value <= neg_log_p + std::log2(std::max<double>(2.0, static_cast<double>(x.size())));
}

inline bool weak_random(const BitString& x, const ComplexityRegistry& kreg) {
  return weak_random(x, static_cast<bits_t>(x.size()), kreg);
}

// ---- fundamental inequality ----

struct FIReport {
  bits_t lower = 0;        // khat(D|H) + L(H) - alpha_hat
  bits_t middle = 0;       // -log Pr(D|H) - log P(H)
  bits_t upper = 0;        // khat(D|H) + L(H)
  bits_t alpha_hat = 0;
  bits_t model_cost = 0;
  bits_t data_cost = 0;
  bits_t khat_cond = 0;
  bits_t neg_log_prior = 0;
  bits_t data_deficiency = 0;
  bits_t prior_deficiency = 0;
  bool holds = false;
  bool admissible = false;
};

namespace detail {

// prior weight of one hypothesis outside a selection table; explicit tables
// align with the class's own enumeration order
inline bits_t hypothesis_neg_log_weight(const ModelClass& cls, const Hypothesis& h, const PriorSpec& prior) {
  switch (prior.kind) {
    case PriorSpec::kUniversalProxy: return h.model_cost;
    case PriorSpec::kUniform: return std::log2(static_cast<double>(cls.enumerate(inf_bits).size()));
    case PriorSpec::kExplicit: {
      if (h.index >= prior.weights.size())
        throw std::invalid_argument("fi_check: prior table does not cover the hypothesis");
      double sum = 0;
      for (double v : prior.weights) sum += v;
      if (sum <= 0) throw std::invalid_argument("fi_check: all prior weights zero");
      double w = prior.weights[h.index];
      return w > 0 ? -std::log2(w / sum) : inf_bits;
    }
  }
  return inf_bits;
}

}  // namespace detail

// evaluates the two-sided chain between the two-part code and the joint
// surprisal, with the declared slack on the left and registry slack on the
// right; admissible means both the data and the hypothesis look typical
inline FIReport fi_check(const ModelClass& cls, const Hypothesis& h, const BitString& x, const PriorSpec& prior,
                         const ComplexityRegistry& kreg) {
  FIReport rep;
  rep.model_cost = h.model_cost;
  rep.data_cost = cls.data_cost(h, DataSample{x});
  rep.khat_cond = kreg.khat_conditional(cls, h, x).value;
  rep.neg_log_prior = detail::hypothesis_neg_log_weight(cls, h, prior);
  rep.alpha_hat = prior.description_cost + cls.conditional_coder_cost();

  rep.upper = rep.khat_cond + rep.model_cost;
  rep.lower = rep.upper - rep.alpha_hat;
  rep.middle = rep.data_cost == inf_bits || rep.neg_log_prior == inf_bits ? inf_bits
                                                                          : rep.data_cost + rep.neg_log_prior;
  rep.holds = rep.lower <= rep.middle + 1e-9 && rep.middle <= rep.upper + kRegistrySlack + 1e-9;

  bits_t threshold = typicality_threshold(x.size());
  rep.data_deficiency = rep.data_cost == inf_bits ? inf_bits : rep.data_cost - rep.khat_cond;
  rep.prior_deficiency = rep.neg_log_prior == inf_bits ? inf_bits : rep.neg_log_prior - rep.model_cost;
  rep.admissible = rep.data_deficiency <= threshold && rep.prior_deficiency <= threshold;
  return rep;
}

// diagnostic coverage of the markov bound: P-mass of strings whose one-part
// code stays within log k of the distribution's code length. the estimate
// only upper-bounds the true complexity, so this is reported, not asserted.
inline double markov_coverage(const std::function<double(const BitString&)>& p, double k, std::size_t n,
                              const ComplexityRegistry& kreg) {
  if (n > 24) throw std::invalid_argument("markov_coverage: exhaustive domain capped at n = 24");
  double mass = 0;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    BitString x = BitString::from_index(v, n);
    double px = p(x);
    if (px <= 0) continue;
    if (std::exp2(-kreg.khat(x).value) <= k * px) mass += px;
  }
  return mass;
}

}  // namespace mdl
