#pragma once

// hypothesis classes: deterministic enumerations of hypotheses carrying exact
// model costs (realized prefix-code lengths, the K(H) stand-in) and exact
// conditional data costs -log2 Pr(D|H). every class folds the self-delimiting
// code length of its registry position into model_cost so totals are
// comparable across classes in one joint argmin.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mdl/arith.hpp"
#include "mdl/bitstring.hpp"
#include "mdl/codes.hpp"

namespace mdl {

struct Hypothesis {
  std::string class_id;          // registry key of the owning class
  std::size_t index = 0;         // position in the class's enumeration
  bits_t model_cost = 0;         // L(H) in bits, class identifier included
  std::string label;             // human-readable parameters
  std::vector<double> params;    // class-specific parameter record
};

struct SupervisedPairs {
  std::vector<double> x, y;
  unsigned precision_bits = 8;  // quantization, bits of fraction per coordinate
};

// either a plain bit string or a supervised (x, y) sample
struct DataSample {
  std::variant<BitString, SupervisedPairs> value;

  DataSample() : value(BitString()) {}
  explicit DataSample(BitString b) : value(std::move(b)) {}
  explicit DataSample(SupervisedPairs p) : value(std::move(p)) {}

  bool is_bits() const { return std::holds_alternative<BitString>(value); }
  const BitString& bits() const {
    if (!is_bits()) throw std::invalid_argument("DataSample: expected a bit string");
    return std::get<BitString>(value);
  }
  const SupervisedPairs& pairs() const {
    if (is_bits()) throw std::invalid_argument("DataSample: expected supervised pairs");
    return std::get<SupervisedPairs>(value);
  }
};

// fixed registry positions; identifier cost is the standard self-delimiting
// code of the position, so class headers form a prefix code
enum : std::size_t {
  kRegistryBernoulli = 0,
  kRegistryCounting = 1,
  kRegistryPolynomial = 2,
  kRegistrySets = 3,
  kRegistryMarkov = 4,
};

inline bits_t class_header_cost(std::size_t registry_position) {
  return static_cast<bits_t>(encode_standard(binary_numeral(registry_position)).size());
}

class ModelClass {
 public:
  virtual ~ModelClass() = default;
  virtual const std::string& id() const = 0;
  virtual std::size_t registry_position() const = 0;

  // deterministic, stable list of hypotheses with model_cost <= budget
  virtual std::vector<Hypothesis> enumerate(bits_t budget) const = 0;
  // hypotheses worth scoring against one sample; classes with data-indexed
  // members (singletons, cylinders) override this
  virtual std::vector<Hypothesis> enumerate_for(const DataSample&, bits_t budget) const { return enumerate(budget); }

  virtual bits_t data_cost(const Hypothesis& h, const DataSample& d) const = 0;

  // declared description cost of the conditional coder Pr(.|H), the K(Pr(.|H))
  // stand-in inside the fundamental-inequality slack
  virtual bits_t conditional_coder_cost() const = 0;

  // sequential model realizing Pr(.|H) bit by bit, or null if the class has none
  virtual std::unique_ptr<BitPredictor> predictor(const Hypothesis&) const { return nullptr; }

  // per-point correctness for supervised samples (explanation-based selection);
  // empty when the class does not classify
  virtual std::vector<bool> classification(const Hypothesis&, const DataSample&) const { return {}; }

  bits_t header_cost() const { return class_header_cost(registry_position()); }
};

// log2 of C(n, k); exact integer arithmetic below 63 bits, lgamma beyond
inline double log2_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("log2_binomial: k > n");
  if (k > n - k) k = n - k;
  if (n <= 62) {
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::log2(static_cast<double>(c));
  }
  return (std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
          std::lgamma(static_cast<double>(n - k) + 1)) / std::log(2.0);
}

inline std::uint64_t binomial_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// ---- Bernoulli processes on a dyadic parameter grid ----

class BernoulliClass final : public ModelClass {
 public:
  explicit BernoulliClass(unsigned r) : r_(r), id_("bernoulli:r=" + std::to_string(r)) {
    if (r < 1 || r > 24) throw std::invalid_argument("bernoulli_class: need 1 <= r <= 24");
  }

  const std::string& id() const override { return id_; }
  std::size_t registry_position() const override { return kRegistryBernoulli; }
  unsigned resolution() const { return r_; }

  // p = i/2^r for i = 0..2^r, endpoints included as the forcing hypotheses;
  // all hypotheses share the minimal cost r + header
  std::vector<Hypothesis> enumerate(bits_t budget) const override {
    std::vector<Hypothesis> out;
    bits_t cost = static_cast<bits_t>(r_) + header_cost();
    if (cost > budget + 1e-9) return out;
    std::uint64_t points = (std::uint64_t{1} << r_) + 1;
    out.reserve(points);
    for (std::uint64_t i = 0; i < points; ++i) {
      double p = std::ldexp(static_cast<double>(i), -static_cast<int>(r_));
      out.push_back({id_, i, cost, "p=" + format_p(p), {p}});
    }
    return out;
  }

  bits_t data_cost(const Hypothesis& h, const DataSample& d) const override {
    const BitString& bits = d.bits();
    double p = h.params.at(0);
    std::size_t n = bits.size(), k = bits.count_ones();
    return bernoulli_cost(p, k, n);
  }

  static bits_t bernoulli_cost(double p, std::size_t ones, std::size_t n) {
    std::size_t zeros = n - ones;
    if (p <= 0) return ones == 0 ? 0.0 : inf_bits;
    if (p >= 1) return zeros == 0 ? 0.0 : inf_bits;
    bits_t c = 0;
    if (ones) c -= static_cast<double>(ones) * std::log2(p);
    if (zeros) c -= static_cast<double>(zeros) * std::log2(1.0 - p);
    return c;
  }

  bits_t conditional_coder_cost() const override {
    return header_cost() + static_cast<bits_t>(encode_natural_length(r_));
  }

  std::unique_ptr<BitPredictor> predictor(const Hypothesis& h) const override {
    return std::make_unique<FixedBernoulli>(h.params.at(0));
  }

  static std::string format_p(double p) {
    std::ostringstream os;
    os << p;
    return os.str();
  }

 private:
  unsigned r_;
  std::string id_;
};

inline std::shared_ptr<ModelClass> bernoulli_class(unsigned r) { return std::make_shared<BernoulliClass>(r); }

// ---- counting hypotheses: "D has exactly k ones", uniform within the slice ----

// recovers exactly log2 C(n,k) total cost: P(next=1) = ones left / positions left
class SliceIndexPredictor final : public BitPredictor {
 public:
  SliceIndexPredictor(std::size_t n, std::size_t k) : left_(n), ones_left_(k) {}
  double prob_one() const override {
    if (left_ == 0) return 0.5;  // past the end; never queried by well-formed callers
    return static_cast<double>(ones_left_) / static_cast<double>(left_);
  }
  void update(int bit) override {
    if (left_ == 0) return;
    --left_;
    if (bit && ones_left_ > 0) --ones_left_;
  }
  std::unique_ptr<BitPredictor> clone() const override { return std::make_unique<SliceIndexPredictor>(*this); }

 private:
  std::size_t left_, ones_left_;
};

class CountingClass final : public ModelClass {
 public:
  explicit CountingClass(std::size_t n) : n_(n), id_("counting:n=" + std::to_string(n)) {
    if (n < 1) throw std::invalid_argument("counting_class: need n >= 1");
  }

  const std::string& id() const override { return id_; }
  std::size_t registry_position() const override { return kRegistryCounting; }
  std::size_t length() const { return n_; }

  std::vector<Hypothesis> enumerate(bits_t budget) const override {
    std::vector<Hypothesis> out;
    bits_t cost = std::ceil(std::log2(static_cast<double>(n_) + 1)) + header_cost();
    if (cost > budget + 1e-9) return out;
    for (std::size_t k = 0; k <= n_; ++k)
      out.push_back({id_, k, cost, "k=" + std::to_string(k), {static_cast<double>(k)}});
    return out;
  }

  bits_t data_cost(const Hypothesis& h, const DataSample& d) const override {
    const BitString& bits = d.bits();
    auto k = static_cast<std::size_t>(h.params.at(0));
    if (bits.size() != n_ || bits.count_ones() != k) return inf_bits;
    return log2_binomial(n_, k);
  }

  bits_t conditional_coder_cost() const override {
    return header_cost() + static_cast<bits_t>(encode_natural_length(n_));
  }

  std::unique_ptr<BitPredictor> predictor(const Hypothesis& h) const override {
    return std::make_unique<SliceIndexPredictor>(n_, static_cast<std::size_t>(h.params.at(0)));
  }

 private:
  std::size_t n_;
  std::string id_;
};

inline std::shared_ptr<ModelClass> counting_class(std::size_t n) { return std::make_shared<CountingClass>(n); }

// ---- Markov chains of order m with a grid-quantized transition table ----

class MarkovClass final : public ModelClass {
 public:
  MarkovClass(unsigned order, unsigned r)
      : m_(order), r_(r), id_("markov:m=" + std::to_string(order) + ",r=" + std::to_string(r)) {
    if (order > 4) throw std::invalid_argument("markov_class: need m <= 4");
    if (r < 1 || r > 24) throw std::invalid_argument("markov_class: need 1 <= r <= 24");
    // (2^r + 1)^(2^m) hypotheses; refuse clearly infeasible enumerations
    double count = std::pow(std::ldexp(1.0, r) + 1, std::ldexp(1.0, m_));
    if (count > 4e6) throw std::invalid_argument("markov_class: enumeration too large for this (m, r)");
  }

  const std::string& id() const override { return id_; }
  std::size_t registry_position() const override { return kRegistryMarkov; }
  unsigned order() const { return m_; }

  bits_t table_cost() const {
    return static_cast<bits_t>(encode_standard(binary_numeral(m_)).size()) +
           static_cast<bits_t>((std::size_t{1} << m_) * r_) + header_cost();
  }

  // mixed-radix counter over contexts, context 0 most significant; per-context
  // probability runs 0, 1/2^r, ..., 1
  std::vector<Hypothesis> enumerate(bits_t budget) const override {
    std::vector<Hypothesis> out;
    bits_t cost = table_cost();
    if (cost > budget + 1e-9) return out;
    std::size_t contexts = std::size_t{1} << m_;
    std::uint64_t base = (std::uint64_t{1} << r_) + 1;
    std::uint64_t total = 1;
    for (std::size_t c = 0; c < contexts; ++c) total *= base;
    out.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::vector<double> table(contexts);
      std::uint64_t rem = idx;
      for (std::size_t c = contexts; c-- > 0;) {
        table[c] = std::ldexp(static_cast<double>(rem % base), -static_cast<int>(r_));
        rem /= base;
      }
      std::string label = "P(1|ctx)=";
      for (std::size_t c = 0; c < contexts; ++c) label += (c ? "," : "") + BernoulliClass::format_p(table[c]);
      out.push_back({id_, idx, cost, label, std::move(table)});
    }
    return out;
  }

  bits_t data_cost(const Hypothesis& h, const DataSample& d) const override {
    const BitString& bits = d.bits();
    std::size_t contexts = std::size_t{1} << m_;
    if (h.params.size() != contexts) throw std::invalid_argument("markov data_cost: bad parameter record");
    // count transitions once, then charge count * log2 p per cell
    std::vector<std::size_t> ones(contexts, 0), zeros(contexts, 0);
    std::size_t ctx = 0, mask = contexts - 1;
    for (std::size_t t = 0; t < bits.size(); ++t) {
      (bits[t] ? ones : zeros)[ctx]++;
      ctx = ((ctx << 1) | static_cast<std::size_t>(bits[t])) & mask;
    }
    bits_t cost = 0;
    for (std::size_t c = 0; c < contexts; ++c) {
      double p = h.params[c];
      bits_t cell = BernoulliClass::bernoulli_cost(p, ones[c], ones[c] + zeros[c]);
      if (cell == inf_bits) return inf_bits;
      cost += cell;
    }
    return cost;
  }

  bits_t conditional_coder_cost() const override {
    return header_cost() + static_cast<bits_t>(encode_standard(binary_numeral(m_)).size()) +
           static_cast<bits_t>(encode_natural_length(r_));
  }

  std::unique_ptr<BitPredictor> predictor(const Hypothesis& h) const override {
    return std::make_unique<FixedMarkov>(m_, h.params);
  }

 private:
  unsigned m_, r_;
  std::string id_;
};

inline std::shared_ptr<ModelClass> markov_class(unsigned order, unsigned r) {
  return std::make_shared<MarkovClass>(order, r);
}

// ---- registry and plumbing ----

class ClassRegistry {
 public:
  // adding a class twice under the same id is a no-op
  void add(std::shared_ptr<ModelClass> c) {
    for (const auto& existing : classes_)
      if (existing->id() == c->id()) return;
    classes_.push_back(std::move(c));
  }
  const std::vector<std::shared_ptr<ModelClass>>& classes() const { return classes_; }
  bool empty() const { return classes_.empty(); }

  // all hypotheses within budget, class order preserved
  std::vector<std::pair<const ModelClass*, Hypothesis>> enumerate_for(const DataSample& d, bits_t budget) const {
    std::vector<std::pair<const ModelClass*, Hypothesis>> out;
    for (const auto& c : classes_)
      for (auto& h : c->enumerate_for(d, budget)) out.emplace_back(c.get(), std::move(h));
    return out;
  }

 private:
  std::vector<std::shared_ptr<ModelClass>> classes_;
};

// ---- supervised csv: '# precision_bits=N' header, optional 'x,y' row ----

inline SupervisedPairs read_pairs_csv(std::istream& in) {
  SupervisedPairs out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("precision_bits=");
      if (pos != std::string::npos) out.precision_bits = static_cast<unsigned>(std::stoul(line.substr(pos + 15)));
      continue;
    }
    if (line == "x,y") continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("read_pairs_csv: expected 'x,y' row: " + line);
    out.x.push_back(std::stod(line.substr(0, comma)));
    out.y.push_back(std::stod(line.substr(comma + 1)));
  }
  if (out.x.size() != out.y.size()) throw std::invalid_argument("read_pairs_csv: ragged columns");
  return out;
}

inline void write_pairs_csv(std::ostream& os, const SupervisedPairs& p) {
  os << "# precision_bits=" << p.precision_bits << "\n" << "x,y\n";
  for (std::size_t i = 0; i < p.x.size(); ++i) os << p.x[i] << ',' << p.y[i] << '\n';
}

}  // namespace mdl
